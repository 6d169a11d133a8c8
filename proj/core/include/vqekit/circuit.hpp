// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Gate-level circuit IR in the native set {H, X, sqrt-X, RZ(phi), CNOT,
// CPhase(phi)} plus the passes built on it: Pauli-exponential compilation,
// adjacent inverse-pair cancellation, idle-window dynamical decoupling, and
// CNOT noise amplification. Circuits are immutable values once built; every
// pass returns a new circuit.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vqekit/pauli.hpp"

namespace vqekit {

enum class GateKind { h, x, sx, rz, cnot, cp };

// Serialization mnemonic: "H", "X", "SX", "RZ", "CNOT", "CP".
std::string_view gate_name(GateKind kind);

struct Gate {
    static constexpr std::size_t no_slot = static_cast<std::size_t>(-1);
    static constexpr std::size_t no_operand = static_cast<std::size_t>(-1);

    GateKind kind = GateKind::h;
    std::size_t q0 = 0;             // single-qubit target / CNOT control / first CP operand
    std::size_t q1 = no_operand;    // CNOT target / second CP operand
    double angle = 0.0;             // RZ (when unslotted) and CP
    std::size_t slot = no_slot;     // RZ only; index into the circuit's slot table
    bool dd_pulse = false;          // X inserted by insert_dd; exempt from gate noise

    static Gate hadamard(std::size_t q);
    static Gate pauli_x(std::size_t q);
    static Gate sqrt_x(std::size_t q);
    static Gate rotation_z(std::size_t q, double angle);
    static Gate rotation_z_slot(std::size_t q, std::size_t slot);
    static Gate controlled_not(std::size_t control, std::size_t target);
    static Gate controlled_phase(std::size_t a, std::size_t b, double angle);

    bool is_two_qubit() const noexcept { return kind == GateKind::cnot || kind == GateKind::cp; }
};

class CircuitFormatError : public std::runtime_error {
  public:
    CircuitFormatError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class Circuit {
  public:
    // Zero-qubit placeholder so result structs can default-construct.
    Circuit() = default;
    explicit Circuit(std::size_t n_qubits);

    std::size_t n_qubits() const noexcept { return n_; }
    const std::vector<Gate>& gates() const noexcept { return gates_; }
    const std::vector<std::string>& slot_names() const noexcept { return slots_; }
    std::size_t n_slots() const noexcept { return slots_.size(); }

    // Registers a parameter slot; names must be unique, non-empty, and not
    // parse as a number (they share the RZ angle position in the text form).
    std::size_t add_slot(std::string name);

    // Appends after range/operand checks; slotted gates must be RZ and
    // reference a registered slot.
    void append(Gate gate);

    std::size_t cnot_count() const noexcept;
    std::size_t two_qubit_count() const noexcept;
    std::size_t single_qubit_count() const noexcept;

    // Re-checks structural invariants, including that every registered slot
    // is referenced by at least one gate. Throws std::logic_error.
    void validate() const;

  private:
    std::size_t n_ = 0;
    std::vector<Gate> gates_;
    std::vector<std::string> slots_;
};

// Compiles e^{i theta P}: per-qubit basis change into Z, a CNOT parity ladder
// over ascending support pairs onto the highest-index support qubit, RZ there
// referencing `slot`, then the mirrored unladder and unbasis. The bound slot
// value is the literal RZ angle; the exponential angle theta corresponds to
// slot value -2*theta (see exponential_slot_values). Throws on identity words
// and on inputs with a nontrivial phase factor.
void append_exponential(Circuit& circuit, const PauliString& p, std::size_t slot);
Circuit compile_exponential(const PauliString& p, std::string slot_name = "theta0");

// Maps exponential angles theta_k to slot values -2*theta_k.
std::vector<double> exponential_slot_values(std::span<const double> thetas);

// X-preparation of `reference` (ascending qubit order) followed by one
// exponential per generator with slots theta0..theta{m-1}, then adjacent
// inverse-pair cancellation (which never touches slotted gates).
Circuit compile_ansatz(std::size_t n_qubits, std::uint64_t reference,
                       std::span<const PauliString> generators);

// Undirected weighted interaction graph. Edge keys are normalized to u < v.
struct CouplingGraph {
    std::set<std::size_t> nodes;
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> edges;

    void add_node(std::size_t u);
    // Accumulates weight; throws on self-loops or zero weight.
    void add_edge(std::size_t u, std::size_t v, std::uint64_t weight = 1);

    bool has_edge(std::size_t u, std::size_t v) const;
    std::uint64_t total_weight() const;                 // W
    std::uint64_t node_strength(std::size_t u) const;   // sum of incident weights
    std::size_t degree(std::size_t u) const;
};

// Nodes are the qubits touched by at least one gate (all qubits when
// include_idle); edge weight counts two-qubit gates on each pair.
CouplingGraph coupling_graph(const Circuit& circuit, bool include_idle = false);

struct GateDurations {
    double single = 1.0;
    double two_qubit = 2.0;

    double of(const Gate& gate) const;
};

// ASAP-schedules the circuit and, on every idle window of length >=
// 2 x duration(X) (gaps between a qubit's busy intervals, plus the trailing
// gap to the circuit end), inserts an X-X pulse pair at 1/3 and 2/3 of the
// window. Pulses carry dd_pulse = true. The unitary is unchanged.
Circuit insert_dd(const Circuit& circuit, const GateDurations& durations = {});

// Replaces each CNOT by H(target) . [CP(pi/lambda)]^lambda . H(target) with
// every CP expanded into {CNOT, RZ}: exactly 2*lambda CNOT and 3*lambda + 2
// single-qubit gates per original CNOT. The noiseless unitary is preserved
// up to global phase. Throws on lambda = 0.
Circuit amplify_noise(const Circuit& circuit, std::uint64_t lambda);

// Removes adjacent inverse pairs (H-H, X-X, CNOT-CNOT on the same operands,
// RZ/CP pairs with opposite fixed angles) until a fixpoint. Slotted and
// dd_pulse gates are never removed.
Circuit cancel_inverse_pairs(const Circuit& circuit);

// Line-oriented text form:
//   # n_qubits: 5
//   # slots: theta0 theta1
//   X 4
//   RZ 2 theta0
//   RZ 0 -1.5707963268
//   CNOT 0 1
//   CP 0 1 1.0471975512
// Fixed angles print with 10 decimals. The dd_pulse flag is not serialized.
std::string serialize_circuit(const Circuit& circuit);
Circuit parse_circuit(std::istream& in);
Circuit parse_circuit(std::string_view text);

}  // namespace vqekit
