// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqekit/circuit.hpp"
#include "vqekit/hamiltonian.hpp"
#include "vqekit/pauli.hpp"
#include "vqekit/state.hpp"
#include "vqekit/topology.hpp"

namespace vqekit {

enum class PoolOrigin { singles_doubles, custom };

struct OperatorPool {
    std::vector<PauliString> operators;
    PoolOrigin origin = PoolOrigin::singles_doubles;
};

// Pool of Hermitian rotation generators: every Pauli word of support 1 or 2
// with an odd Y count, plus the Z-free words of support 3 or 4 with an odd
// Y count (the words produced by two-body excitation generators). Sorted in
// string order, no duplicates.
OperatorPool build_pool(std::size_t n_qubits);

// Selection score of candidate generator p at |psi>: the exact derivative
// d/dθ <psi| e^{-iθp} H e^{iθp} |psi> at θ = 0, i.e. <psi| i[H, p] |psi>.
double pool_score(const PauliSum& h, const PauliString& p, const QuantumState& state);

struct OptimizerSettings {
    double gradient_tolerance = 1e-6;  // infinity norm of the energy gradient
    std::size_t max_iterations = 500;
    double initial_step = 0.1;
    double line_search_tolerance = 0.1;
};

struct OptimizeResult {
    std::vector<double> thetas;
    double energy = 0.0;
    std::size_t iterations = 0;
    bool converged = false;  // gradient tolerance met before the iteration cap
};

// Minimizes E(θ) = <ref| U† H U |ref> for U = e^{iθ_m P_m} ⋯ e^{iθ_1 P_1}
// (generators applied in list order) by quasi-Newton descent with exact
// adjoint-mode gradients. The result never exceeds the initial energy; a
// stationary start (zero gradient at a non-minimum) is escaped through
// deterministic ±0.25 probe restarts, accepted only on strict improvement.
// Non-convergence within the iteration cap returns the best point seen with
// converged = false.
OptimizeResult optimize_parameters(const PauliSum& h, std::uint64_t reference,
                                   const std::vector<PauliString>& generators,
                                   std::vector<double> initial_thetas,
                                   const OptimizerSettings& settings = {});

struct EnergyGradient {
    double energy = 0.0;
    std::vector<double> gradient;  // dE/dθ_k, one entry per generator
};

// Energy of the ansatz state U|ref> together with its exact gradient,
// computed in one forward and one adjoint sweep (no finite differences).
// Same input validation as optimize_parameters.
EnergyGradient ansatz_energy_gradient(const PauliSum& h, std::uint64_t reference,
                                      const std::vector<PauliString>& generators,
                                      const std::vector<double>& thetas);

struct AdaptConfig {
    double delta_f = 1e-3;   // score tolerance
    double delta_c = 1e-6;   // energy convergence threshold, Hartree
    std::size_t n_max = 20;  // maximum number of appended operators
    std::optional<HardwareTopology> hardware;  // enables biased scoring
    BiasOptions bias;                          // used only with hardware set
    OptimizerSettings optimizer;

    void validate() const;
};

enum class AdaptTermination { score_converged, energy_converged, max_iterations };

std::string_view termination_name(AdaptTermination t);

struct AdaptTraceRow {
    std::size_t iteration = 0;  // 1-based index of the appended operator
    PauliString op;
    double score = 0.0;         // |f| of the chosen operator (biased if enabled)
    double energy = 0.0;        // E_n after re-optimization
    double energy_delta = 0.0;  // |E_n − E_{n−1}|
    std::size_t cnot_count = 0; // compiled ansatz after inverse-pair cancellation
};

struct AdaptResult {
    Circuit ansatz;  // compiled final circuit, slots bound by exponential_slot_values
    std::vector<PauliString> generators;
    std::vector<double> thetas;
    double energy = 0.0;            // E_n of the final ansatz
    double reference_energy = 0.0;  // <ref|H|ref>, reported alongside the trace
    std::vector<AdaptTraceRow> trace;
    AdaptTermination termination = AdaptTermination::score_converged;
    bool optimizer_warning = false;  // an inner optimization hit its iteration cap
};

// Thrown when the inner optimization yields a non-finite energy: the growth
// loop aborts, but everything accumulated up to the failing append survives
// in partial().
class AdaptAbort : public std::runtime_error {
  public:
    AdaptAbort(const std::string& message, AdaptResult partial);
    const AdaptResult& partial() const noexcept { return partial_; }

  private:
    AdaptResult partial_;
};

// The adaptive growth loop: score the pool at the current state, append the
// argmax-|score| generator (ties to the smallest Pauli word in string order),
// warm-start re-optimize all parameters with the new one at 0, and stop on
// score tolerance, energy convergence, or the operator cap. The first energy
// convergence comparison uses a stand-in previous energy of 0, so thresholds
// below |E_1| cannot fire before the second appended operator.
AdaptResult run_adapt(const LabeledHamiltonian& h, std::uint64_t reference,
                      const AdaptConfig& cfg = {});

// Reference occupations for the nitrogen curve: |11000⟩ for bonds ≤ 1.2 Å,
// |10000⟩ between 1.2 and 2.0 Å, |00000⟩ at 2.0 Å and beyond.
std::uint64_t default_reference_for(double bond_length);

// One JSON object per appended operator (iteration, operator, score, energy,
// energy_delta, cnot_count), newline-terminated.
std::string trace_json_lines(const AdaptResult& result);

}  // namespace vqekit
