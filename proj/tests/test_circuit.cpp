// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Circuit IR and its passes, checked structurally and against dense
// unitaries: Pauli-exponential compilation, ansatz assembly, inverse-pair
// cancellation, idle-window decoupling pulses, CNOT noise amplification,
// interaction graphs, and the text form.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "vqekit/circuit.hpp"
#include "vqekit/pauli.hpp"

using namespace vqekit;
using oracle::Matrix;

namespace {

// |tr(A^dagger B)| / dim: 1 iff equal up to a global phase.
double unitary_fidelity(const Matrix& a, const Matrix& b) {
    return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

Circuit random_circuit(std::mt19937_64& rng, std::size_t n, std::size_t n_gates,
                       bool with_slots) {
    Circuit c(n);
    std::size_t slot = Circuit{}.n_slots();
    std::size_t n_slots = 0;
    if (with_slots) {
        c.add_slot("alpha");
        c.add_slot("beta");
        n_slots = 2;
    }
    std::uniform_int_distribution<std::size_t> pick_kind(0, 5);
    std::uniform_int_distribution<std::size_t> pick_qubit(0, n - 1);
    std::uniform_real_distribution<double> pick_angle(-3.0, 3.0);
    for (std::size_t i = 0; i < n_gates; ++i) {
        const std::size_t q = pick_qubit(rng);
        switch (pick_kind(rng)) {
            case 0: c.append(Gate::hadamard(q)); break;
            case 1: c.append(Gate::pauli_x(q)); break;
            case 2: c.append(Gate::sqrt_x(q)); break;
            case 3:
                if (n_slots && (i % 2)) {
                    c.append(Gate::rotation_z_slot(q, slot % n_slots));
                    ++slot;
                } else {
                    c.append(Gate::rotation_z(q, pick_angle(rng)));
                }
                break;
            case 4: {
                std::size_t t = pick_qubit(rng);
                if (t == q) t = (t + 1) % n;
                c.append(Gate::controlled_not(q, t));
                break;
            }
            default: {
                std::size_t t = pick_qubit(rng);
                if (t == q) t = (t + 1) % n;
                c.append(Gate::controlled_phase(q, t, pick_angle(rng)));
                break;
            }
        }
    }
    // Guarantee every registered slot is referenced.
    if (with_slots) {
        c.append(Gate::rotation_z_slot(0, 0));
        c.append(Gate::rotation_z_slot(0, 1));
    }
    return c;
}

}  // namespace

TEST_CASE("append validates operands and slots") {
    Circuit c(3);
    CHECK_THROWS_AS(c.append(Gate::hadamard(3)), std::invalid_argument);
    CHECK_THROWS_AS(c.append(Gate::controlled_not(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(c.append(Gate::controlled_not(0, 5)), std::invalid_argument);
    CHECK_THROWS_AS(c.append(Gate::rotation_z_slot(0, 0)), std::invalid_argument);  // no slots

    const std::size_t slot = c.add_slot("theta0");
    CHECK_NOTHROW(c.append(Gate::rotation_z_slot(0, slot)));

    // Slots must be unique, non-empty, and not look like numbers.
    CHECK_THROWS_AS(c.add_slot("theta0"), std::invalid_argument);
    CHECK_THROWS_AS(c.add_slot(""), std::invalid_argument);
    CHECK_THROWS_AS(c.add_slot("1.5"), std::invalid_argument);
}

TEST_CASE("validate flags unreferenced slots") {
    Circuit c(1);
    c.add_slot("theta0");
    CHECK_THROWS_AS(c.validate(), std::logic_error);
    c.append(Gate::rotation_z_slot(0, 0));
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("gate counts distinguish one- and two-qubit gates") {
    Circuit c(3);
    c.append(Gate::hadamard(0));
    c.append(Gate::controlled_not(0, 1));
    c.append(Gate::controlled_phase(1, 2, 0.5));
    c.append(Gate::sqrt_x(2));
    c.append(Gate::controlled_not(2, 0));
    CHECK(c.cnot_count() == 2);
    CHECK(c.two_qubit_count() == 3);
    CHECK(c.single_qubit_count() == 2);
}

TEST_CASE("compiled exponentials match the dense matrix exponential") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> angle(-2.5, 2.5);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const PauliString p = PauliString::parse(oracle::random_word(rng, n, false));
        const double theta = angle(rng);

        const Circuit c = compile_exponential(p);
        REQUIRE(c.n_slots() == 1);
        CHECK(c.slot_names()[0] == "theta0");

        const std::vector<double> slots = exponential_slot_values(std::vector<double>{theta});
        const double f = unitary_fidelity(oracle::circuit_unitary(c, slots),
                                          oracle::exp_i_theta(oracle::pauli_matrix(p), theta));
        REQUIRE(f == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("exponential compilation structure: ladder onto the top support qubit") {
    const Circuit c = compile_exponential(PauliString::parse("ZIZ"));
    // Z letters need no basis change: CNOT(0 -> 2), RZ(2), CNOT(0 -> 2).
    REQUIRE(c.gates().size() == 3);
    CHECK(c.gates()[0].kind == GateKind::cnot);
    CHECK(c.gates()[1].kind == GateKind::rz);
    CHECK(c.gates()[1].q0 == 2);
    CHECK(c.gates()[1].slot == 0);
    CHECK(c.gates()[2].kind == GateKind::cnot);

    const Circuit single = compile_exponential(PauliString::parse("ZI"));
    REQUIRE(single.gates().size() == 1);
    CHECK(single.gates()[0].kind == GateKind::rz);
    CHECK(single.gates()[0].q0 == 1);  // leftmost letter is the high qubit

    // Weight-k words use exactly 2(k-1) CNOTs.
    CHECK(compile_exponential(PauliString::parse("XYZX")).cnot_count() == 6);
}

TEST_CASE("exponential compilation rejects identity words and phased inputs") {
    CHECK_THROWS_AS(compile_exponential(PauliString::identity(2)), std::invalid_argument);
    const PauliString phased = PauliString::from_word(PauliString::parse("XY").word(), 2, 1);
    CHECK_THROWS_AS(compile_exponential(phased), std::invalid_argument);
}

TEST_CASE("exponential_slot_values maps theta to -2 theta") {
    const std::vector<double> thetas{0.5, -1.25, 0.0};
    const std::vector<double> slots = exponential_slot_values(thetas);
    REQUIRE(slots.size() == 3);
    CHECK(slots[0] == -1.0);
    CHECK(slots[1] == 2.5);
    CHECK(slots[2] == 0.0);
}

TEST_CASE("compiled ansatz prepares the reference then applies generators in order") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> angle(-1.5, 1.5);

    const std::vector<PauliString> generators = {
        PauliString::parse("IIIYX"),
        PauliString::parse("IYXII"),
        PauliString::parse("YIIII"),
    };
    const std::uint64_t reference = 0b11000;
    const std::vector<double> thetas{angle(rng), angle(rng), angle(rng)};

    const Circuit c = compile_ansatz(5, reference, generators);
    REQUIRE(c.n_slots() == 3);
    CHECK(c.slot_names() == std::vector<std::string>{"theta0", "theta1", "theta2"});
    // Reference preparation comes first, ascending qubit order.
    CHECK(c.gates()[0].kind == GateKind::x);
    CHECK(c.gates()[0].q0 == 3);
    CHECK(c.gates()[1].kind == GateKind::x);
    CHECK(c.gates()[1].q0 == 4);

    // Dense check of the full preparation + exponentials.
    oracle::Vector v = oracle::Vector::Zero(32);
    v[static_cast<Eigen::Index>(reference)] = 1.0;
    for (std::size_t k = 0; k < generators.size(); ++k)
        v = oracle::exp_i_theta(oracle::pauli_matrix(generators[k]), thetas[k]) * v;

    oracle::Vector zero = oracle::Vector::Zero(32);
    zero[0] = 1.0;
    const oracle::Vector got =
        oracle::circuit_unitary(c, exponential_slot_values(thetas)) * zero;
    CHECK(std::abs(got.dot(v)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cancel_inverse_pairs removes adjacent inverses to a fixpoint") {
    Circuit c(2);
    c.append(Gate::hadamard(0));
    c.append(Gate::pauli_x(1));
    c.append(Gate::pauli_x(1));
    c.append(Gate::hadamard(0));
    // H X X H: the inner X-X pair cancels first, then the outer H-H pair.
    CHECK(cancel_inverse_pairs(c).gates().empty());

    Circuit d(2);
    d.append(Gate::controlled_not(0, 1));
    d.append(Gate::controlled_not(0, 1));
    CHECK(cancel_inverse_pairs(d).gates().empty());

    Circuit e(2);
    e.append(Gate::controlled_not(0, 1));
    e.append(Gate::controlled_not(1, 0));  // different operands: kept
    CHECK(cancel_inverse_pairs(e).gates().size() == 2);

    Circuit f(1);
    f.append(Gate::rotation_z(0, 0.75));
    f.append(Gate::rotation_z(0, -0.75));
    CHECK(cancel_inverse_pairs(f).gates().empty());
}

TEST_CASE("cancel_inverse_pairs never touches slotted or decoupling gates") {
    Circuit c(1);
    c.add_slot("theta0");
    c.append(Gate::rotation_z_slot(0, 0));
    c.append(Gate::rotation_z_slot(0, 0));
    CHECK(cancel_inverse_pairs(c).gates().size() == 2);

    Circuit d(1);
    Gate pulse = Gate::pauli_x(0);
    pulse.dd_pulse = true;
    d.append(pulse);
    d.append(pulse);
    CHECK(cancel_inverse_pairs(d).gates().size() == 2);
}

TEST_CASE("cancel_inverse_pairs preserves the unitary on random circuits") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit c = random_circuit(rng, 3, 24, false);
        const Circuit reduced = cancel_inverse_pairs(c);
        CHECK(reduced.gates().size() <= c.gates().size());
        CHECK(unitary_fidelity(oracle::circuit_unitary(c, {}),
                               oracle::circuit_unitary(reduced, {})) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("decoupling pulses appear only in idle windows long enough for both") {
    // q0 is busy [0,1) then idle while two CNOTs run on q1,q2: window [1,5).
    Circuit c(3);
    c.append(Gate::pauli_x(0));
    c.append(Gate::controlled_not(1, 2));
    c.append(Gate::controlled_not(1, 2));

    const Circuit dd = insert_dd(c);
    std::size_t pulses = 0;
    for (const Gate& g : dd.gates())
        if (g.dd_pulse) {
            ++pulses;
            CHECK(g.kind == GateKind::x);
            CHECK(g.q0 == 0);
        }
    CHECK(pulses == 2);
    CHECK(dd.gates().size() == c.gates().size() + 2);

    // The unitary is untouched (the pulse pair multiplies to identity).
    CHECK(unitary_fidelity(oracle::circuit_unitary(c, {}), oracle::circuit_unitary(dd, {})) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("short windows and untouched wires receive no pulses") {
    Circuit d(3);
    d.append(Gate::hadamard(0));
    d.append(Gate::controlled_not(1, 2));  // q0 idle [1,2): length 1 < 2
    const Circuit dd = insert_dd(d);
    CHECK(dd.gates().size() == d.gates().size());

    // q2 untouched entirely in this circuit: stays bare.
    Circuit e(3);
    e.append(Gate::pauli_x(0));
    e.append(Gate::pauli_x(0));
    e.append(Gate::pauli_x(0));
    e.append(Gate::pauli_x(0));
    const Circuit edd = insert_dd(e);
    for (const Gate& g : edd.gates()) CHECK(g.q0 == 0);
}

TEST_CASE("noise amplification: exact per-CNOT gate law") {
    std::mt19937_64 rng(34);
    const Circuit base = random_circuit(rng, 3, 20, false);
    const std::size_t cnots = base.cnot_count();
    const std::size_t singles = base.single_qubit_count();
    REQUIRE(cnots > 0);

    for (std::uint64_t lambda : {1, 2, 3, 5}) {
        const Circuit amp = amplify_noise(base, lambda);
        CHECK(amp.cnot_count() == 2 * lambda * cnots);
        CHECK(amp.single_qubit_count() == singles + (3 * lambda + 2) * cnots);
        CHECK(unitary_fidelity(oracle::circuit_unitary(base, {}),
                               oracle::circuit_unitary(amp, {})) >=
              1.0 - 1e-9);
    }
    CHECK_THROWS_AS(amplify_noise(base, 0), std::invalid_argument);
}

TEST_CASE("noise amplification leaves parameter slots intact") {
    const Circuit ansatz =
        compile_ansatz(3, 0b001,
                       std::vector<PauliString>{PauliString::parse("IYX"),
                                                PauliString::parse("YXI")});
    const std::vector<double> slots = exponential_slot_values(std::vector<double>{0.3, -0.7});
    const Circuit amp = amplify_noise(ansatz, 3);
    CHECK(amp.n_slots() == ansatz.n_slots());
    CHECK(unitary_fidelity(oracle::circuit_unitary(ansatz, slots),
                           oracle::circuit_unitary(amp, slots)) >= 1.0 - 1e-9);
}

TEST_CASE("interaction graph counts two-qubit gates per pair") {
    Circuit c(4);
    c.append(Gate::hadamard(0));
    c.append(Gate::controlled_not(0, 1));
    c.append(Gate::controlled_not(1, 0));
    c.append(Gate::controlled_phase(1, 2, 0.4));

    const CouplingGraph g = coupling_graph(c);
    CHECK(g.nodes == std::set<std::size_t>{0, 1, 2});
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(2, 1));
    CHECK(g.edges.at({0, 1}) == 2);  // direction does not matter
    CHECK(g.edges.at({1, 2}) == 1);
    CHECK(g.total_weight() == 3);
    CHECK(g.node_strength(1) == 3);
    CHECK(g.degree(1) == 2);

    const CouplingGraph with_idle = coupling_graph(c, /*include_idle=*/true);
    CHECK(with_idle.nodes == std::set<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("coupling graph rejects self-loops and zero weights") {
    CouplingGraph g;
    g.add_node(0);
    g.add_node(1);
    CHECK_THROWS_AS(g.add_edge(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 1, 0), std::invalid_argument);
    g.add_edge(0, 1, 2);
    g.add_edge(1, 0, 3);  // accumulates onto the same undirected key
    CHECK(g.edges.at({0, 1}) == 5);
}

TEST_CASE("text form round-trips gates, slots, and angles") {
    std::mt19937_64 rng(35);
    const Circuit c = random_circuit(rng, 4, 30, true);
    const std::string text = serialize_circuit(c);
    const Circuit back = parse_circuit(text);

    CHECK(back.n_qubits() == c.n_qubits());
    CHECK(back.slot_names() == c.slot_names());
    REQUIRE(back.gates().size() == c.gates().size());
    for (std::size_t i = 0; i < c.gates().size(); ++i) {
        const Gate &a = c.gates()[i], &b = back.gates()[i];
        CHECK(a.kind == b.kind);
        CHECK(a.q0 == b.q0);
        CHECK(a.q1 == b.q1);
        CHECK(a.slot == b.slot);
        CHECK(std::abs(a.angle - b.angle) < 1e-9);  // ten printed decimals
    }

    // Serialization of a reparse is byte-stable.
    CHECK(serialize_circuit(parse_circuit(text)) == text);
}

TEST_CASE("the decoupling flag is an in-memory annotation, not part of the format") {
    Circuit c(2);
    c.append(Gate::pauli_x(0));
    Gate pulse = Gate::pauli_x(1);
    pulse.dd_pulse = true;
    c.append(pulse);

    const Circuit back = parse_circuit(serialize_circuit(c));
    REQUIRE(back.gates().size() == 2);
    CHECK(!back.gates()[1].dd_pulse);
}

TEST_CASE("parse errors carry line numbers") {
    const auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_circuit(text);
        } catch (const CircuitFormatError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("") >= 1);                                    // missing header
    CHECK(line_of("# n_qubits: 2\nFOO 0\n") == 2);              // unknown mnemonic
    CHECK(line_of("# n_qubits: 2\nX 5\n") == 2);                // operand out of range
    CHECK(line_of("# n_qubits: 2\nRZ 0 theta9\n") == 2);        // undeclared slot
    CHECK(line_of("# n_qubits: 2\nCNOT 0\n") == 2);             // missing operand
}
