// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by the test suite. Every
// routine here takes the slow, obviously-correct route: Pauli operators are
// built as dense matrices by Kronecker products over their letter strings,
// exponentials go through an eigendecomposition, subgraph matching tries all
// injective maps, derivatives use central differences, and erf is summed
// from its Maclaurin series. None of it shares code with the library's
// symplectic/statevector fast paths, so agreement is evidence, not tautology.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vqekit/circuit.hpp"
#include "vqekit/pauli.hpp"
#include "vqekit/state.hpp"
#include "vqekit/topology.hpp"

namespace oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// --- dense Pauli algebra ---------------------------------------------------

// 2x2 matrix of a single letter (I, X, Y, or Z).
Matrix letter_matrix(char letter);

// Kronecker product over a letter string; the leftmost letter is the highest
// qubit, matching basis index bit k = qubit k.
Matrix word_matrix(std::string_view letters);

// i^phase_exponent * word_matrix(letters).
Matrix pauli_matrix(const vqekit::PauliString& p);

// Sum of coefficient * word matrices over all stored terms.
Matrix sum_matrix(const vqekit::PauliSum& h);

// --- dense states and circuits ----------------------------------------------

Vector state_vector(const vqekit::QuantumState& s);   // pure states
Matrix density_matrix(const vqekit::QuantumState& s); // pure or mixed

// exp(i * theta * hermitian) via eigendecomposition.
Matrix exp_i_theta(const Matrix& hermitian, double theta);

// Full 2^n x 2^n unitary of one gate / a whole circuit, slot values resolved
// the same way the simulator resolves them.
Matrix gate_matrix(const vqekit::Gate& g, std::size_t n_qubits,
                   const std::vector<double>& slot_values);
Matrix circuit_unitary(const vqekit::Circuit& c, const std::vector<double>& slot_values);

// --- dense spectra -----------------------------------------------------------

double ground_energy(const Matrix& hermitian);
std::vector<double> eigenvalues(const Matrix& hermitian);  // ascending

// --- graphs ------------------------------------------------------------------

// Subgraph monomorphism by exhaustive search over injective node maps.
// Intended for targets of at most ~8 nodes.
bool embeddable_brute_force(const vqekit::CouplingGraph& pattern,
                            const vqekit::CouplingGraph& target);

// --- calculus and special functions ------------------------------------------

// Central-difference gradient of f at x with step h.
std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-5);

// Maclaurin series for erf, 30 terms; accurate to ~1e-12 for |z| <= 2.
double erf_series(double z);

// --- deterministic random test-case generators -------------------------------

std::string random_word(std::mt19937_64& rng, std::size_t n_qubits,
                        bool allow_identity = true);
vqekit::QuantumState random_state(std::mt19937_64& rng, std::size_t n_qubits);
vqekit::PauliSum random_sum(std::mt19937_64& rng, std::size_t n_qubits, std::size_t n_terms);
vqekit::CouplingGraph random_graph(std::mt19937_64& rng, std::size_t n_nodes,
                                   double edge_probability);

}  // namespace oracle
