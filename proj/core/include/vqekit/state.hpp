// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense simulation at desk scale (n <= 14 qubits). Pure states carry a
// 2^n statevector, mixed states a 2^n x 2^n density matrix; basis index
// bit k is qubit k. Pauli words act through bit masks, never through
// materialized 2^n x 2^n operators.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "vqekit/pauli.hpp"

namespace vqekit {

class QuantumState {
  public:
    static constexpr std::size_t max_sim_qubits = 14;

    // Zero-qubit placeholder so result structs can default-construct; every
    // usable state comes from the factories below.
    QuantumState() = default;

    static QuantumState zero(std::size_t n_qubits);
    // Computational basis state; bit k of `bits` sets qubit k to |1>.
    static QuantumState basis(std::size_t n_qubits, std::uint64_t bits);
    // Throws unless the amplitude vector has length 2^n and unit norm (1e-10).
    static QuantumState pure(std::size_t n_qubits, std::vector<std::complex<double>> amplitudes);
    // Throws unless rho is 2^n square, Hermitian, unit trace (1e-10), and
    // positive semidefinite (eigenvalues >= -1e-9).
    static QuantumState mixed(Eigen::MatrixXcd rho);

    std::size_t n_qubits() const noexcept { return n_; }
    std::size_t dim() const noexcept { return std::size_t{1} << n_; }
    bool is_pure() const noexcept { return pure_; }

    std::span<const std::complex<double>> amplitudes() const;  // pure only
    std::span<std::complex<double>> amplitudes();              // pure only
    const Eigen::MatrixXcd& density() const;                   // mixed only
    Eigen::MatrixXcd& density();                               // mixed only

    QuantumState to_density() const;

  private:
    std::size_t n_ = 0;
    bool pure_ = true;
    std::vector<std::complex<double>> amps_;
    Eigen::MatrixXcd rho_;
};

// P |psi> (pure) or P rho P^dagger (mixed); phases handled exactly.
QuantumState apply_pauli(const QuantumState& state, const PauliString& p);

// e^{i theta P} |psi> = cos(theta) |psi> + i sin(theta) P |psi>.
// Pure states only; p must be Hermitian.
QuantumState apply_pauli_exponential(const QuantumState& state, const PauliString& p,
                                     double theta);

double expectation(const QuantumState& state, const PauliString& p);  // p Hermitian
double expectation(const QuantumState& state, const PauliSum& h);

struct ExactGround {
    double energy = 0.0;
    QuantumState state;
    double residual = 0.0;  // max-norm of (H - E) |v>, checked < 1e-8
};

// Dense spectral solve of the full Hamiltonian. Deterministic: ties in a
// degenerate ground space resolve to the eigensolver's first column.
ExactGround exact_ground(const PauliSum& h);

// All eigenvalues, ascending. Used by the degeneracy scanner.
std::vector<double> exact_spectrum(const PauliSum& h);

// Depolarizing channel, replace form:
//   rho -> (1 - p) rho + p * (I / 2^k) (x) Tr_qubits(rho),  k = |qubits| in {1, 2}.
// Mixed states only; p in [0, 1].
QuantumState apply_noise_channel(const QuantumState& state, std::span<const std::size_t> qubits,
                                 double p);

// Per-qubit measurement basis of a QWC clique: the unique non-identity
// letter per qubit, 'I' where no term acts. Throws if letters conflict.
std::vector<char> clique_basis_letters(const PauliSum& clique);

// Born distribution over computational outcomes after rotating into the
// clique basis (X: H, Y: S-dagger then H). Works for pure and mixed states.
std::vector<double> measurement_probabilities(const QuantumState& state, const PauliSum& clique);

struct MeasurementRecord {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::size_t basis_clique = 0;
};

// Samples `shots` outcomes from an explicit outcome distribution (clamping
// negative rounding dust to zero). Deterministic for a fixed stream state.
MeasurementRecord sample_distribution(const std::vector<double>& probabilities,
                                      std::uint64_t shots, std::mt19937_64& stream,
                                      std::size_t clique_index = 0);

// Samples `shots` outcomes from the clique's Born distribution using the
// caller's stream. Deterministic for a fixed stream state.
MeasurementRecord sample_clique(const QuantumState& state, const PauliSum& clique,
                                std::uint64_t shots, std::mt19937_64& stream,
                                std::size_t clique_index = 0);

// Convenience overload deriving a named stream from (seed, clique_index).
MeasurementRecord sample_clique(const QuantumState& state, const PauliSum& clique,
                                std::uint64_t shots, std::uint64_t seed,
                                std::size_t clique_index = 0);

// Signed outcome weights for one clique (a measurement record normalized by
// shots, or a mitigated quasi-distribution).
struct CliqueDistribution {
    std::vector<double> weights;  // length 2^n, sums to 1, entries may be negative
    std::size_t basis_clique = 0;
};

CliqueDistribution to_distribution(const MeasurementRecord& record, std::size_t n_qubits);

// Energy estimate from one distribution per clique; requires exactly one
// entry per cover clique. The identity coefficient is added verbatim.
double estimate_energy(std::span<const CliqueDistribution> distributions,
                       const QwcCliqueCover& cover);
double estimate_energy(std::span<const MeasurementRecord> records, const QwcCliqueCover& cover);

}  // namespace vqekit
