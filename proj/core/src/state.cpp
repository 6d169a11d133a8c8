// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#include "vqekit/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "kernels.hpp"
#include "vqekit/rng.hpp"

namespace vqekit {

namespace {

using detail::cd;

void check_sim_n(std::size_t n) {
    if (n == 0 || n > QuantumState::max_sim_qubits)
        throw std::invalid_argument("QuantumState: qubit count must be in [1, 14]");
}

// Phase and target index of P acting on basis state |b>:
//   P |b> = i^{phase + #Y} (-1)^{popcount(b & z)} |b ^ x>.
cd pauli_factor(const PauliString& p, std::uint64_t b) {
    constexpr cd powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int k = (p.phase_exponent() + static_cast<int>(p.y_count())) & 3;
    const int sign = std::popcount(b & p.word().z) & 1 ? -1 : 1;
    return powers[k] * static_cast<double>(sign);
}

void check_match(const QuantumState& s, std::size_t n, const char* what) {
    if (s.n_qubits() != n) throw std::invalid_argument(std::string(what) + ": qubit count mismatch");
}

}  // namespace

QuantumState QuantumState::zero(std::size_t n_qubits) { return basis(n_qubits, 0); }

QuantumState QuantumState::basis(std::size_t n_qubits, std::uint64_t bits) {
    check_sim_n(n_qubits);
    if (n_qubits < 64 && (bits >> n_qubits) != 0)
        throw std::invalid_argument("QuantumState: basis bits exceed qubit count");
    QuantumState s;
    s.n_ = n_qubits;
    s.pure_ = true;
    s.amps_.assign(std::size_t{1} << n_qubits, cd{0, 0});
    s.amps_[bits] = cd{1, 0};
    return s;
}

QuantumState QuantumState::pure(std::size_t n_qubits, std::vector<std::complex<double>> amplitudes) {
    check_sim_n(n_qubits);
    if (amplitudes.size() != (std::size_t{1} << n_qubits))
        throw std::invalid_argument("QuantumState: amplitude vector has wrong length");
    double norm2 = 0.0;
    for (const cd a : amplitudes) norm2 += std::norm(a);
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10)
        throw std::invalid_argument("QuantumState: amplitudes are not normalized");
    QuantumState s;
    s.n_ = n_qubits;
    s.pure_ = true;
    s.amps_ = std::move(amplitudes);
    return s;
}

QuantumState QuantumState::mixed(Eigen::MatrixXcd rho) {
    const auto dim = static_cast<std::size_t>(rho.rows());
    if (rho.cols() != rho.rows() || dim == 0 || (dim & (dim - 1)) != 0)
        throw std::invalid_argument("QuantumState: density matrix must be square with 2^n rows");
    const std::size_t n = static_cast<std::size_t>(std::countr_zero(dim));
    check_sim_n(n);
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("QuantumState: density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
        throw std::invalid_argument("QuantumState: density matrix trace is not 1");
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> psd(rho, Eigen::EigenvaluesOnly);
        if (psd.info() != Eigen::Success || psd.eigenvalues().minCoeff() < -1e-9)
            throw std::invalid_argument("QuantumState: density matrix is not positive semidefinite");
    }
    QuantumState s;
    s.n_ = n;
    s.pure_ = false;
    s.rho_ = std::move(rho);
    return s;
}

std::span<const std::complex<double>> QuantumState::amplitudes() const {
    if (!pure_) throw std::logic_error("QuantumState: amplitudes() on a mixed state");
    return amps_;
}

std::span<std::complex<double>> QuantumState::amplitudes() {
    if (!pure_) throw std::logic_error("QuantumState: amplitudes() on a mixed state");
    return amps_;
}

const Eigen::MatrixXcd& QuantumState::density() const {
    if (pure_) throw std::logic_error("QuantumState: density() on a pure state");
    return rho_;
}

Eigen::MatrixXcd& QuantumState::density() {
    if (pure_) throw std::logic_error("QuantumState: density() on a pure state");
    return rho_;
}

QuantumState QuantumState::to_density() const {
    if (!pure_) return *this;
    const Eigen::Map<const Eigen::VectorXcd> v(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
    return mixed(v * v.adjoint());
}

QuantumState apply_pauli(const QuantumState& state, const PauliString& p) {
    check_match(state, p.n_qubits(), "apply_pauli");
    const std::uint64_t x = p.word().x;
    if (state.is_pure()) {
        QuantumState out = state;
        const auto src = state.amplitudes();
        const auto dst = out.amplitudes();
        for (std::uint64_t b = 0; b < src.size(); ++b) dst[b ^ x] = pauli_factor(p, b) * src[b];
        return out;
    }
    const Eigen::MatrixXcd& rho = state.density();
    Eigen::MatrixXcd out(rho.rows(), rho.cols());
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(rho.rows()); ++b) {
        const cd fb = pauli_factor(p, b);
        for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(rho.cols()); ++c)
            out(b ^ x, c ^ x) = fb * rho(b, c) * std::conj(pauli_factor(p, c));
    }
    return QuantumState::mixed(std::move(out));
}

QuantumState apply_pauli_exponential(const QuantumState& state, const PauliString& p,
                                     double theta) {
    if (!state.is_pure())
        throw std::logic_error("apply_pauli_exponential: pure states only; use a circuit for "
                               "density matrices");
    check_match(state, p.n_qubits(), "apply_pauli_exponential");
    if (!p.is_hermitian())
        throw std::invalid_argument("apply_pauli_exponential: generator must be Hermitian");
    const cd c = {std::cos(theta), 0};
    const cd is = cd{0, 1} * std::sin(theta);
    QuantumState out = state;
    const auto src = state.amplitudes();
    const auto dst = out.amplitudes();
    const std::uint64_t x = p.word().x;
    for (std::uint64_t b = 0; b < src.size(); ++b)
        dst[b ^ x] = c * src[b ^ x] + is * pauli_factor(p, b) * src[b];
    return out;
}

double expectation(const QuantumState& state, const PauliString& p) {
    check_match(state, p.n_qubits(), "expectation");
    if (!p.is_hermitian()) throw std::invalid_argument("expectation: operator must be Hermitian");
    const std::uint64_t x = p.word().x;
    cd acc{0, 0};
    if (state.is_pure()) {
        const auto psi = state.amplitudes();
        for (std::uint64_t b = 0; b < psi.size(); ++b)
            acc += std::conj(psi[b ^ x]) * pauli_factor(p, b) * psi[b];
    } else {
        const Eigen::MatrixXcd& rho = state.density();
        for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(rho.rows()); ++b)
            acc += pauli_factor(p, b) * rho(b, b ^ x);
    }
    if (std::abs(acc.imag()) > 1e-10)
        throw std::runtime_error("expectation: imaginary residue exceeds tolerance");
    return acc.real();
}

double expectation(const QuantumState& state, const PauliSum& h) {
    check_match(state, h.n_qubits(), "expectation");
    double e = 0.0;
    for (const auto& [w, c] : h.terms())
        e += c * expectation(state, PauliString::from_word(w, h.n_qubits()));
    return e;
}

namespace {

Eigen::MatrixXcd dense_from_masks(const PauliSum& h) {
    const std::size_t dim = std::size_t{1} << h.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (const auto& [w, c] : h.terms()) {
        const PauliString p = PauliString::from_word(w, h.n_qubits());
        for (std::uint64_t b = 0; b < dim; ++b) m(b ^ w.x, b) += c * pauli_factor(p, b);
    }
    return m;
}

}  // namespace

ExactGround exact_ground(const PauliSum& h) {
    check_sim_n(h.n_qubits());
    const Eigen::MatrixXcd m = dense_from_masks(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("exact_ground: eigensolver failed to converge");
    ExactGround out;
    out.energy = solver.eigenvalues()(0);
    const Eigen::VectorXcd v = solver.eigenvectors().col(0);
    out.residual = (m * v - out.energy * v).cwiseAbs().maxCoeff();
    if (out.residual >= 1e-8)
        throw std::runtime_error("exact_ground: residual check failed");
    std::vector<cd> amps(v.data(), v.data() + v.size());
    out.state = QuantumState::pure(h.n_qubits(), std::move(amps));
    return out;
}

std::vector<double> exact_spectrum(const PauliSum& h) {
    check_sim_n(h.n_qubits());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_from_masks(h),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("exact_spectrum: eigensolver failed to converge");
    return {solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size()};
}

QuantumState apply_noise_channel(const QuantumState& state, std::span<const std::size_t> qubits,
                                 double p) {
    if (state.is_pure())
        throw std::logic_error("apply_noise_channel: density-matrix states only");
    if (qubits.empty() || qubits.size() > 2)
        throw std::invalid_argument("apply_noise_channel: one or two qubits");
    if (qubits.size() == 2 && qubits[0] == qubits[1])
        throw std::invalid_argument("apply_noise_channel: qubits must be distinct");
    for (const std::size_t q : qubits)
        if (q >= state.n_qubits()) throw std::invalid_argument("apply_noise_channel: qubit out of range");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("apply_noise_channel: p must be in [0, 1]");

    Eigen::MatrixXcd rho = state.density();
    detail::depolarize_replace(rho, qubits, p);
    return QuantumState::mixed(std::move(rho));
}

std::vector<char> clique_basis_letters(const PauliSum& clique) {
    std::vector<char> letters(clique.n_qubits(), 'I');
    for (const auto& [w, c] : clique.terms()) {
        for (std::size_t q = 0; q < clique.n_qubits(); ++q) {
            const char l = word_letter(w, q);
            if (l == 'I') continue;
            if (letters[q] == 'I') {
                letters[q] = l;
            } else if (letters[q] != l) {
                throw std::invalid_argument(
                    "clique is not qubit-wise commuting at qubit " + std::to_string(q));
            }
        }
    }
    return letters;
}

std::vector<double> measurement_probabilities(const QuantumState& state, const PauliSum& clique) {
    check_match(state, clique.n_qubits(), "measurement_probabilities");
    const std::vector<char> letters = clique_basis_letters(clique);
    const auto rotate = [&](cd* data, std::size_t dim) {
        for (std::size_t q = 0; q < letters.size(); ++q) {
            if (letters[q] == 'X') {
                detail::apply1(data, dim, q, detail::mat_h());
            } else if (letters[q] == 'Y') {
                detail::apply1(data, dim, q, detail::mat_sdg());
                detail::apply1(data, dim, q, detail::mat_h());
            }
        }
    };

    std::vector<double> probs(state.dim(), 0.0);
    if (state.is_pure()) {
        std::vector<cd> amps(state.amplitudes().begin(), state.amplitudes().end());
        rotate(amps.data(), amps.size());
        for (std::size_t b = 0; b < amps.size(); ++b) probs[b] = std::norm(amps[b]);
    } else {
        Eigen::MatrixXcd rho = state.density();
        detail::conjugate_density(rho, rotate);
        for (std::size_t b = 0; b < probs.size(); ++b)
            probs[b] = rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real();
    }
    return probs;
}

MeasurementRecord sample_distribution(const std::vector<double>& probs, std::uint64_t shots,
                                      std::mt19937_64& stream, std::size_t clique_index) {
    if (shots == 0) throw std::invalid_argument("sample_distribution: shots must be positive");
    if (probs.empty()) throw std::invalid_argument("sample_distribution: empty distribution");

    std::vector<double> cumulative(probs.size());
    double acc = 0.0;
    for (std::size_t b = 0; b < probs.size(); ++b) {
        acc += std::max(probs[b], 0.0);  // clamp density-matrix rounding dust
        cumulative[b] = acc;
    }
    const double total = acc;

    MeasurementRecord record;
    record.shots = shots;
    record.basis_clique = clique_index;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = uniform01(stream) * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const auto outcome = static_cast<std::uint64_t>(
            std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                     static_cast<std::ptrdiff_t>(probs.size()) - 1));
        ++record.counts[outcome];
    }
    return record;
}

MeasurementRecord sample_clique(const QuantumState& state, const PauliSum& clique,
                                std::uint64_t shots, std::mt19937_64& stream,
                                std::size_t clique_index) {
    return sample_distribution(measurement_probabilities(state, clique), shots, stream,
                               clique_index);
}

MeasurementRecord sample_clique(const QuantumState& state, const PauliSum& clique,
                                std::uint64_t shots, std::uint64_t seed,
                                std::size_t clique_index) {
    std::mt19937_64 stream = make_stream(seed, {"clique", std::to_string(clique_index)});
    return sample_clique(state, clique, shots, stream, clique_index);
}

CliqueDistribution to_distribution(const MeasurementRecord& record, std::size_t n_qubits) {
    if (record.shots == 0)
        throw std::invalid_argument("to_distribution: record has zero shots");
    CliqueDistribution d;
    d.basis_clique = record.basis_clique;
    d.weights.assign(std::size_t{1} << n_qubits, 0.0);
    for (const auto& [outcome, count] : record.counts) {
        if (outcome >= d.weights.size())
            throw std::invalid_argument("to_distribution: outcome exceeds qubit count");
        d.weights[outcome] = static_cast<double>(count) / static_cast<double>(record.shots);
    }
    return d;
}

double estimate_energy(std::span<const CliqueDistribution> distributions,
                       const QwcCliqueCover& cover) {
    double energy = cover.identity_coeff;
    for (std::size_t ci = 0; ci < cover.cliques.size(); ++ci) {
        const CliqueDistribution* dist = nullptr;
        for (const auto& d : distributions) {
            if (d.basis_clique != ci) continue;
            if (dist) throw std::invalid_argument("estimate_energy: duplicate distribution for clique " +
                                                  std::to_string(ci));
            dist = &d;
        }
        if (!dist)
            throw std::invalid_argument("estimate_energy: missing distribution for clique " +
                                        std::to_string(ci));
        if (dist->weights.size() != (std::size_t{1} << cover.n_qubits))
            throw std::invalid_argument("estimate_energy: distribution has wrong outcome count");
        for (const auto& [w, c] : cover.cliques[ci].terms()) {
            const std::uint64_t support = w.x | w.z;
            double mean = 0.0;
            for (std::size_t b = 0; b < dist->weights.size(); ++b) {
                const int sign = std::popcount(b & support) & 1 ? -1 : 1;
                mean += static_cast<double>(sign) * dist->weights[b];
            }
            energy += c * mean;
        }
    }
    return energy;
}

double estimate_energy(std::span<const MeasurementRecord> records, const QwcCliqueCover& cover) {
    std::vector<CliqueDistribution> dists;
    dists.reserve(records.size());
    for (const auto& r : records) dists.push_back(to_distribution(r, cover.n_qubits));
    return estimate_energy(dists, cover);
}

}  // namespace vqekit
