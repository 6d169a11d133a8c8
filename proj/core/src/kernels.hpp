// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Internal dense gate kernels shared by the statevector and density-matrix
// paths. Not installed.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace vqekit::detail {

using cd = std::complex<double>;
using Mat1q = std::array<cd, 4>;  // row-major [m00, m01, m10, m11]

inline void apply1(cd* psi, std::size_t dim, std::size_t q, const Mat1q& m) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & bit) continue;
        const cd a0 = psi[base];
        const cd a1 = psi[base | bit];
        psi[base] = m[0] * a0 + m[1] * a1;
        psi[base | bit] = m[2] * a0 + m[3] * a1;
    }
}

inline void apply_cnot(cd* psi, std::size_t dim, std::size_t ctrl, std::size_t targ) {
    const std::size_t cbit = std::size_t{1} << ctrl;
    const std::size_t tbit = std::size_t{1} << targ;
    for (std::size_t i = 0; i < dim; ++i)
        if ((i & cbit) && !(i & tbit)) std::swap(psi[i], psi[i | tbit]);
}

inline void apply_cp(cd* psi, std::size_t dim, std::size_t a, std::size_t b, cd phase) {
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0; i < dim; ++i)
        if ((i & mask) == mask) psi[i] *= phase;
}

// Left-multiplication U * rho, column by column.
template <typename Apply>
void apply_left(Eigen::MatrixXcd& rho, Apply&& apply_to_vector) {
    const auto dim = static_cast<std::size_t>(rho.rows());
    for (Eigen::Index j = 0; j < rho.cols(); ++j) apply_to_vector(rho.col(j).data(), dim);
}

// rho -> U rho U^dagger using two left-applications: U (U rho)^dagger.
template <typename Apply>
void conjugate_density(Eigen::MatrixXcd& rho, Apply&& apply_to_vector) {
    apply_left(rho, apply_to_vector);
    rho = rho.adjoint().eval();
    apply_left(rho, apply_to_vector);
}

// Depolarizing channel in replace form on one or two qubits:
//   rho -> (1 - p) rho + p (I / 2^k) (x) Tr_qubits(rho).
// Caller guarantees distinct in-range qubits and p in [0, 1].
inline void depolarize_replace(Eigen::MatrixXcd& rho, std::span<const std::size_t> qubits,
                               double p) {
    if (p == 0.0) return;
    const auto dim = static_cast<std::size_t>(rho.rows());
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) ++n;

    std::uint64_t qmask = 0;
    for (const std::size_t q : qubits) qmask |= std::uint64_t{1} << q;
    const std::size_t k = qubits.size();
    const std::size_t sub = std::size_t{1} << k;
    const std::size_t rest_dim = dim >> k;

    // expand(r, m): scatter rest bits r around the channel qubits, then set
    // the channel qubits to the bits of m.
    const auto expand = [&](std::uint64_t r, std::uint64_t m) {
        std::uint64_t full = 0;
        std::size_t ri = 0;
        for (std::size_t q = 0; q < n; ++q) {
            if (qmask & (std::uint64_t{1} << q)) continue;
            full |= ((r >> ri) & 1) << q;
            ++ri;
        }
        std::size_t mi = 0;
        for (const std::size_t q : qubits) {
            full |= ((m >> mi) & 1) << q;
            ++mi;
        }
        return full;
    };

    Eigen::MatrixXcd traced = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rest_dim),
                                                     static_cast<Eigen::Index>(rest_dim));
    for (std::uint64_t r1 = 0; r1 < rest_dim; ++r1)
        for (std::uint64_t r2 = 0; r2 < rest_dim; ++r2)
            for (std::uint64_t m = 0; m < sub; ++m)
                traced(r1, r2) += rho(expand(r1, m), expand(r2, m));

    rho *= (1.0 - p);
    const double fill = p / static_cast<double>(sub);
    for (std::uint64_t r1 = 0; r1 < rest_dim; ++r1)
        for (std::uint64_t r2 = 0; r2 < rest_dim; ++r2)
            for (std::uint64_t m = 0; m < sub; ++m)
                rho(expand(r1, m), expand(r2, m)) += fill * traced(r1, r2);
}

inline constexpr double inv_sqrt2 = 0.70710678118654752440;

inline Mat1q mat_h() { return {cd{inv_sqrt2, 0}, cd{inv_sqrt2, 0}, cd{inv_sqrt2, 0}, cd{-inv_sqrt2, 0}}; }
inline Mat1q mat_x() { return {cd{0, 0}, cd{1, 0}, cd{1, 0}, cd{0, 0}}; }
inline Mat1q mat_sx() {
    return {cd{0.5, 0.5}, cd{0.5, -0.5}, cd{0.5, -0.5}, cd{0.5, 0.5}};
}
inline Mat1q mat_rz(double angle) {
    return {std::polar(1.0, -angle / 2), cd{0, 0}, cd{0, 0}, std::polar(1.0, angle / 2)};
}
inline Mat1q mat_sdg() { return {cd{1, 0}, cd{0, 0}, cd{0, 0}, cd{0, -1}}; }

}  // namespace vqekit::detail
