// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vqekit {

// Rational approximation of the error function (absolute error below
// 1.5e-7 everywhere), odd by construction. Self-contained on purpose: the
// score below is cross-checked against an independent series oracle.
double erf_rational(double z);

// (√π/2)·erf(δx)/(δx): an even bump over the gap x that equals 1 exactly at
// x = 0 and decays monotonically with |x|; δ sets the detection width. For
// |δx| < 0.15 the truncated series 1 − (δx)²/3 + (δx)⁴/10 replaces the
// rational erf, whose absolute error would otherwise be amplified by 1/(δx).
// Throws when δ <= 0.
double degeneracy_score(double gap, double delta);

struct LevelSet {
    double bond_length = 0.0;      // Angstrom
    std::vector<double> levels;    // energies, ascending (Hartree)

    void validate() const;
};

struct DegeneracyHit {
    double bond_length = 0.0;
    std::size_t lower_level = 0;   // flags the pair (lower_level, lower_level + 1)
    double e_lower = 0.0;
    double e_upper = 0.0;
    double score = 0.0;
};

// Every adjacent-level pair with score >= threshold, ordered by bond length,
// then gap, then level index. Throws on an empty sweep.
std::vector<DegeneracyHit> scan_degeneracies(const std::vector<LevelSet>& sweep,
                                             double delta, double threshold);

// Parses `bond_length, e0, e1, ...` lines; blank lines and `#` comments are
// skipped and levels are sorted on read. Throws std::runtime_error naming
// the 1-based offending line.
std::vector<LevelSet> parse_level_csv(std::string_view text);
std::vector<LevelSet> load_level_csv(const std::string& path);

// Commented header plus one
// `bond_length,lower,upper,e_lower,e_upper,gap,score` row per hit.
std::string degeneracy_csv(const std::vector<DegeneracyHit>& hits);

}  // namespace vqekit
