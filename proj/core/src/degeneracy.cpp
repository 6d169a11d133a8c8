// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#include "vqekit/degeneracy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace vqekit {

namespace {

constexpr double sqrt_pi_over_2 = 0.8862269254527580136;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_field(std::string_view field, std::size_t line_no) {
    field = trim(field);
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && field.front() == '+') ++first;  // from_chars rejects '+'
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
        throw std::runtime_error("level csv line " + std::to_string(line_no) +
                                 ": bad number '" + std::string(field) + "'");
    return value;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

double erf_rational(double z) {
    // Rational minimax form with Horner evaluation; odd extension for z < 0.
    if (z == 0.0) return 0.0;  // the raw form leaves a ~1e-9 residue at 0
    constexpr double p = 0.3275911;
    constexpr double a1 = 0.254829592;
    constexpr double a2 = -0.284496736;
    constexpr double a3 = 1.421413741;
    constexpr double a4 = -1.453152027;
    constexpr double a5 = 1.061405429;
    const double az = std::abs(z);
    const double t = 1.0 / (1.0 + p * az);
    const double poly = ((((a5 * t + a4) * t + a3) * t + a2) * t + a1) * t;
    const double value = 1.0 - poly * std::exp(-az * az);
    return z < 0.0 ? -value : value;
}

double degeneracy_score(double gap, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("degeneracy_score: delta must be > 0");
    if (!std::isfinite(gap))
        throw std::invalid_argument("degeneracy_score: gap must be finite");
    const double z = delta * gap;
    // Below the cutoff the rational form's absolute erf error would be
    // amplified by 1/z, so the Maclaurin series of the whole ratio takes
    // over: truncation error z^6/42 stays under 3e-7 at the boundary, the
    // value is manifestly in (0, 1], and the decay stays monotone.
    if (std::abs(z) < 0.15) {
        const double z2 = z * z;
        return 1.0 - z2 / 3.0 + z2 * z2 / 10.0;
    }
    return sqrt_pi_over_2 * erf_rational(z) / z;
}

void LevelSet::validate() const {
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        if (levels[i] > levels[i + 1])
            throw std::invalid_argument("LevelSet: levels must be sorted ascending");
    for (const double e : levels)
        if (!std::isfinite(e))
            throw std::invalid_argument("LevelSet: levels must be finite");
}

std::vector<DegeneracyHit> scan_degeneracies(const std::vector<LevelSet>& sweep,
                                             double delta, double threshold) {
    if (sweep.empty()) throw std::invalid_argument("scan_degeneracies: empty sweep");
    if (!(delta > 0.0))
        throw std::invalid_argument("scan_degeneracies: delta must be > 0");

    std::vector<DegeneracyHit> hits;
    for (const LevelSet& set : sweep) {
        set.validate();
        for (std::size_t i = 0; i + 1 < set.levels.size(); ++i) {
            const double gap = set.levels[i + 1] - set.levels[i];
            const double score = degeneracy_score(gap, delta);
            if (score >= threshold)
                hits.push_back(DegeneracyHit{set.bond_length, i, set.levels[i],
                                             set.levels[i + 1], score});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const DegeneracyHit& a, const DegeneracyHit& b) {
        return std::tuple(a.bond_length, a.e_upper - a.e_lower, a.lower_level) <
               std::tuple(b.bond_length, b.e_upper - b.e_lower, b.lower_level);
    });
    return hits;
}

std::vector<LevelSet> parse_level_csv(std::string_view text) {
    std::vector<LevelSet> sweep;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;

        LevelSet set;
        std::size_t field_index = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            const std::size_t comma = std::min(line.find(',', start), line.size());
            const double value = parse_field(line.substr(start, comma - start), line_no);
            if (field_index == 0) set.bond_length = value;
            else set.levels.push_back(value);
            ++field_index;
            start = comma + 1;
        }
        if (set.levels.empty())
            throw std::runtime_error("level csv line " + std::to_string(line_no) +
                                     ": need a bond length and at least one level");
        std::sort(set.levels.begin(), set.levels.end());
        sweep.push_back(std::move(set));
    }
    return sweep;
}

std::vector<LevelSet> load_level_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open level csv: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_level_csv(buffer.str());
}

std::string degeneracy_csv(const std::vector<DegeneracyHit>& hits) {
    std::string out = "# bond_length,lower,upper,e_lower,e_upper,gap,score\n";
    for (const DegeneracyHit& hit : hits) {
        out += format_double(hit.bond_length);
        out += ',';
        out += std::to_string(hit.lower_level);
        out += ',';
        out += std::to_string(hit.lower_level + 1);
        out += ',';
        out += format_double(hit.e_lower);
        out += ',';
        out += format_double(hit.e_upper);
        out += ',';
        out += format_double(hit.e_upper - hit.e_lower);
        out += ',';
        out += format_double(hit.score);
        out += '\n';
    }
    return out;
}

}  // namespace vqekit
