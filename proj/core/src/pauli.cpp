// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#include "vqekit/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vqekit {

namespace {

constexpr std::size_t max_qubits = 64;

void check_n(std::size_t n) {
    if (n == 0 || n > max_qubits)
        throw std::invalid_argument("PauliString: qubit count must be in [1, 64]");
}

// 0 = I, 1 = X, 2 = Y, 3 = Z; matches the string ordering I < X < Y < Z.
int letter_rank(const Word& w, std::size_t k) noexcept {
    const int x = static_cast<int>((w.x >> k) & 1);
    const int z = static_cast<int>((w.z >> k) & 1);
    return x ? (z ? 2 : 1) : (z ? 3 : 0);
}

// Exponent of i when the word is written in X^x Z^z product form.
int raw_exponent(const PauliString& p) noexcept {
    return (p.phase_exponent() + static_cast<int>(std::popcount(p.word().x & p.word().z))) & 3;
}

}  // namespace

char word_letter(const Word& w, std::size_t qubit) {
    constexpr char letters[4] = {'I', 'X', 'Y', 'Z'};
    return letters[letter_rank(w, qubit)];
}

std::string word_string(const Word& w, std::size_t n_qubits) {
    std::string s(n_qubits, 'I');
    for (std::size_t k = 0; k < n_qubits; ++k) s[n_qubits - 1 - k] = word_letter(w, k);
    return s;
}

bool WordLess::operator()(const Word& a, const Word& b) const noexcept {
    for (std::size_t k = n_qubits; k-- > 0;) {
        const int ra = letter_rank(a, k), rb = letter_rank(b, k);
        if (ra != rb) return ra < rb;
    }
    return false;
}

PauliString PauliString::identity(std::size_t n_qubits) {
    check_n(n_qubits);
    return PauliString(n_qubits, Word{}, 0);
}

PauliString PauliString::parse(std::string_view letters) {
    check_n(letters.size());
    Word w;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        const std::size_t k = letters.size() - 1 - i;
        switch (letters[i]) {
            case 'I': break;
            case 'X': w.x |= 1ULL << k; break;
            case 'Y': w.x |= 1ULL << k; w.z |= 1ULL << k; break;
            case 'Z': w.z |= 1ULL << k; break;
            default:
                throw std::invalid_argument("PauliString: invalid letter '" +
                                            std::string(1, letters[i]) + "'");
        }
    }
    return PauliString(letters.size(), w, 0);
}

PauliString PauliString::from_word(const Word& w, std::size_t n_qubits, int phase_exponent) {
    check_n(n_qubits);
    if (n_qubits < max_qubits && ((w.x | w.z) >> n_qubits) != 0)
        throw std::invalid_argument("PauliString: word exceeds qubit count");
    return PauliString(n_qubits, w, ((phase_exponent % 4) + 4) % 4);
}

std::complex<double> PauliString::phase() const noexcept {
    constexpr std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_];
}

std::size_t PauliString::support_size() const noexcept {
    return static_cast<std::size_t>(std::popcount(support_mask()));
}

std::size_t PauliString::y_count() const noexcept {
    return static_cast<std::size_t>(std::popcount(w_.x & w_.z));
}

PauliString multiply(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("PauliString: size mismatch in product");
    // In X^x Z^z form, commuting Z^za past X^xb contributes (-1)^|za & xb|.
    int raw = raw_exponent(a) + raw_exponent(b) +
              2 * static_cast<int>(std::popcount(a.word().z & b.word().x));
    const Word w{a.word().x ^ b.word().x, a.word().z ^ b.word().z};
    const int phase = (raw - static_cast<int>(std::popcount(w.x & w.z))) & 3;
    return PauliString::from_word(w, a.n_qubits(), phase);
}

bool commutes(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("PauliString: size mismatch in commutation check");
    const int anti = std::popcount(a.word().x & b.word().z) +
                     std::popcount(a.word().z & b.word().x);
    return (anti & 1) == 0;
}

bool qubitwise_commutes(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("PauliString: size mismatch in commutation check");
    const Word& wa = a.word();
    const Word& wb = b.word();
    const std::uint64_t both = (wa.x | wa.z) & (wb.x | wb.z);
    const std::uint64_t differ = (wa.x ^ wb.x) | (wa.z ^ wb.z);
    return (both & differ) == 0;
}

PauliSum::PauliSum(std::size_t n_qubits) : n_(n_qubits), terms_(WordLess{n_qubits}) {
    check_n(n_qubits);
}

void PauliSum::add(const PauliString& p, double coeff) {
    if (p.n_qubits() != n_) throw std::invalid_argument("PauliSum: qubit count mismatch");
    if (!p.is_hermitian())
        throw std::invalid_argument("PauliSum: non-Hermitian term (phase +/-i)");
    if (p.phase_exponent() == 2) coeff = -coeff;
    auto [it, inserted] = terms_.try_emplace(p.word(), coeff);
    if (!inserted) it->second += coeff;
    if (std::abs(it->second) <= zero_pruning_epsilon) terms_.erase(it);
}

void PauliSum::add(std::string_view letters, double coeff) {
    add(PauliString::parse(letters), coeff);
}

void PauliSum::add_scaled(const PauliSum& other, double factor) {
    if (other.n_ != n_) throw std::invalid_argument("PauliSum: qubit count mismatch");
    for (const auto& [w, c] : other.terms_) add(PauliString::from_word(w, n_), c * factor);
}

double PauliSum::coeff(const Word& w) const {
    const auto it = terms_.find(w);
    return it == terms_.end() ? 0.0 : it->second;
}

PauliSum commutator(const PauliSum& h, const PauliString& p) {
    if (h.n_qubits() != p.n_qubits())
        throw std::invalid_argument("commutator: qubit count mismatch");
    PauliSum out(h.n_qubits());
    for (const auto& [w, c] : h.terms()) {
        const PauliString a = PauliString::from_word(w, h.n_qubits());
        if (commutes(a, p)) continue;
        // For anticommuting Hermitian words, i[a, p] = 2i * a * p and the
        // product phase is +/-i, so the result is Hermitian with coefficient
        // -2c (phase i) or +2c (phase -i).
        const PauliString prod = multiply(a, p);
        const double sign = prod.phase_exponent() == 1 ? -1.0 : 1.0;
        out.add(PauliString::from_word(prod.word(), h.n_qubits()), 2.0 * sign * c);
    }
    return out;
}

PauliSum QwcCliqueCover::reconstruct() const {
    PauliSum h(n_qubits);
    if (identity_coeff != 0.0) h.add(PauliString::identity(n_qubits), identity_coeff);
    for (const auto& clique : cliques) h.add_scaled(clique, 1.0);
    return h;
}

void QwcCliqueCover::validate() const {
    for (std::size_t ci = 0; ci < cliques.size(); ++ci) {
        const auto& clique = cliques[ci];
        if (clique.n_qubits() != n_qubits)
            throw std::runtime_error("QwcCliqueCover: clique " + std::to_string(ci) +
                                     " has wrong qubit count");
        for (auto it = clique.terms().begin(); it != clique.terms().end(); ++it) {
            auto jt = it;
            for (++jt; jt != clique.terms().end(); ++jt) {
                const PauliString a = PauliString::from_word(it->first, n_qubits);
                const PauliString b = PauliString::from_word(jt->first, n_qubits);
                if (!qubitwise_commutes(a, b)) {
                    std::ostringstream msg;
                    msg << "QwcCliqueCover: clique " << ci << " terms " << a.to_string()
                        << " and " << b.to_string() << " do not qubit-wise commute";
                    throw std::runtime_error(msg.str());
                }
            }
        }
    }
}

QwcCliqueCover greedy_qwc_cover(const PauliSum& h) {
    QwcCliqueCover cover;
    cover.n_qubits = h.n_qubits();

    std::vector<std::pair<Word, double>> terms;
    terms.reserve(h.size());
    for (const auto& [w, c] : h.terms()) {
        if (w == Word{}) {
            cover.identity_coeff = c;
            continue;
        }
        terms.emplace_back(w, c);
    }
    const WordLess less{h.n_qubits()};
    std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
        if (std::abs(a.second) != std::abs(b.second)) return std::abs(a.second) > std::abs(b.second);
        return less(a.first, b.first);
    });

    std::vector<std::vector<PauliString>> members;
    for (const auto& [w, c] : terms) {
        const PauliString p = PauliString::from_word(w, h.n_qubits());
        bool placed = false;
        for (std::size_t ci = 0; ci < members.size() && !placed; ++ci) {
            const bool fits = std::all_of(members[ci].begin(), members[ci].end(),
                                          [&](const PauliString& m) { return qubitwise_commutes(m, p); });
            if (fits) {
                members[ci].push_back(p);
                cover.cliques[ci].add(p, c);
                placed = true;
            }
        }
        if (!placed) {
            members.push_back({p});
            cover.cliques.emplace_back(h.n_qubits());
            cover.cliques.back().add(p, c);
        }
    }
    return cover;
}

}  // namespace vqekit
