// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Symplectic Pauli algebra. A Pauli word on n <= 64 qubits is stored as a
// pair of bit masks (x, z) plus a power of i relative to the canonical
// letters, so products and commutation checks cost O(1) word operations
// instead of matrix algebra. Qubit k corresponds to bit k of the masks and
// to bit k of a computational basis index; in the string rendering the
// leftmost letter is qubit n-1.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vqekit {

// Phase-free Pauli word: letter at qubit k is I/X/Y/Z for
// (x_k, z_k) = (0,0)/(1,0)/(1,1)/(0,1).
struct Word {
    std::uint64_t x = 0;
    std::uint64_t z = 0;

    friend bool operator==(const Word&, const Word&) = default;
};

char word_letter(const Word& w, std::size_t qubit);
std::string word_string(const Word& w, std::size_t n_qubits);

// Orders words like their string renderings (I < X < Y < Z, leftmost letter
// most significant). Used for deterministic iteration and tie-breaking.
struct WordLess {
    std::size_t n_qubits;
    bool operator()(const Word& a, const Word& b) const noexcept;
};

// A signed/phased Pauli word: i^phase_exponent * (canonical letters).
// Hermitian iff the phase is +1 or -1.
class PauliString {
  public:
    PauliString() = default;

    static PauliString identity(std::size_t n_qubits);
    // Accepts the letters I, X, Y, Z; the leftmost character is qubit n-1.
    static PauliString parse(std::string_view letters);
    static PauliString from_word(const Word& w, std::size_t n_qubits, int phase_exponent = 0);

    std::size_t n_qubits() const noexcept { return n_; }
    const Word& word() const noexcept { return w_; }
    int phase_exponent() const noexcept { return phase_; }
    std::complex<double> phase() const noexcept;

    char letter(std::size_t qubit) const { return word_letter(w_, qubit); }
    std::string to_string() const { return word_string(w_, n_); }

    std::uint64_t support_mask() const noexcept { return w_.x | w_.z; }
    std::size_t support_size() const noexcept;
    std::size_t y_count() const noexcept;
    bool is_identity_word() const noexcept { return w_.x == 0 && w_.z == 0; }
    bool is_hermitian() const noexcept { return phase_ == 0 || phase_ == 2; }

    friend bool operator==(const PauliString&, const PauliString&) = default;

  private:
    PauliString(std::size_t n, Word w, int phase) : n_(n), w_(w), phase_(phase) {}

    std::size_t n_ = 0;
    Word w_;
    int phase_ = 0;  // exponent of i, 0..3
};

// Exact operator product, phase included.
PauliString multiply(const PauliString& a, const PauliString& b);
inline PauliString operator*(const PauliString& a, const PauliString& b) { return multiply(a, b); }

bool commutes(const PauliString& a, const PauliString& b);

// True iff at every qubit the letters are equal or at least one is identity.
bool qubitwise_commutes(const PauliString& a, const PauliString& b);

// Real linear combination of Hermitian Pauli words. Coefficients with
// magnitude <= zero_pruning_epsilon are dropped on insertion.
class PauliSum {
  public:
    static constexpr double zero_pruning_epsilon = 1e-12;

    explicit PauliSum(std::size_t n_qubits);

    std::size_t n_qubits() const noexcept { return n_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    // p must be Hermitian; a -1 phase is folded into the coefficient.
    void add(const PauliString& p, double coeff);
    void add(std::string_view letters, double coeff);
    void add_scaled(const PauliSum& other, double factor);

    double coeff(const Word& w) const;
    const std::map<Word, double, WordLess>& terms() const noexcept { return terms_; }

    PauliString term_pauli(const Word& w) const { return PauliString::from_word(w, n_); }

    friend bool operator==(const PauliSum&, const PauliSum&) = default;

  private:
    std::size_t n_ = 0;
    std::map<Word, double, WordLess> terms_;
};

// Returns i[h, p] (Hermitian, real coefficients); empty if [h, p] = 0.
PauliSum commutator(const PauliSum& h, const PauliString& p);

// Qubit-wise commuting clique cover of a Hamiltonian. The identity component
// is kept apart since it needs no measurement.
struct QwcCliqueCover {
    std::size_t n_qubits = 0;
    double identity_coeff = 0.0;
    std::vector<PauliSum> cliques;

    // Full Hamiltonian, identity included as the all-I word.
    PauliSum reconstruct() const;

    // Throws std::runtime_error naming the offending clique and pair.
    void validate() const;
};

// Greedy cover: terms inserted largest |coefficient| first (ties in word
// order) into the first clique that stays qubit-wise commuting.
QwcCliqueCover greedy_qwc_cover(const PauliSum& h);

}  // namespace vqekit
