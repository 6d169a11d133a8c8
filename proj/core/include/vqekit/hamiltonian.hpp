// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Clique-grouped Hamiltonian files. The text format keeps coefficients as
// decimal text and preserves the clique grouping:
//
//   # bond_length_angstrom: 0.80
//   # n_qubits: 5
//   [identity] -103.58363
//   [clique 0]
//   +0.14413 IIIIZ
//   ...
//
// Parsing converts coefficients to binary floating point exactly once;
// serialization emits the shortest round-trip decimal form, so
// parse(serialize(h)) == h and serialization is a fixpoint.

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vqekit/pauli.hpp"

namespace vqekit {

struct LabeledHamiltonian {
    double bond_length = 0.0;  // angstrom
    std::size_t n_qubits = 0;
    QwcCliqueCover cover;
    std::string label;  // bundled id or source path; informational only
};

class HamiltonianFormatError : public std::runtime_error {
  public:
    HamiltonianFormatError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

// Throws HamiltonianFormatError with a 1-based line number on malformed
// terms, inconsistent string lengths, duplicate or non-consecutive clique
// indices, empty clique sections, and cliques that fail qubit-wise
// commutation.
LabeledHamiltonian parse_hamiltonian(std::istream& in);
LabeledHamiltonian parse_hamiltonian(std::string_view text);
LabeledHamiltonian load_hamiltonian_file(const std::string& path);

std::string serialize_hamiltonian(const LabeledHamiltonian& h);

// Bundled dissociation-sweep instances, ids "h0" .. "h9".
bool is_bundled_hamiltonian(std::string_view id);
LabeledHamiltonian load_bundled_hamiltonian(std::string_view id);

}  // namespace vqekit
