// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#include "vqekit/hamiltonian.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <vector>

#include "vqekit/bundled.hpp"

namespace vqekit {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::optional<double> parse_double(std::string_view tok) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
    return v;
}

std::string shortest(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string signed_shortest(double v) {
    std::string s = shortest(v);
    if (!s.empty() && s.front() != '-') s.insert(s.begin(), '+');
    return s;
}

}  // namespace

HamiltonianFormatError::HamiltonianFormatError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

LabeledHamiltonian parse_hamiltonian(std::istream& in) {
    LabeledHamiltonian h;
    std::optional<double> bond;
    std::optional<std::size_t> n_qubits;
    std::optional<double> identity;
    std::vector<PauliSum> cliques;
    std::vector<std::vector<PauliString>> members;
    std::size_t clique_start_line = 0;
    bool clique_empty = false;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '#') {
            std::string_view body = trim(line.substr(1));
            const auto take = [&](std::string_view key) -> std::optional<std::string_view> {
                if (!body.starts_with(key)) return std::nullopt;
                std::string_view rest = trim(body.substr(key.size()));
                if (rest.empty() || rest.front() != ':') return std::nullopt;
                return trim(rest.substr(1));
            };
            if (const auto v = take("bond_length_angstrom")) {
                const auto d = parse_double(*v);
                if (!d) throw HamiltonianFormatError(lineno, "bad bond_length_angstrom value");
                bond = *d;
            } else if (const auto v = take("n_qubits")) {
                const auto d = parse_double(*v);
                if (!d || *d < 1 || *d != static_cast<std::size_t>(*d))
                    throw HamiltonianFormatError(lineno, "bad n_qubits value");
                n_qubits = static_cast<std::size_t>(*d);
            }
            continue;  // other comments ignored
        }

        if (line.starts_with("[identity]")) {
            if (identity) throw HamiltonianFormatError(lineno, "duplicate [identity] line");
            if (!cliques.empty())
                throw HamiltonianFormatError(lineno, "[identity] must precede clique sections");
            const auto v = parse_double(trim(line.substr(10)));
            if (!v) throw HamiltonianFormatError(lineno, "bad identity coefficient");
            identity = *v;
            continue;
        }

        if (line.starts_with("[clique")) {
            if (!line.ends_with("]"))
                throw HamiltonianFormatError(lineno, "malformed clique header");
            const auto idx = parse_double(trim(line.substr(7, line.size() - 8)));
            if (!idx || *idx < 0 || *idx != static_cast<std::size_t>(*idx))
                throw HamiltonianFormatError(lineno, "malformed clique header");
            if (!n_qubits)
                throw HamiltonianFormatError(lineno, "n_qubits header required before cliques");
            if (clique_empty)
                throw HamiltonianFormatError(clique_start_line, "empty clique section");
            const std::size_t k = static_cast<std::size_t>(*idx);
            if (k < cliques.size())
                throw HamiltonianFormatError(lineno,
                                             "duplicate clique index " + std::to_string(k));
            if (k != cliques.size())
                throw HamiltonianFormatError(
                    lineno, "clique indices must be consecutive from 0; got " + std::to_string(k));
            cliques.emplace_back(*n_qubits);
            members.emplace_back();
            clique_start_line = lineno;
            clique_empty = true;
            continue;
        }

        // Term line: <signed coefficient> <pauli word>.
        if (cliques.empty())
            throw HamiltonianFormatError(lineno, "term outside any clique section");
        const std::size_t space = line.find_first_of(" \t");
        if (space == std::string_view::npos)
            throw HamiltonianFormatError(lineno, "malformed term (expected coefficient and word)");
        const auto coeff = parse_double(trim(line.substr(0, space)));
        if (!coeff) throw HamiltonianFormatError(lineno, "malformed coefficient");
        const std::string_view word = trim(line.substr(space));
        if (word.find_first_of(" \t") != std::string_view::npos)
            throw HamiltonianFormatError(lineno, "malformed term (trailing tokens)");
        if (word.size() != *n_qubits)
            throw HamiltonianFormatError(lineno, "inconsistent Pauli string length " +
                                                     std::to_string(word.size()) + ", expected " +
                                                     std::to_string(*n_qubits));
        PauliString p = PauliString::identity(*n_qubits);
        try {
            p = PauliString::parse(word);
        } catch (const std::invalid_argument& e) {
            throw HamiltonianFormatError(lineno, e.what());
        }
        for (const PauliString& m : members.back())
            if (!qubitwise_commutes(m, p))
                throw HamiltonianFormatError(lineno, "term " + p.to_string() +
                                                         " does not qubit-wise commute with " +
                                                         m.to_string() + " in the same clique");
        members.back().push_back(p);
        cliques.back().add(p, *coeff);
        clique_empty = false;
    }

    const std::size_t eof_line = std::max<std::size_t>(lineno, 1);
    if (!n_qubits) throw HamiltonianFormatError(eof_line, "missing n_qubits header");
    if (!bond) throw HamiltonianFormatError(eof_line, "missing bond_length_angstrom header");
    if (clique_empty) throw HamiltonianFormatError(clique_start_line, "empty clique section");

    h.bond_length = *bond;
    h.n_qubits = *n_qubits;
    h.cover.n_qubits = *n_qubits;
    h.cover.identity_coeff = identity.value_or(0.0);
    h.cover.cliques = std::move(cliques);
    return h;
}

LabeledHamiltonian parse_hamiltonian(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_hamiltonian(in);
}

LabeledHamiltonian load_hamiltonian_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open hamiltonian file: " + path);
    LabeledHamiltonian h = parse_hamiltonian(in);
    h.label = path;
    return h;
}

std::string serialize_hamiltonian(const LabeledHamiltonian& h) {
    std::ostringstream out;
    out << "# bond_length_angstrom: " << shortest(h.bond_length) << '\n';
    out << "# n_qubits: " << h.n_qubits << '\n';
    out << "[identity] " << shortest(h.cover.identity_coeff) << '\n';
    for (std::size_t ci = 0; ci < h.cover.cliques.size(); ++ci) {
        out << "[clique " << ci << "]\n";
        for (const auto& [w, c] : h.cover.cliques[ci].terms())
            out << signed_shortest(c) << ' ' << word_string(w, h.n_qubits) << '\n';
    }
    return out.str();
}

bool is_bundled_hamiltonian(std::string_view id) {
    for (auto known : bundled::hamiltonian_ids())
        if (known == id) return true;
    return false;
}

LabeledHamiltonian load_bundled_hamiltonian(std::string_view id) {
    LabeledHamiltonian h = parse_hamiltonian(bundled::hamiltonian_text(id));
    h.label = std::string(id);
    return h;
}

}  // namespace vqekit
