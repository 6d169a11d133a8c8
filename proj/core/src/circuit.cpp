// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#include "vqekit/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>

namespace vqekit {

namespace {

constexpr double k_pi = std::numbers::pi_v<double>;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_full_double(std::string_view token, double& value) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (!token.empty() && token.front() == '+') ++begin;  // from_chars rejects leading '+'
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc{} && ptr == end;
}

bool parse_full_size(std::string_view token, std::size_t& value) {
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

std::string format_angle(double angle) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), angle,
                                         std::chars_format::fixed, 10);
    if (ec != std::errc{}) throw std::runtime_error("format_angle: conversion failed");
    return std::string(buf, ptr);
}

}  // namespace

std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::h: return "H";
        case GateKind::x: return "X";
        case GateKind::sx: return "SX";
        case GateKind::rz: return "RZ";
        case GateKind::cnot: return "CNOT";
        case GateKind::cp: return "CP";
    }
    throw std::logic_error("gate_name: unknown kind");
}

Gate Gate::hadamard(std::size_t q) { return {GateKind::h, q}; }
Gate Gate::pauli_x(std::size_t q) { return {GateKind::x, q}; }
Gate Gate::sqrt_x(std::size_t q) { return {GateKind::sx, q}; }

Gate Gate::rotation_z(std::size_t q, double angle) {
    Gate g{GateKind::rz, q};
    g.angle = angle;
    return g;
}

Gate Gate::rotation_z_slot(std::size_t q, std::size_t slot) {
    Gate g{GateKind::rz, q};
    g.slot = slot;
    return g;
}

Gate Gate::controlled_not(std::size_t control, std::size_t target) {
    Gate g{GateKind::cnot, control};
    g.q1 = target;
    return g;
}

Gate Gate::controlled_phase(std::size_t a, std::size_t b, double angle) {
    Gate g{GateKind::cp, a};
    g.q1 = b;
    g.angle = angle;
    return g;
}

CircuitFormatError::CircuitFormatError(std::size_t line, const std::string& message)
    : std::runtime_error("circuit text, line " + std::to_string(line) + ": " + message),
      line_(line) {}

Circuit::Circuit(std::size_t n_qubits) : n_(n_qubits) {
    if (n_qubits == 0) throw std::invalid_argument("Circuit: qubit count must be positive");
}

std::size_t Circuit::add_slot(std::string name) {
    if (name.empty()) throw std::invalid_argument("Circuit: slot name must be non-empty");
    if (name.find_first_of(" \t\r\n#") != std::string::npos)
        throw std::invalid_argument("Circuit: slot name must not contain whitespace or '#'");
    double ignored;
    if (parse_full_double(name, ignored))
        throw std::invalid_argument("Circuit: slot name must not parse as a number");
    for (const auto& existing : slots_)
        if (existing == name) throw std::invalid_argument("Circuit: duplicate slot name " + name);
    slots_.push_back(std::move(name));
    return slots_.size() - 1;
}

void Circuit::append(Gate gate) {
    if (gate.q0 >= n_) throw std::invalid_argument("Circuit: operand out of range");
    if (gate.is_two_qubit()) {
        if (gate.q1 >= n_) throw std::invalid_argument("Circuit: operand out of range");
        if (gate.q0 == gate.q1)
            throw std::invalid_argument("Circuit: two-qubit gate needs distinct operands");
    } else if (gate.q1 != Gate::no_operand) {
        throw std::invalid_argument("Circuit: single-qubit gate carries a second operand");
    }
    if (gate.slot != Gate::no_slot) {
        if (gate.kind != GateKind::rz)
            throw std::invalid_argument("Circuit: only RZ gates may reference a slot");
        if (gate.slot >= slots_.size())
            throw std::invalid_argument("Circuit: slot index out of range");
    }
    if (gate.dd_pulse && gate.kind != GateKind::x)
        throw std::invalid_argument("Circuit: only X gates may be decoupling pulses");
    gates_.push_back(gate);
}

std::size_t Circuit::cnot_count() const noexcept {
    std::size_t count = 0;
    for (const Gate& g : gates_) count += g.kind == GateKind::cnot ? 1 : 0;
    return count;
}

std::size_t Circuit::two_qubit_count() const noexcept {
    std::size_t count = 0;
    for (const Gate& g : gates_) count += g.is_two_qubit() ? 1 : 0;
    return count;
}

std::size_t Circuit::single_qubit_count() const noexcept {
    return gates_.size() - two_qubit_count();
}

void Circuit::validate() const {
    std::vector<bool> referenced(slots_.size(), false);
    for (const Gate& g : gates_) {
        if (g.q0 >= n_ || (g.is_two_qubit() && (g.q1 >= n_ || g.q0 == g.q1)))
            throw std::logic_error("Circuit: invalid operands");
        if (g.slot != Gate::no_slot) {
            if (g.kind != GateKind::rz || g.slot >= slots_.size())
                throw std::logic_error("Circuit: invalid slot reference");
            referenced[g.slot] = true;
        }
    }
    for (std::size_t s = 0; s < referenced.size(); ++s)
        if (!referenced[s])
            throw std::logic_error("Circuit: slot " + slots_[s] + " is never referenced");
}

void append_exponential(Circuit& circuit, const PauliString& p, std::size_t slot) {
    if (p.n_qubits() != circuit.n_qubits())
        throw std::invalid_argument("append_exponential: qubit count mismatch");
    if (p.is_identity_word())
        throw std::invalid_argument("append_exponential: identity generator");
    if (p.phase_exponent() != 0)
        throw std::invalid_argument("append_exponential: generator must be a plain letter word");

    std::vector<std::size_t> support;
    for (std::size_t q = 0; q < p.n_qubits(); ++q)
        if (p.letter(q) != 'I') support.push_back(q);

    for (const std::size_t q : support) {
        const char l = p.letter(q);
        if (l == 'X') {
            circuit.append(Gate::hadamard(q));
        } else if (l == 'Y') {
            circuit.append(Gate::rotation_z(q, -k_pi / 2));
            circuit.append(Gate::hadamard(q));
        }
    }
    for (std::size_t i = 0; i + 1 < support.size(); ++i)
        circuit.append(Gate::controlled_not(support[i], support[i + 1]));
    circuit.append(Gate::rotation_z_slot(support.back(), slot));
    for (std::size_t i = support.size() - 1; i-- > 0;)
        circuit.append(Gate::controlled_not(support[i], support[i + 1]));
    for (const std::size_t q : support) {
        const char l = p.letter(q);
        if (l == 'X') {
            circuit.append(Gate::hadamard(q));
        } else if (l == 'Y') {
            circuit.append(Gate::hadamard(q));
            circuit.append(Gate::rotation_z(q, k_pi / 2));
        }
    }
}

Circuit compile_exponential(const PauliString& p, std::string slot_name) {
    Circuit circuit(p.n_qubits());
    const std::size_t slot = circuit.add_slot(std::move(slot_name));
    append_exponential(circuit, p, slot);
    circuit.validate();
    return circuit;
}

std::vector<double> exponential_slot_values(std::span<const double> thetas) {
    std::vector<double> values(thetas.size());
    for (std::size_t k = 0; k < thetas.size(); ++k) values[k] = -2.0 * thetas[k];
    return values;
}

Circuit compile_ansatz(std::size_t n_qubits, std::uint64_t reference,
                       std::span<const PauliString> generators) {
    if (n_qubits < 64 && (reference >> n_qubits) != 0)
        throw std::invalid_argument("compile_ansatz: reference bits exceed qubit count");
    Circuit circuit(n_qubits);
    for (std::size_t q = 0; q < n_qubits; ++q)
        if (reference & (std::uint64_t{1} << q)) circuit.append(Gate::pauli_x(q));
    for (std::size_t k = 0; k < generators.size(); ++k) {
        const std::size_t slot = circuit.add_slot("theta" + std::to_string(k));
        append_exponential(circuit, generators[k], slot);
    }
    Circuit out = cancel_inverse_pairs(circuit);
    out.validate();
    return out;
}

void CouplingGraph::add_node(std::size_t u) { nodes.insert(u); }

void CouplingGraph::add_edge(std::size_t u, std::size_t v, std::uint64_t weight) {
    if (u == v) throw std::invalid_argument("CouplingGraph: self-loop");
    if (weight == 0) throw std::invalid_argument("CouplingGraph: zero edge weight");
    nodes.insert(u);
    nodes.insert(v);
    edges[{std::min(u, v), std::max(u, v)}] += weight;
}

bool CouplingGraph::has_edge(std::size_t u, std::size_t v) const {
    return edges.count({std::min(u, v), std::max(u, v)}) != 0;
}

std::uint64_t CouplingGraph::total_weight() const {
    std::uint64_t w = 0;
    for (const auto& [key, weight] : edges) w += weight;
    return w;
}

std::uint64_t CouplingGraph::node_strength(std::size_t u) const {
    std::uint64_t s = 0;
    for (const auto& [key, weight] : edges)
        if (key.first == u || key.second == u) s += weight;
    return s;
}

std::size_t CouplingGraph::degree(std::size_t u) const {
    std::size_t d = 0;
    for (const auto& [key, weight] : edges)
        if (key.first == u || key.second == u) ++d;
    return d;
}

CouplingGraph coupling_graph(const Circuit& circuit, bool include_idle) {
    CouplingGraph g;
    if (include_idle)
        for (std::size_t q = 0; q < circuit.n_qubits(); ++q) g.add_node(q);
    for (const Gate& gate : circuit.gates()) {
        g.add_node(gate.q0);
        if (gate.is_two_qubit()) g.add_edge(gate.q0, gate.q1);
    }
    return g;
}

double GateDurations::of(const Gate& gate) const {
    return gate.is_two_qubit() ? two_qubit : single;
}

Circuit insert_dd(const Circuit& circuit, const GateDurations& durations) {
    if (!(durations.single > 0.0) || !(durations.two_qubit > 0.0))
        throw std::invalid_argument("insert_dd: durations must be positive");

    const std::size_t n = circuit.n_qubits();
    std::vector<double> qubit_time(n, 0.0);
    std::vector<std::vector<std::pair<double, double>>> busy(n);
    std::vector<double> starts(circuit.gates().size(), 0.0);

    for (std::size_t i = 0; i < circuit.gates().size(); ++i) {
        const Gate& g = circuit.gates()[i];
        double start = qubit_time[g.q0];
        if (g.is_two_qubit()) start = std::max(start, qubit_time[g.q1]);
        const double end = start + durations.of(g);
        starts[i] = start;
        qubit_time[g.q0] = end;
        busy[g.q0].emplace_back(start, end);
        if (g.is_two_qubit()) {
            qubit_time[g.q1] = end;
            busy[g.q1].emplace_back(start, end);
        }
    }
    const double circuit_end = *std::max_element(qubit_time.begin(), qubit_time.end());

    struct Timed {
        double start;
        Gate gate;
    };
    std::vector<Timed> timeline;
    timeline.reserve(circuit.gates().size());
    for (std::size_t i = 0; i < circuit.gates().size(); ++i)
        timeline.push_back({starts[i], circuit.gates()[i]});

    const double min_window = 2.0 * durations.single;
    const auto add_pulses = [&](std::size_t q, double window_start, double window_end) {
        const double len = window_end - window_start;
        if (len < min_window - 1e-12) return;
        Gate pulse = Gate::pauli_x(q);
        pulse.dd_pulse = true;
        Timed first{window_start + len / 3.0, pulse};
        Timed second{window_start + 2.0 * len / 3.0, pulse};
        timeline.push_back(first);
        timeline.push_back(second);
    };

    for (std::size_t q = 0; q < n; ++q) {
        if (busy[q].empty()) continue;  // untouched wires stay bare
        for (std::size_t i = 0; i + 1 < busy[q].size(); ++i)
            add_pulses(q, busy[q][i].second, busy[q][i + 1].first);
        add_pulses(q, busy[q].back().second, circuit_end);
    }

    std::stable_sort(timeline.begin(), timeline.end(),
                     [](const Timed& a, const Timed& b) { return a.start < b.start; });

    Circuit out(n);
    for (const auto& name : circuit.slot_names()) out.add_slot(name);
    for (const Timed& t : timeline) out.append(t.gate);
    return out;
}

Circuit amplify_noise(const Circuit& circuit, std::uint64_t lambda) {
    if (lambda == 0) throw std::invalid_argument("amplify_noise: lambda must be >= 1");
    Circuit out(circuit.n_qubits());
    for (const auto& name : circuit.slot_names()) out.add_slot(name);
    const double phi = k_pi / static_cast<double>(lambda);
    for (const Gate& g : circuit.gates()) {
        if (g.kind != GateKind::cnot) {
            out.append(g);
            continue;
        }
        const std::size_t control = g.q0;
        const std::size_t target = g.q1;
        out.append(Gate::hadamard(target));
        for (std::uint64_t r = 0; r < lambda; ++r) {
            out.append(Gate::controlled_not(control, target));
            out.append(Gate::rotation_z(target, -phi / 2));
            out.append(Gate::controlled_not(control, target));
            out.append(Gate::rotation_z(control, phi / 2));
            out.append(Gate::rotation_z(target, phi / 2));
        }
        out.append(Gate::hadamard(target));
    }
    return out;
}

namespace {

bool is_inverse_pair(const Gate& a, const Gate& b) {
    if (a.dd_pulse || b.dd_pulse) return false;
    if (a.slot != Gate::no_slot || b.slot != Gate::no_slot) return false;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case GateKind::h:
        case GateKind::x:
            return a.q0 == b.q0;
        case GateKind::sx:
            return false;  // SX . SX = X, not identity
        case GateKind::rz:
            return a.q0 == b.q0 && std::abs(a.angle + b.angle) < 1e-15;
        case GateKind::cnot:
            return a.q0 == b.q0 && a.q1 == b.q1;
        case GateKind::cp:
            return std::min(a.q0, a.q1) == std::min(b.q0, b.q1) &&
                   std::max(a.q0, a.q1) == std::max(b.q0, b.q1) &&
                   std::abs(a.angle + b.angle) < 1e-15;
    }
    return false;
}

}  // namespace

Circuit cancel_inverse_pairs(const Circuit& circuit) {
    std::vector<Gate> kept;
    kept.reserve(circuit.gates().size());
    for (const Gate& g : circuit.gates()) {
        if (!kept.empty() && is_inverse_pair(kept.back(), g)) {
            kept.pop_back();
        } else {
            kept.push_back(g);
        }
    }
    Circuit out(circuit.n_qubits());
    for (const auto& name : circuit.slot_names()) out.add_slot(name);
    for (const Gate& g : kept) out.append(g);
    return out;
}

std::string serialize_circuit(const Circuit& circuit) {
    std::string out = "# n_qubits: " + std::to_string(circuit.n_qubits()) + "\n";
    if (circuit.n_slots() > 0) {
        out += "# slots:";
        for (const auto& name : circuit.slot_names()) {
            out += ' ';
            out += name;
        }
        out += '\n';
    }
    for (const Gate& g : circuit.gates()) {
        out += gate_name(g.kind);
        out += ' ';
        out += std::to_string(g.q0);
        if (g.is_two_qubit()) {
            out += ' ';
            out += std::to_string(g.q1);
        }
        if (g.kind == GateKind::rz) {
            out += ' ';
            out += g.slot != Gate::no_slot ? circuit.slot_names()[g.slot]
                                           : format_angle(g.angle);
        } else if (g.kind == GateKind::cp) {
            out += ' ';
            out += format_angle(g.angle);
        }
        out += '\n';
    }
    return out;
}

Circuit parse_circuit(std::istream& in) {
    std::optional<Circuit> circuit;
    std::map<std::string, std::size_t, std::less<>> slot_index;
    std::string raw;
    std::size_t line_no = 0;
    bool saw_gate = false;

    const auto fail = [&](const std::string& message) -> void {
        throw CircuitFormatError(line_no, message);
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '#') {
            const std::string body = trim(line.substr(1));
            if (body.rfind("n_qubits:", 0) == 0) {
                if (circuit) fail("duplicate n_qubits header");
                std::size_t n = 0;
                if (!parse_full_size(trim(body.substr(9)), n) || n == 0)
                    fail("invalid n_qubits value");
                circuit.emplace(n);
            } else if (body.rfind("slots:", 0) == 0) {
                if (!circuit) fail("slots header before n_qubits");
                if (saw_gate) fail("slots header after gates");
                if (!slot_index.empty()) fail("duplicate slots header");
                for (const auto& name : split_tokens(body.substr(6))) {
                    try {
                        slot_index[name] = circuit->add_slot(name);
                    } catch (const std::invalid_argument& e) {
                        fail(e.what());
                    }
                }
            }
            continue;  // other # lines are comments
        }

        if (!circuit) fail("gate line before n_qubits header");
        saw_gate = true;
        const std::vector<std::string> tokens = split_tokens(line);
        const std::string& mnemonic = tokens.front();

        const auto parse_qubit = [&](const std::string& token) -> std::size_t {
            std::size_t q = 0;
            if (!parse_full_size(token, q)) fail("invalid qubit operand '" + token + "'");
            return q;
        };

        try {
            if (mnemonic == "H" || mnemonic == "X" || mnemonic == "SX") {
                if (tokens.size() != 2) fail("expected '" + mnemonic + " <qubit>'");
                const std::size_t q = parse_qubit(tokens[1]);
                if (mnemonic == "H") circuit->append(Gate::hadamard(q));
                else if (mnemonic == "X") circuit->append(Gate::pauli_x(q));
                else circuit->append(Gate::sqrt_x(q));
            } else if (mnemonic == "RZ") {
                if (tokens.size() != 3) fail("expected 'RZ <qubit> <angle|slot>'");
                const std::size_t q = parse_qubit(tokens[1]);
                double angle = 0.0;
                if (parse_full_double(tokens[2], angle)) {
                    circuit->append(Gate::rotation_z(q, angle));
                } else {
                    const auto it = slot_index.find(tokens[2]);
                    if (it == slot_index.end()) fail("unknown slot '" + tokens[2] + "'");
                    circuit->append(Gate::rotation_z_slot(q, it->second));
                }
            } else if (mnemonic == "CNOT" || mnemonic == "CP") {
                const std::size_t expected = mnemonic == "CNOT" ? 3 : 4;
                if (tokens.size() != expected)
                    fail("expected '" + mnemonic + " <qubit> <qubit>" +
                         (mnemonic == "CP" ? " <angle>'" : "'"));
                const std::size_t a = parse_qubit(tokens[1]);
                const std::size_t b = parse_qubit(tokens[2]);
                if (mnemonic == "CNOT") {
                    circuit->append(Gate::controlled_not(a, b));
                } else {
                    double angle = 0.0;
                    if (!parse_full_double(tokens[3], angle)) fail("invalid CP angle");
                    circuit->append(Gate::controlled_phase(a, b, angle));
                }
            } else {
                fail("unknown gate '" + mnemonic + "'");
            }
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    const std::size_t eof_line = std::max<std::size_t>(line_no, 1);
    if (!circuit) throw CircuitFormatError(eof_line, "missing n_qubits header");
    try {
        circuit->validate();
    } catch (const std::logic_error& e) {
        throw CircuitFormatError(eof_line, e.what());
    }
    return *std::move(circuit);
}

Circuit parse_circuit(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_circuit(in);
}

}  // namespace vqekit
