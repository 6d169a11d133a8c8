// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#include "vqekit/simulate.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "kernels.hpp"
#include "vqekit/rng.hpp"

namespace vqekit {

namespace {

using detail::cd;

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string("NoiseModel: ") + what + " must be in [0, 1]");
}

void apply_gate_vector(cd* psi, std::size_t dim, const Gate& g,
                       std::span<const double> slot_values) {
    switch (g.kind) {
        case GateKind::h:
            detail::apply1(psi, dim, g.q0, detail::mat_h());
            return;
        case GateKind::x:
            detail::apply1(psi, dim, g.q0, detail::mat_x());
            return;
        case GateKind::sx:
            detail::apply1(psi, dim, g.q0, detail::mat_sx());
            return;
        case GateKind::rz: {
            const double angle = g.slot != Gate::no_slot ? slot_values[g.slot] : g.angle;
            detail::apply1(psi, dim, g.q0, detail::mat_rz(angle));
            return;
        }
        case GateKind::cnot:
            detail::apply_cnot(psi, dim, g.q0, g.q1);
            return;
        case GateKind::cp:
            detail::apply_cp(psi, dim, g.q0, g.q1, std::polar(1.0, g.angle));
            return;
    }
    throw std::logic_error("apply_gate_vector: unknown gate kind");
}

void check_slot_binding(const Circuit& circuit, std::span<const double> slot_values) {
    if (slot_values.size() != circuit.n_slots())
        throw std::invalid_argument("slot_values length does not match the circuit's slot count");
}

}  // namespace

NoiseModel NoiseModel::zero() {
    NoiseModel m;
    m.p_1q = 0.0;
    m.p_2q = 0.0;
    m.default_readout = {0.0, 0.0};
    return m;
}

ReadoutFlips NoiseModel::readout_for(std::size_t qubit) const {
    const auto it = readout_overrides.find(qubit);
    return it != readout_overrides.end() ? it->second : default_readout;
}

bool NoiseModel::readout_noise_free() const {
    if (default_readout.flip0 != 0.0 || default_readout.flip1 != 0.0) return false;
    for (const auto& [q, f] : readout_overrides)
        if (f.flip0 != 0.0 || f.flip1 != 0.0) return false;
    return true;
}

void NoiseModel::validate() const {
    check_probability(p_1q, "p_1q");
    check_probability(p_2q, "p_2q");
    check_probability(default_readout.flip0, "readout flip0");
    check_probability(default_readout.flip1, "readout flip1");
    for (const auto& [q, f] : readout_overrides) {
        check_probability(f.flip0, "readout flip0");
        check_probability(f.flip1, "readout flip1");
    }
    for (const double s : tile_scales)
        if (!(s > 0.0)) throw std::invalid_argument("NoiseModel: tile scales must be positive");
    if (!(tile_scale_spread >= 0.0 && tile_scale_spread < 1.0))
        throw std::invalid_argument("NoiseModel: tile_scale_spread must be in [0, 1)");
}

namespace {

ReadoutFlips flips_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("flip0") || !j.contains("flip1"))
        throw std::invalid_argument("NoiseModel: readout entries need flip0 and flip1");
    return {j.at("flip0").get<double>(), j.at("flip1").get<double>()};
}

}  // namespace

NoiseModel parse_noise_model(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("NoiseModel: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("NoiseModel: top level must be an object");

    NoiseModel m;
    try {
        if (j.contains("p_1q")) m.p_1q = j.at("p_1q").get<double>();
        if (j.contains("p_2q")) m.p_2q = j.at("p_2q").get<double>();
        if (j.contains("readout")) m.default_readout = flips_from_json(j.at("readout"));
        if (j.contains("readout_per_qubit")) {
            for (const auto& [key, value] : j.at("readout_per_qubit").items()) {
                std::size_t q = 0;
                std::size_t consumed = 0;
                try {
                    q = std::stoul(key, &consumed);
                } catch (const std::exception&) {
                    consumed = 0;
                }
                if (consumed != key.size())
                    throw std::invalid_argument("NoiseModel: readout_per_qubit keys are qubit indices");
                m.readout_overrides[q] = flips_from_json(value);
            }
        }
        if (j.contains("tile_scales"))
            m.tile_scales = j.at("tile_scales").get<std::vector<double>>();
        if (j.contains("tile_scale_spread"))
            m.tile_scale_spread = j.at("tile_scale_spread").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("NoiseModel: ") + e.what());
    }
    m.validate();
    return m;
}

NoiseModel load_noise_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open noise model file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_noise_model(buffer.str());
}

std::string serialize_noise_model(const NoiseModel& model) {
    nlohmann::json j;
    j["p_1q"] = model.p_1q;
    j["p_2q"] = model.p_2q;
    j["readout"] = {{"flip0", model.default_readout.flip0},
                    {"flip1", model.default_readout.flip1}};
    if (!model.readout_overrides.empty()) {
        nlohmann::json per;
        for (const auto& [q, f] : model.readout_overrides)
            per[std::to_string(q)] = {{"flip0", f.flip0}, {"flip1", f.flip1}};
        j["readout_per_qubit"] = per;
    }
    if (!model.tile_scales.empty()) j["tile_scales"] = model.tile_scales;
    j["tile_scale_spread"] = model.tile_scale_spread;
    return j.dump(2) + "\n";
}

double tile_noise_scale(const NoiseModel& model, std::uint64_t seed, std::size_t tile_index) {
    if (tile_index < model.tile_scales.size()) return model.tile_scales[tile_index];
    if (model.tile_scale_spread == 0.0) return 1.0;
    std::mt19937_64 stream = make_stream(seed, {"tile-scale", std::to_string(tile_index)});
    return 1.0 + model.tile_scale_spread * (2.0 * uniform01(stream) - 1.0);
}

QuantumState run_pure(const Circuit& circuit, std::span<const double> slot_values) {
    return run_pure(circuit, slot_values, QuantumState::zero(circuit.n_qubits()));
}

QuantumState run_pure(const Circuit& circuit, std::span<const double> slot_values,
                      QuantumState initial) {
    check_slot_binding(circuit, slot_values);
    if (!initial.is_pure()) throw std::logic_error("run_pure: initial state must be pure");
    if (initial.n_qubits() != circuit.n_qubits())
        throw std::invalid_argument("run_pure: qubit count mismatch");
    QuantumState state = std::move(initial);
    const auto amps = state.amplitudes();
    for (const Gate& g : circuit.gates())
        apply_gate_vector(amps.data(), amps.size(), g, slot_values);
    return state;
}

QuantumState run_density(const Circuit& circuit, std::span<const double> slot_values,
                         const NoiseModel& noise, double gate_noise_scale) {
    check_slot_binding(circuit, slot_values);
    noise.validate();
    if (!(gate_noise_scale >= 0.0))
        throw std::invalid_argument("run_density: gate_noise_scale must be nonnegative");

    const std::size_t dim = std::size_t{1} << circuit.n_qubits();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim));
    rho(0, 0) = cd{1, 0};

    for (const Gate& g : circuit.gates()) {
        detail::conjugate_density(rho, [&](cd* column, std::size_t d) {
            apply_gate_vector(column, d, g, slot_values);
        });
        if (g.dd_pulse) continue;  // decoupling pulses are treated as ideal
        const double base = g.is_two_qubit() ? noise.p_2q : noise.p_1q;
        const double p = std::min(1.0, base * gate_noise_scale);
        if (p == 0.0) continue;
        if (g.is_two_qubit()) {
            const std::size_t qubits[2] = {g.q0, g.q1};
            detail::depolarize_replace(rho, qubits, p);
        } else {
            const std::size_t qubits[1] = {g.q0};
            detail::depolarize_replace(rho, qubits, p);
        }
    }
    return QuantumState::mixed(std::move(rho));
}

std::vector<double> apply_readout_noise(std::vector<double> probs, const NoiseModel& noise,
                                        std::size_t n_qubits) {
    if (probs.size() != (std::size_t{1} << n_qubits))
        throw std::invalid_argument("apply_readout_noise: distribution has wrong length");
    noise.validate();
    for (std::size_t q = 0; q < n_qubits; ++q) {
        const ReadoutFlips f = noise.readout_for(q);
        if (f.flip0 == 0.0 && f.flip1 == 0.0) continue;
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t base = 0; base < probs.size(); ++base) {
            if (base & bit) continue;
            const double p0 = probs[base];
            const double p1 = probs[base | bit];
            probs[base] = (1.0 - f.flip0) * p0 + f.flip1 * p1;
            probs[base | bit] = f.flip0 * p0 + (1.0 - f.flip1) * p1;
        }
    }
    return probs;
}

}  // namespace vqekit
