// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Circuit execution: noise-free statevector runs and density-matrix runs
// under a depolarizing gate-noise model with per-qubit readout flips.
// Noiseless work (ADAPT, VQE inner loops) uses the pure path; mitigation
// studies use the density path so noise channels are exact rather than
// sampled trajectories.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vqekit/circuit.hpp"
#include "vqekit/state.hpp"

namespace vqekit {

// Per-qubit readout flip probabilities: flip0 = P(read 1 | prepared 0),
// flip1 = P(read 0 | prepared 1).
struct ReadoutFlips {
    double flip0 = 0.02;
    double flip1 = 0.03;
};

// Depolarizing strength after every non-pulse gate (p_1q single-qubit,
// p_2q two-qubit) plus readout flips. Tile heterogeneity: gate noise on
// tile t is scaled by tile_scales[t] when provided, otherwise by a factor
// drawn from the run seed uniformly in [1 - spread, 1 + spread]. Readout
// flips are not scaled, so a single confusion model describes every tile.
struct NoiseModel {
    double p_1q = 0.001;
    double p_2q = 0.01;
    ReadoutFlips default_readout;
    std::map<std::size_t, ReadoutFlips> readout_overrides;
    std::vector<double> tile_scales;
    double tile_scale_spread = 0.5;

    static NoiseModel zero();

    ReadoutFlips readout_for(std::size_t qubit) const;
    bool gate_noise_free() const noexcept { return p_1q == 0.0 && p_2q == 0.0; }
    bool readout_noise_free() const;

    // Throws std::invalid_argument unless all probabilities are in [0, 1],
    // scales are positive and the spread is in [0, 1).
    void validate() const;
};

// JSON round trip. Field layout:
//   {"p_1q": 0.001, "p_2q": 0.01,
//    "readout": {"flip0": 0.02, "flip1": 0.03},
//    "readout_per_qubit": {"3": {"flip0": ..., "flip1": ...}},   (optional)
//    "tile_scales": [1.0, 0.8],                                  (optional)
//    "tile_scale_spread": 0.5}                                   (optional)
NoiseModel parse_noise_model(std::string_view json_text);
NoiseModel load_noise_model_file(const std::string& path);
std::string serialize_noise_model(const NoiseModel& model);

// Gate-noise multiplier for one tile: explicit per-tile factor when
// configured, else drawn from the named stream (seed, "tile-scale", index).
double tile_noise_scale(const NoiseModel& model, std::uint64_t seed, std::size_t tile_index);

// Noise-free statevector execution from |0...0> (or `initial`, pure mode).
// slot_values binds the RZ parameter slots in order; its length must equal
// circuit.n_slots().
QuantumState run_pure(const Circuit& circuit, std::span<const double> slot_values);
QuantumState run_pure(const Circuit& circuit, std::span<const double> slot_values,
                      QuantumState initial);

// Density-matrix execution from |0...0><0...0| with a depolarizing channel
// of strength min(1, gate_noise_scale * p) after every gate except
// decoupling pulses.
QuantumState run_density(const Circuit& circuit, std::span<const double> slot_values,
                         const NoiseModel& noise, double gate_noise_scale = 1.0);

// Applies the per-qubit readout confusion to a Born distribution:
// noisy = (A_(n-1) (x) ... (x) A_0) . probs, factor-wise.
std::vector<double> apply_readout_noise(std::vector<double> probs, const NoiseModel& noise,
                                        std::size_t n_qubits);

}  // namespace vqekit
