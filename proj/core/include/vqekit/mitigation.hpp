// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vqekit/circuit.hpp"
#include "vqekit/hamiltonian.hpp"
#include "vqekit/simulate.hpp"
#include "vqekit/state.hpp"

namespace vqekit {

// Tensor-product readout confusion model. per_qubit[k][i][j] is the
// probability of measuring i given prepared j (rows = measured, columns =
// prepared), so a noisy distribution is A · true.
struct ConfusionModel {
    std::vector<std::array<std::array<double, 2>, 2>> per_qubit;

    std::size_t n_qubits() const noexcept { return per_qubit.size(); }

    // Columns sum to 1 within 1e-12, entries non-negative, both diagonal
    // entries > 0.5, and |det| >= 1e-6 per qubit.
    void validate() const;

    static ConfusionModel identity(std::size_t n_qubits);
    static ConfusionModel from_noise(const NoiseModel& noise, std::size_t n_qubits);
};

// Applies (A^(k))^{-1} qubit-wise to the normalized counts, never forming
// the 2^n matrix. Entries may go negative (quasi-probabilities, kept signed
// for unbiased expectation values); the total stays 1.
CliqueDistribution mitigate_counts(const MeasurementRecord& record,
                                   const ConfusionModel& model);

enum class FitKind { linear, quadratic, richardson };

FitKind parse_fit_kind(std::string_view name);
std::string_view fit_kind_name(FitKind kind);

struct ZnePoint {
    std::size_t lambda = 1;
    double energy = 0.0;
    double std_error = 0.0;
};

struct ZneSeries {
    std::vector<ZnePoint> points;
    FitKind fit_kind = FitKind::linear;

    // Distinct lambda >= 1; at least 2 points for linear, 3 otherwise.
    void validate() const;
};

struct ZneFit {
    double e0 = 0.0;         // fit evaluated at lambda = 0
    double std_error = 0.0;  // from the fit covariance; 0 when any input sigma <= 0
    std::vector<double> coefficients;  // ascending powers of lambda
};

// Weighted least squares in powers of lambda (degree 1, 2, or points-1 for
// Richardson), weights 1/sigma^2 when every point carries a positive error
// and ordinary least squares otherwise. Throws on a rank-deficient design.
ZneFit extrapolate(const ZneSeries& series);

struct MitigationConfig {
    std::vector<std::size_t> lambdas = {1, 2, 3};
    std::uint64_t shots = 100000;  // per tile and measurement clique
    std::size_t tiles = 1;         // hardware blocks run in parallel; counts pooled
    bool mem = true;
    bool dd = false;
    std::uint64_t seed = 0;
    FitKind fit_kind = FitKind::linear;

    void validate() const;
};

struct TileResult {
    std::size_t tile = 0;
    double noise_scale = 1.0;
    double energy = 0.0;
};

struct LambdaResult {
    std::size_t lambda = 1;
    double energy = 0.0;     // pooled across tiles
    double std_error = 0.0;  // tile spread for >= 2 tiles, else multinomial propagation
    std::vector<TileResult> tiles;
};

struct MitigationReport {
    double e0 = 0.0;
    double std_error = 0.0;
    std::vector<double> coefficients;
    FitKind fit_kind = FitKind::linear;
    std::vector<LambdaResult> lambdas;
    double raw_energy = 0.0;  // smallest-lambda pooled estimate without MEM
    std::uint64_t shots_per_tile = 0;
    std::uint64_t effective_shots = 0;  // shots x tiles
    bool mem = false;
    bool dd = false;
    std::uint64_t seed = 0;
};

// The full pipeline: per lambda, amplify the bound ansatz, optionally insert
// decoupling pulses, simulate each tile's density matrix at its own noise
// scale, push the Born distribution through readout noise, sample, optionally
// invert the confusion model, pool tiles, and estimate the energy; finally
// extrapolate the series to lambda = 0. slot_values bind the circuit's
// rotation slots (exponential_slot_values converts ansatz angles).
MitigationReport run_mitigated_energy(const LabeledHamiltonian& h, const Circuit& ansatz,
                                      const std::vector<double>& slot_values,
                                      const NoiseModel& noise, const MitigationConfig& cfg);

std::string report_json(const MitigationReport& report);

}  // namespace vqekit
