// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#include "vqekit/mitigation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "vqekit/rng.hpp"

namespace vqekit {

void ConfusionModel::validate() const {
    if (per_qubit.empty())
        throw std::invalid_argument("ConfusionModel: no qubits");
    for (std::size_t q = 0; q < per_qubit.size(); ++q) {
        const auto& a = per_qubit[q];
        const std::string where = "ConfusionModel: qubit " + std::to_string(q);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (!(a[i][j] >= 0.0)) throw std::invalid_argument(where + ": negative entry");
        if (std::abs(a[0][0] + a[1][0] - 1.0) > 1e-12 ||
            std::abs(a[0][1] + a[1][1] - 1.0) > 1e-12)
            throw std::invalid_argument(where + ": columns must sum to 1");
        if (!(a[0][0] > 0.5) || !(a[1][1] > 0.5))
            throw std::invalid_argument(where + ": diagonal must dominate (> 0.5)");
        if (std::abs(a[0][0] * a[1][1] - a[0][1] * a[1][0]) < 1e-6)
            throw std::invalid_argument(where + ": matrix is singular");
    }
}

ConfusionModel ConfusionModel::identity(std::size_t n_qubits) {
    ConfusionModel m;
    m.per_qubit.assign(n_qubits, {{{1.0, 0.0}, {0.0, 1.0}}});
    return m;
}

ConfusionModel ConfusionModel::from_noise(const NoiseModel& noise, std::size_t n_qubits) {
    ConfusionModel m;
    m.per_qubit.reserve(n_qubits);
    for (std::size_t q = 0; q < n_qubits; ++q) {
        const ReadoutFlips f = noise.readout_for(q);
        m.per_qubit.push_back({{{1.0 - f.flip0, f.flip1}, {f.flip0, 1.0 - f.flip1}}});
    }
    return m;
}

CliqueDistribution mitigate_counts(const MeasurementRecord& record,
                                   const ConfusionModel& model) {
    model.validate();
    if (record.shots == 0)
        throw std::invalid_argument("mitigate_counts: record has zero shots");
    const std::size_t n = model.n_qubits();
    const std::size_t dim = std::size_t{1} << n;
    for (const auto& [outcome, count] : record.counts)
        if (outcome >= dim)
            throw std::invalid_argument(
                "mitigate_counts: outcome exceeds the confusion model's qubit count");

    CliqueDistribution dist;
    dist.basis_clique = record.basis_clique;
    dist.weights.assign(dim, 0.0);
    for (const auto& [outcome, count] : record.counts)
        dist.weights[outcome] =
            static_cast<double>(count) / static_cast<double>(record.shots);

    for (std::size_t q = 0; q < n; ++q) {
        const auto& a = model.per_qubit[q];
        const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        const double inv00 = a[1][1] / det, inv01 = -a[0][1] / det;
        const double inv10 = -a[1][0] / det, inv11 = a[0][0] / det;
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t b = 0; b < dim; ++b) {
            if (b & bit) continue;
            const double p0 = dist.weights[b];
            const double p1 = dist.weights[b | bit];
            dist.weights[b] = inv00 * p0 + inv01 * p1;
            dist.weights[b | bit] = inv10 * p0 + inv11 * p1;
        }
    }
    return dist;
}

FitKind parse_fit_kind(std::string_view name) {
    if (name == "linear") return FitKind::linear;
    if (name == "quadratic") return FitKind::quadratic;
    if (name == "richardson") return FitKind::richardson;
    throw std::invalid_argument("unknown fit kind: " + std::string(name));
}

std::string_view fit_kind_name(FitKind kind) {
    switch (kind) {
        case FitKind::linear: return "linear";
        case FitKind::quadratic: return "quadratic";
        case FitKind::richardson: return "richardson";
    }
    throw std::logic_error("fit_kind_name: unknown value");
}

void ZneSeries::validate() const {
    const std::size_t minimum = fit_kind == FitKind::linear ? 2 : 3;
    if (points.size() < minimum)
        throw std::invalid_argument("ZneSeries: need at least " + std::to_string(minimum) +
                                    " points for a " + std::string(fit_kind_name(fit_kind)) +
                                    " fit");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].lambda < 1)
            throw std::invalid_argument("ZneSeries: lambda must be >= 1");
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i].lambda == points[j].lambda)
                throw std::invalid_argument("ZneSeries: lambda values must be distinct");
    }
}

ZneFit extrapolate(const ZneSeries& series) {
    series.validate();
    const std::size_t p = series.points.size();
    const std::size_t degree =
        series.fit_kind == FitKind::linear ? 1 : series.fit_kind == FitKind::quadratic ? 2
                                                                                       : p - 1;
    if (degree + 1 > p)
        throw std::invalid_argument("extrapolate: not enough points for the fit degree");

    bool weighted = true;
    for (const ZnePoint& pt : series.points)
        if (!(pt.std_error > 0.0)) weighted = false;

    Eigen::MatrixXd design(p, degree + 1);
    Eigen::VectorXd y(p), sqrt_w(p);
    for (std::size_t i = 0; i < p; ++i) {
        double power = 1.0;
        for (std::size_t j = 0; j <= degree; ++j) {
            design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = power;
            power *= static_cast<double>(series.points[i].lambda);
        }
        y(static_cast<Eigen::Index>(i)) = series.points[i].energy;
        sqrt_w(static_cast<Eigen::Index>(i)) =
            weighted ? 1.0 / series.points[i].std_error : 1.0;
    }

    const Eigen::MatrixXd a = sqrt_w.asDiagonal() * design;
    const Eigen::VectorXd b = sqrt_w.asDiagonal() * y;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < static_cast<Eigen::Index>(degree + 1))
        throw std::runtime_error("extrapolate: degenerate design matrix");
    const Eigen::VectorXd beta = qr.solve(b);

    ZneFit fit;
    fit.coefficients.assign(beta.data(), beta.data() + beta.size());
    fit.e0 = beta(0);
    if (weighted) {
        const Eigen::MatrixXd covariance = (a.transpose() * a).inverse();
        fit.std_error = std::sqrt(std::max(covariance(0, 0), 0.0));
    }
    return fit;
}

void MitigationConfig::validate() const {
    if (lambdas.empty()) throw std::invalid_argument("MitigationConfig: empty lambda grid");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (lambdas[i] < 1)
            throw std::invalid_argument("MitigationConfig: lambda must be >= 1");
        for (std::size_t j = i + 1; j < lambdas.size(); ++j)
            if (lambdas[i] == lambdas[j])
                throw std::invalid_argument("MitigationConfig: duplicate lambda");
    }
    if (shots == 0) throw std::invalid_argument("MitigationConfig: shots must be positive");
    if (tiles == 0) throw std::invalid_argument("MitigationConfig: tiles must be positive");
}

namespace {

// Per-outcome energy contribution of one clique: g(b) = sum_t c_t (-1)^{|b & supp_t|}.
std::vector<double> outcome_values(const PauliSum& clique, std::size_t dim) {
    std::vector<double> g(dim, 0.0);
    for (const auto& [w, coeff] : clique.terms()) {
        const std::uint64_t support = w.x | w.z;
        for (std::size_t b = 0; b < dim; ++b)
            g[b] += (std::popcount(b & support) & 1) ? -coeff : coeff;
    }
    return g;
}

// Multinomial variance of one clique's estimator at `shots` samples:
// Var = (E[g^2] - E[g]^2) / shots, with negative quasi-weights clamped for
// the probability estimate only.
double clique_variance(const std::vector<double>& weights, const std::vector<double>& g,
                       std::uint64_t shots) {
    double total = 0.0, mean = 0.0, second = 0.0;
    for (std::size_t b = 0; b < weights.size(); ++b) total += std::max(weights[b], 0.0);
    if (total <= 0.0) return 0.0;
    for (std::size_t b = 0; b < weights.size(); ++b) {
        const double p = std::max(weights[b], 0.0) / total;
        mean += p * g[b];
        second += p * g[b] * g[b];
    }
    return std::max(second - mean * mean, 0.0) / static_cast<double>(shots);
}

}  // namespace

MitigationReport run_mitigated_energy(const LabeledHamiltonian& h, const Circuit& ansatz,
                                      const std::vector<double>& slot_values,
                                      const NoiseModel& noise, const MitigationConfig& cfg) {
    cfg.validate();
    noise.validate();
    const std::size_t n = h.n_qubits;
    if (ansatz.n_qubits() != n)
        throw std::invalid_argument("run_mitigated_energy: circuit qubit count mismatch");
    if (slot_values.size() != ansatz.n_slots())
        throw std::invalid_argument("run_mitigated_energy: one value per rotation slot");
    const std::size_t dim = std::size_t{1} << n;
    const std::vector<PauliSum>& cliques = h.cover.cliques;
    const ConfusionModel confusion = ConfusionModel::from_noise(noise, n);

    MitigationReport report;
    report.fit_kind = cfg.fit_kind;
    report.shots_per_tile = cfg.shots;
    report.effective_shots = cfg.shots * cfg.tiles;
    report.mem = cfg.mem;
    report.dd = cfg.dd;
    report.seed = cfg.seed;

    const std::size_t lambda_min =
        *std::min_element(cfg.lambdas.begin(), cfg.lambdas.end());

    ZneSeries series;
    series.fit_kind = cfg.fit_kind;

    for (const std::size_t lambda : cfg.lambdas) {
        Circuit amplified = amplify_noise(ansatz, lambda);
        if (cfg.dd) amplified = insert_dd(amplified);

        LambdaResult lr;
        lr.lambda = lambda;
        std::vector<std::vector<double>> pooled(cliques.size(),
                                                std::vector<double>(dim, 0.0));
        std::vector<std::vector<double>> pooled_raw(cliques.size(),
                                                    std::vector<double>(dim, 0.0));
        std::vector<double> tile_energies;
        tile_energies.reserve(cfg.tiles);

        for (std::size_t tile = 0; tile < cfg.tiles; ++tile) {
            const double scale = tile_noise_scale(noise, cfg.seed, tile);
            const QuantumState rho = run_density(amplified, slot_values, noise, scale);

            std::vector<CliqueDistribution> dists;
            dists.reserve(cliques.size());
            for (std::size_t ci = 0; ci < cliques.size(); ++ci) {
                std::vector<double> probs = measurement_probabilities(rho, cliques[ci]);
                probs = apply_readout_noise(probs, noise, n);
                std::mt19937_64 stream =
                    make_stream(cfg.seed, {"zne", std::to_string(lambda), "tile",
                                           std::to_string(tile), "clique",
                                           std::to_string(ci)});
                const MeasurementRecord record =
                    sample_distribution(probs, cfg.shots, stream, ci);
                CliqueDistribution raw = to_distribution(record, n);
                for (std::size_t b = 0; b < dim; ++b)
                    pooled_raw[ci][b] += raw.weights[b];
                dists.push_back(cfg.mem ? mitigate_counts(record, confusion)
                                        : std::move(raw));
                for (std::size_t b = 0; b < dim; ++b)
                    pooled[ci][b] += dists.back().weights[b];
            }
            const double tile_energy = estimate_energy(dists, h.cover);
            tile_energies.push_back(tile_energy);
            lr.tiles.push_back(TileResult{tile, scale, tile_energy});
        }

        std::vector<CliqueDistribution> pooled_dists(cliques.size());
        for (std::size_t ci = 0; ci < cliques.size(); ++ci) {
            for (double& w : pooled[ci]) w /= static_cast<double>(cfg.tiles);
            pooled_dists[ci] = CliqueDistribution{std::move(pooled[ci]), ci};
        }
        lr.energy = estimate_energy(pooled_dists, h.cover);

        if (cfg.tiles >= 2) {
            double mean = 0.0;
            for (const double e : tile_energies) mean += e;
            mean /= static_cast<double>(cfg.tiles);
            double ss = 0.0;
            for (const double e : tile_energies) ss += (e - mean) * (e - mean);
            const double sample_var = ss / static_cast<double>(cfg.tiles - 1);
            lr.std_error = std::sqrt(sample_var / static_cast<double>(cfg.tiles));
        } else {
            double variance = 0.0;
            for (std::size_t ci = 0; ci < cliques.size(); ++ci)
                variance += clique_variance(pooled_dists[ci].weights,
                                            outcome_values(cliques[ci], dim), cfg.shots);
            lr.std_error = std::sqrt(variance);
        }

        if (lambda == lambda_min) {
            std::vector<CliqueDistribution> raw_dists(cliques.size());
            for (std::size_t ci = 0; ci < cliques.size(); ++ci) {
                for (double& w : pooled_raw[ci]) w /= static_cast<double>(cfg.tiles);
                raw_dists[ci] = CliqueDistribution{std::move(pooled_raw[ci]), ci};
            }
            report.raw_energy = estimate_energy(raw_dists, h.cover);
        }

        series.points.push_back(ZnePoint{lambda, lr.energy, lr.std_error});
        report.lambdas.push_back(std::move(lr));
    }

    const ZneFit fit = extrapolate(series);
    report.e0 = fit.e0;
    report.std_error = fit.std_error;
    report.coefficients = fit.coefficients;
    return report;
}

std::string report_json(const MitigationReport& report) {
    nlohmann::json j;
    j["e0"] = report.e0;
    j["std_error"] = report.std_error;
    j["coefficients"] = report.coefficients;
    j["fit"] = std::string(fit_kind_name(report.fit_kind));
    j["raw_energy"] = report.raw_energy;
    j["shots_per_tile"] = report.shots_per_tile;
    j["effective_shots"] = report.effective_shots;
    j["mem"] = report.mem;
    j["dd"] = report.dd;
    j["seed"] = report.seed;
    nlohmann::json lambdas = nlohmann::json::array();
    for (const LambdaResult& lr : report.lambdas) {
        nlohmann::json jl;
        jl["lambda"] = lr.lambda;
        jl["energy"] = lr.energy;
        jl["std_error"] = lr.std_error;
        nlohmann::json tiles = nlohmann::json::array();
        for (const TileResult& tr : lr.tiles) {
            nlohmann::json jt;
            jt["tile"] = tr.tile;
            jt["noise_scale"] = tr.noise_scale;
            jt["energy"] = tr.energy;
            tiles.push_back(std::move(jt));
        }
        jl["tiles"] = std::move(tiles);
        lambdas.push_back(std::move(jl));
    }
    j["lambdas"] = std::move(lambdas);
    return j.dump(2) + "\n";
}

}  // namespace vqekit
