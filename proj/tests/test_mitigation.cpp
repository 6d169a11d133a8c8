// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Error-mitigation contract: confusion-model inversion against dense
// Kronecker inverses, zero-noise extrapolation on exactly representable
// series, configuration validation, and the end-to-end pipeline on the
// bundled dissociation-limit instance.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "oracle.hpp"
#include "vqekit/adapt.hpp"
#include "vqekit/hamiltonian.hpp"
#include "vqekit/mitigation.hpp"
#include "vqekit/simulate.hpp"
#include "vqekit/state.hpp"

using vqekit::CliqueDistribution;
using vqekit::ConfusionModel;
using vqekit::FitKind;
using vqekit::LabeledHamiltonian;
using vqekit::MeasurementRecord;
using vqekit::MitigationConfig;
using vqekit::MitigationReport;
using vqekit::NoiseModel;
using vqekit::PauliString;
using vqekit::PauliSum;
using vqekit::ZnePoint;
using vqekit::ZneSeries;

namespace {

// Dense Kronecker product of the per-qubit confusion matrices (qubit 0 is
// the least-significant factor), for cross-checking the factor-wise solve.
Eigen::MatrixXd dense_confusion(const ConfusionModel& model) {
    Eigen::MatrixXd full = Eigen::MatrixXd::Identity(1, 1);
    for (std::size_t q = 0; q < model.n_qubits(); ++q) {
        Eigen::Matrix2d a;
        a << model.per_qubit[q][0][0], model.per_qubit[q][0][1], model.per_qubit[q][1][0],
            model.per_qubit[q][1][1];
        Eigen::MatrixXd next(full.rows() * 2, full.cols() * 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                next.block(i * full.rows(), j * full.cols(), full.rows(), full.cols()) =
                    a(i, j) * full;
        full = next;
    }
    return full;
}

struct BoundAnsatz {
    LabeledHamiltonian hamiltonian;
    vqekit::Circuit circuit;
    std::vector<double> slots;
    double noiseless_energy = 0.0;
};

// The dissociation-limit instance with its six-generator ansatz, optimized
// once and shared across the pipeline cases.
const BoundAnsatz& bound_ansatz() {
    static const BoundAnsatz cached = [] {
        BoundAnsatz b;
        b.hamiltonian = vqekit::load_bundled_hamiltonian("h9");
        std::vector<PauliString> gens;
        for (const char* s : {"IIIIY", "IIYII", "YIIII", "IIIYX", "IYXII", "XIIYI"})
            gens.push_back(PauliString::parse(s));
        const PauliSum hsum = b.hamiltonian.cover.reconstruct();
        const vqekit::OptimizeResult opt =
            vqekit::optimize_parameters(hsum, 0, gens, std::vector<double>(6, 0.0));
        b.circuit = vqekit::compile_ansatz(5, 0, gens);
        b.slots = vqekit::exponential_slot_values(opt.thetas);
        b.noiseless_energy = opt.energy;
        return b;
    }();
    return cached;
}

}  // namespace

TEST_CASE("confusion models build from noise and validate their shape") {
    const ConfusionModel id = ConfusionModel::identity(3);
    REQUIRE(id.n_qubits() == 3);
    for (const auto& a : id.per_qubit) {
        CHECK(a[0][0] == 1.0);
        CHECK(a[1][1] == 1.0);
        CHECK(a[0][1] == 0.0);
        CHECK(a[1][0] == 0.0);
    }
    id.validate();

    NoiseModel noise = NoiseModel::zero();
    noise.default_readout = {0.02, 0.03};
    noise.readout_overrides[1] = {0.10, 0.05};
    const ConfusionModel built = ConfusionModel::from_noise(noise, 3);
    REQUIRE(built.n_qubits() == 3);
    // Columns are prepared values: P(read 1 | prepared 0) = flip0.
    CHECK(built.per_qubit[0][0][0] == doctest::Approx(0.98));
    CHECK(built.per_qubit[0][1][0] == doctest::Approx(0.02));
    CHECK(built.per_qubit[0][0][1] == doctest::Approx(0.03));
    CHECK(built.per_qubit[0][1][1] == doctest::Approx(0.97));
    CHECK(built.per_qubit[1][1][0] == doctest::Approx(0.10));
    CHECK(built.per_qubit[1][0][1] == doctest::Approx(0.05));
    CHECK(built.per_qubit[2][0][0] == doctest::Approx(0.98));
    built.validate();

    CHECK_THROWS_AS(ConfusionModel{}.validate(), std::invalid_argument);

    ConfusionModel negative = id;
    negative.per_qubit[0] = {{{1.1, 0.0}, {-0.1, 1.0}}};
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);

    ConfusionModel lopsided = id;
    lopsided.per_qubit[1] = {{{0.9, 0.0}, {0.2, 1.0}}};  // column sums 1.1
    CHECK_THROWS_AS(lopsided.validate(), std::invalid_argument);

    ConfusionModel weak = id;
    weak.per_qubit[2] = {{{0.5, 0.5}, {0.5, 0.5}}};  // diagonal not dominant
    CHECK_THROWS_AS(weak.validate(), std::invalid_argument);

    ConfusionModel singular = id;
    singular.per_qubit[0] = {{{0.5000001, 0.49999995}, {0.4999999, 0.50000005}}};
    CHECK_THROWS_AS(singular.validate(), std::invalid_argument);
}

TEST_CASE("count mitigation inverts product readout noise exactly") {
    // One qubit, counts exactly in the noisy proportion of a pure |0>.
    NoiseModel one = NoiseModel::zero();
    one.default_readout = {0.1, 0.2};
    const ConfusionModel a1 = ConfusionModel::from_noise(one, 1);
    MeasurementRecord record;
    record.counts = {{0, 90000}, {1, 10000}};
    record.shots = 100000;
    record.basis_clique = 2;
    const CliqueDistribution fixed = vqekit::mitigate_counts(record, a1);
    CHECK(fixed.basis_clique == 2);
    REQUIRE(fixed.weights.size() == 2);
    CHECK(fixed.weights[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fixed.weights[1] == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));

    // Dyadic flips and a dyadic truth make the noisy counts exactly
    // representable: mitigation must return the truth to within 1e-10 total
    // variation (the infinite-shot statement).
    NoiseModel dyadic = NoiseModel::zero();
    dyadic.default_readout = {0.25, 0.125};
    dyadic.readout_overrides[2] = {0.0625, 0.25};
    const ConfusionModel a3 = ConfusionModel::from_noise(dyadic, 3);
    std::vector<double> truth(8, 0.0);
    truth[0] = 21.0 / 64.0;
    truth[3] = 1.0 / 64.0;
    truth[5] = 32.0 / 64.0;
    truth[6] = 10.0 / 64.0;
    const std::vector<double> noisy = vqekit::apply_readout_noise(truth, dyadic, 3);
    MeasurementRecord big;
    big.shots = 0;
    for (std::size_t b = 0; b < 8; ++b) {
        const double scaled = noisy[b] * 16777216.0;  // 2^24: exactly integral
        const auto c = static_cast<std::uint64_t>(std::llround(scaled));
        CHECK(scaled == doctest::Approx(static_cast<double>(c)).epsilon(1e-12));
        if (c == 0) continue;
        big.counts[b] = c;
        big.shots += c;
    }
    const CliqueDistribution recovered = vqekit::mitigate_counts(big, a3);
    double tv = 0.0;
    double total = 0.0;
    for (std::size_t b = 0; b < 8; ++b) {
        tv += std::abs(recovered.weights[b] - truth[b]);
        total += recovered.weights[b];
    }
    CHECK(tv < 1e-10);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Arbitrary counts against the dense Kronecker inverse.
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<std::uint64_t> bump(0, 5000);
    MeasurementRecord messy;
    messy.shots = 0;
    for (std::size_t b = 0; b < 8; ++b) {
        const std::uint64_t c = bump(rng) + 1;
        messy.counts[b] = c;
        messy.shots += c;
    }
    const CliqueDistribution solved = vqekit::mitigate_counts(messy, a3);
    Eigen::VectorXd observed(8);
    for (std::size_t b = 0; b < 8; ++b)
        observed[static_cast<Eigen::Index>(b)] =
            static_cast<double>(messy.counts[b]) / static_cast<double>(messy.shots);
    const Eigen::VectorXd dense = dense_confusion(a3).fullPivLu().solve(observed);
    for (std::size_t b = 0; b < 8; ++b)
        CHECK(solved.weights[b] ==
              doctest::Approx(dense[static_cast<Eigen::Index>(b)]).epsilon(1e-10));
}

TEST_CASE("mitigated weights stay signed and sum to one") {
    // Observing pure |1> under strong asymmetric noise demands a negative
    // quasi-probability on |0>; the inversion must keep it.
    NoiseModel strong = NoiseModel::zero();
    strong.default_readout = {0.1, 0.2};
    const ConfusionModel model = ConfusionModel::from_noise(strong, 1);
    MeasurementRecord record;
    record.counts = {{1, 7000}};
    record.shots = 7000;
    const CliqueDistribution dist = vqekit::mitigate_counts(record, model);
    CHECK(dist.weights[0] == doctest::Approx(-0.2 / 0.7).epsilon(1e-12));
    CHECK(dist.weights[1] == doctest::Approx(0.9 / 0.7).epsilon(1e-12));
    CHECK(dist.weights[0] + dist.weights[1] == doctest::Approx(1.0).epsilon(1e-12));

    MeasurementRecord hollow;
    CHECK_THROWS_AS(vqekit::mitigate_counts(hollow, model), std::invalid_argument);

    MeasurementRecord wide;
    wide.counts = {{0b100, 5}};
    wide.shots = 5;
    CHECK_THROWS_AS(vqekit::mitigate_counts(wide, model), std::invalid_argument);
}

TEST_CASE("fit kinds parse and name") {
    CHECK(vqekit::parse_fit_kind("linear") == FitKind::linear);
    CHECK(vqekit::parse_fit_kind("quadratic") == FitKind::quadratic);
    CHECK(vqekit::parse_fit_kind("richardson") == FitKind::richardson);
    CHECK(vqekit::fit_kind_name(FitKind::linear) == "linear");
    CHECK(vqekit::fit_kind_name(FitKind::quadratic) == "quadratic");
    CHECK(vqekit::fit_kind_name(FitKind::richardson) == "richardson");
    CHECK_THROWS_AS(vqekit::parse_fit_kind("cubic"), std::invalid_argument);
}

TEST_CASE("zero-noise extrapolation reproduces exact series") {
    // A perfect line: E(lambda) = -1.1 + 0.1 lambda.
    ZneSeries line;
    line.points = {{1, -1.0, 0.0}, {2, -0.9, 0.0}, {3, -0.8, 0.0}};
    const vqekit::ZneFit linear = vqekit::extrapolate(line);
    CHECK(linear.e0 == doctest::Approx(-1.1).epsilon(1e-12));
    REQUIRE(linear.coefficients.size() == 2);
    CHECK(linear.coefficients[0] == doctest::Approx(-1.1).epsilon(1e-12));
    CHECK(linear.coefficients[1] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(linear.std_error == 0.0);

    // Constant series: the intercept is the shared value.
    ZneSeries flat;
    flat.points = {{1, -2.5, 0.0}, {3, -2.5, 0.0}};
    CHECK(vqekit::extrapolate(flat).e0 == doctest::Approx(-2.5).epsilon(1e-12));

    // An exact parabola: E(lambda) = 2 - 0.5 lambda + 0.125 lambda^2.
    const auto parabola = [](double l) { return 2.0 - 0.5 * l + 0.125 * l * l; };
    ZneSeries quad;
    quad.fit_kind = FitKind::quadratic;
    for (const std::size_t l : {1, 2, 3, 4})
        quad.points.push_back(ZnePoint{l, parabola(static_cast<double>(l)), 0.0});
    const vqekit::ZneFit curved = vqekit::extrapolate(quad);
    CHECK(curved.e0 == doctest::Approx(2.0).epsilon(1e-10));
    REQUIRE(curved.coefficients.size() == 3);
    CHECK(curved.coefficients[2] == doctest::Approx(0.125).epsilon(1e-10));

    // Richardson on m points is exact for a degree m-1 polynomial.
    const auto cubic = [](double l) { return 1.0 + l - l * l + 0.25 * l * l * l; };
    ZneSeries rich;
    rich.fit_kind = FitKind::richardson;
    for (const std::size_t l : {1, 2, 3, 4})
        rich.points.push_back(ZnePoint{l, cubic(static_cast<double>(l)), 0.0});
    CHECK(vqekit::extrapolate(rich).e0 == doctest::Approx(1.0).epsilon(1e-9));

    // Per-point errors feed the weighted fit and its covariance.
    ZneSeries weighted = line;
    for (ZnePoint& p : weighted.points) p.std_error = 0.05;
    const vqekit::ZneFit careful = vqekit::extrapolate(weighted);
    CHECK(careful.e0 == doctest::Approx(-1.1).epsilon(1e-12));
    CHECK(careful.std_error > 0.0);
}

TEST_CASE("series validation rejects degenerate grids") {
    ZneSeries empty;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);

    ZneSeries lonely;
    lonely.points = {{1, -1.0, 0.0}};
    CHECK_THROWS_AS(lonely.validate(), std::invalid_argument);

    ZneSeries shallow;
    shallow.fit_kind = FitKind::quadratic;
    shallow.points = {{1, -1.0, 0.0}, {2, -0.9, 0.0}};
    CHECK_THROWS_AS(shallow.validate(), std::invalid_argument);

    ZneSeries zero;
    zero.points = {{0, -1.0, 0.0}, {1, -0.9, 0.0}};
    CHECK_THROWS_AS(zero.validate(), std::invalid_argument);

    ZneSeries doubled;
    doubled.points = {{2, -1.0, 0.0}, {2, -0.9, 0.0}};
    CHECK_THROWS_AS(doubled.validate(), std::invalid_argument);
}

TEST_CASE("mitigation configuration validates") {
    MitigationConfig ok;
    ok.validate();

    MitigationConfig bad = ok;
    bad.lambdas = {};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.lambdas = {0, 1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.lambdas = {1, 2, 2};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.shots = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.tiles = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("the pipeline reproduces noiseless energies without noise") {
    const BoundAnsatz& b = bound_ansatz();
    MitigationConfig cfg;
    cfg.shots = 200000;
    cfg.seed = 1;
    const MitigationReport r =
        vqekit::run_mitigated_energy(b.hamiltonian, b.circuit, b.slots, NoiseModel::zero(), cfg);
    CHECK(std::abs(r.e0 - b.noiseless_energy) < 0.02);
    CHECK(std::abs(r.raw_energy - b.noiseless_energy) < 0.02);

    REQUIRE(r.lambdas.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r.lambdas[i].lambda == cfg.lambdas[i]);
        REQUIRE(r.lambdas[i].tiles.size() == 1);
        CHECK(std::abs(r.lambdas[i].energy - b.noiseless_energy) < 0.02);
    }
    CHECK(r.shots_per_tile == cfg.shots);
    CHECK(r.effective_shots == cfg.shots);
    CHECK(r.mem);
    CHECK_FALSE(r.dd);
    CHECK(r.seed == 1);
    CHECK(r.fit_kind == FitKind::linear);

    // Input validation: wrong width and unbound slots.
    CHECK_THROWS_AS(vqekit::run_mitigated_energy(b.hamiltonian, vqekit::Circuit(4), {},
                                                 NoiseModel::zero(), cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        vqekit::run_mitigated_energy(b.hamiltonian, b.circuit, {}, NoiseModel::zero(), cfg),
        std::invalid_argument);
}

TEST_CASE("extrapolation pulls depolarized energies back toward the truth") {
    const BoundAnsatz& b = bound_ansatz();
    MitigationConfig cfg;
    cfg.shots = 100000;
    cfg.tiles = 5;
    cfg.seed = 7;
    const NoiseModel noise;  // default depolarizing + readout
    const MitigationReport r =
        vqekit::run_mitigated_energy(b.hamiltonian, b.circuit, b.slots, noise, cfg);

    const double err_mitigated = std::abs(r.e0 - b.noiseless_energy);
    const double err_unmitigated = std::abs(r.lambdas[0].energy - b.noiseless_energy);
    const double err_raw = std::abs(r.raw_energy - b.noiseless_energy);
    CHECK(err_mitigated < err_unmitigated);
    // Readout inversion already helps at lambda = 1.
    CHECK(err_unmitigated < err_raw);
    // Noise pushes this instance's energy up; the series must slope down
    // toward the intercept.
    CHECK(r.lambdas[0].energy < r.lambdas[1].energy);
    CHECK(r.lambdas[1].energy < r.lambdas[2].energy);
    CHECK(r.e0 < r.lambdas[0].energy);
    CHECK(r.effective_shots == cfg.shots * 5);
    for (const vqekit::LambdaResult& lr : r.lambdas) {
        CHECK(lr.std_error > 0.0);
        REQUIRE(lr.tiles.size() == 5);
    }
}

TEST_CASE("decoupling insertion is inert under depolarizing-only noise") {
    // Idle-gap pulses are ideal and add no depolarizing events, so toggling
    // them must not move a single sample.
    const BoundAnsatz& b = bound_ansatz();
    NoiseModel dep = NoiseModel::zero();
    dep.p_1q = 0.001;
    dep.p_2q = 0.01;
    MitigationConfig plain;
    plain.shots = 50000;
    plain.seed = 3;
    MitigationConfig pulsed = plain;
    pulsed.dd = true;
    const MitigationReport off =
        vqekit::run_mitigated_energy(b.hamiltonian, b.circuit, b.slots, dep, plain);
    const MitigationReport on =
        vqekit::run_mitigated_energy(b.hamiltonian, b.circuit, b.slots, dep, pulsed);
    CHECK(off.e0 == doctest::Approx(on.e0).epsilon(1e-9));
    CHECK_FALSE(off.dd);
    CHECK(on.dd);
}

TEST_CASE("tile heterogeneity shows up as ordered per-tile energies") {
    const BoundAnsatz& b = bound_ansatz();
    NoiseModel het = NoiseModel::zero();
    het.p_1q = 0.001;
    het.p_2q = 0.01;
    het.tile_scales = {0.5, 0.75, 1.0, 1.25, 1.5};
    MitigationConfig cfg;
    cfg.shots = 100000;
    cfg.tiles = 5;
    cfg.seed = 11;
    cfg.lambdas = {1, 2};
    const MitigationReport r =
        vqekit::run_mitigated_energy(b.hamiltonian, b.circuit, b.slots, het, cfg);

    const std::vector<vqekit::TileResult>& tiles = r.lambdas[0].tiles;
    REQUIRE(tiles.size() == 5);
    for (std::size_t t = 0; t < 5; ++t) {
        CHECK(tiles[t].tile == t);
        CHECK(tiles[t].noise_scale == het.tile_scales[t]);
    }
    // Less depolarizing means a deeper energy: the 0.04 Ha spread across
    // scales dwarfs the ~0.003 Ha shot noise at these settings.
    CHECK(tiles[0].energy < tiles[4].energy);
    CHECK(r.lambdas[0].std_error > 0.0);

    // Unscaled tiles draw their factors from the seeded band instead.
    NoiseModel drawn = het;
    drawn.tile_scales.clear();
    drawn.tile_scale_spread = 0.4;
    const MitigationReport d =
        vqekit::run_mitigated_energy(b.hamiltonian, b.circuit, b.slots, drawn, cfg);
    for (const vqekit::TileResult& t : d.lambdas[0].tiles) {
        CHECK(t.noise_scale >= 0.6);
        CHECK(t.noise_scale <= 1.4);
    }
}

TEST_CASE("reports serialize deterministically and parse as JSON") {
    const BoundAnsatz& b = bound_ansatz();
    MitigationConfig cfg;
    cfg.shots = 20000;
    cfg.seed = 5;
    const NoiseModel noise;
    const MitigationReport r1 =
        vqekit::run_mitigated_energy(b.hamiltonian, b.circuit, b.slots, noise, cfg);
    const MitigationReport r2 =
        vqekit::run_mitigated_energy(b.hamiltonian, b.circuit, b.slots, noise, cfg);

    const std::string text = vqekit::report_json(r1);
    CHECK(text == vqekit::report_json(r2));

    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j.at("e0").get<double>() == doctest::Approx(r1.e0));
    CHECK(j.at("fit").get<std::string>() == "linear");
    CHECK(j.at("shots_per_tile").get<std::uint64_t>() == 20000);
    CHECK(j.at("seed").get<std::uint64_t>() == 5);
    CHECK(j.at("mem").get<bool>());
    CHECK(j.at("lambdas").is_array());
    CHECK(j.at("lambdas").size() == 3);
}
