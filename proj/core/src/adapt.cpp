// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#include "vqekit/adapt.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "json.hpp"

namespace vqekit {

namespace {

using cd = std::complex<double>;
using Vec = Eigen::VectorXcd;

// P |b> = i^{phase + #Y} (-1)^{popcount(b & z)} |b ^ x>.
void apply_word_into(const Word& w, int phase_exponent, const Vec& in, Vec& out) {
    constexpr cd powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int k = (phase_exponent + std::popcount(w.x & w.z)) & 3;
    const auto dim = static_cast<std::uint64_t>(in.size());
    for (std::uint64_t b = 0; b < dim; ++b) {
        const int kk = (k + 2 * (std::popcount(b & w.z) & 1)) & 3;
        out[static_cast<Eigen::Index>(b ^ w.x)] = powers[kk] * in[static_cast<Eigen::Index>(b)];
    }
}

Vec apply_sum(const PauliSum& h, const Vec& in) {
    constexpr cd powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    Vec out = Vec::Zero(in.size());
    const auto dim = static_cast<std::uint64_t>(in.size());
    for (const auto& [w, coeff] : h.terms()) {
        const int k = std::popcount(w.x & w.z) & 3;
        for (std::uint64_t b = 0; b < dim; ++b) {
            const int kk = (k + 2 * (std::popcount(b & w.z) & 1)) & 3;
            out[static_cast<Eigen::Index>(b ^ w.x)] +=
                coeff * powers[kk] * in[static_cast<Eigen::Index>(b)];
        }
    }
    return out;
}

// In place |v> <- e^{iθP} |v> = cos θ |v> + i sin θ P|v>.
void apply_exponential_inplace(const PauliString& p, double theta, Vec& v, Vec& scratch) {
    apply_word_into(p.word(), p.phase_exponent(), v, scratch);
    v = std::cos(theta) * v + cd{0, std::sin(theta)} * scratch;
}

struct AnsatzProblem {
    const PauliSum* h = nullptr;
    const std::vector<PauliString>* generators = nullptr;
    std::uint64_t reference = 0;
    std::size_t dim = 0;

    double best_energy = std::numeric_limits<double>::infinity();
    std::vector<double> best_thetas;

    Vec reference_state() const {
        Vec v = Vec::Zero(static_cast<Eigen::Index>(dim));
        v[static_cast<Eigen::Index>(reference)] = cd{1, 0};
        return v;
    }

    // Energy, and the gradient via one forward and one adjoint sweep when
    // grad is non-null: dE/dθ_k = -2 Im <λ_{k+1}| P_k |φ_k>.
    double evaluate(const double* thetas, double* grad) {
        const auto& gens = *generators;
        const std::size_t m = gens.size();
        Vec phi = reference_state();
        Vec scratch(static_cast<Eigen::Index>(dim));
        for (std::size_t k = 0; k < m; ++k)
            apply_exponential_inplace(gens[k], thetas[k], phi, scratch);
        Vec lambda = apply_sum(*h, phi);
        const double energy = phi.dot(lambda).real();
        if (!std::isfinite(energy))
            throw std::runtime_error("optimize_parameters: non-finite energy");
        if (grad != nullptr) {
            for (std::size_t k = m; k-- > 0;) {
                apply_word_into(gens[k].word(), gens[k].phase_exponent(), phi, scratch);
                grad[k] = -2.0 * lambda.dot(scratch).imag();
                apply_exponential_inplace(gens[k], -thetas[k], phi, scratch);
                apply_exponential_inplace(gens[k], -thetas[k], lambda, scratch);
            }
        }
        if (energy < best_energy) {
            best_energy = energy;
            best_thetas.assign(thetas, thetas + m);
        }
        return energy;
    }
};

double gsl_f(const gsl_vector* x, void* params) {
    auto* prob = static_cast<AnsatzProblem*>(params);
    std::vector<double> thetas(x->size);
    for (std::size_t i = 0; i < x->size; ++i) thetas[i] = gsl_vector_get(x, i);
    return prob->evaluate(thetas.data(), nullptr);
}

void gsl_fdf(const gsl_vector* x, void* params, double* f, gsl_vector* g) {
    auto* prob = static_cast<AnsatzProblem*>(params);
    std::vector<double> thetas(x->size), grad(x->size);
    for (std::size_t i = 0; i < x->size; ++i) thetas[i] = gsl_vector_get(x, i);
    *f = prob->evaluate(thetas.data(), grad.data());
    for (std::size_t i = 0; i < x->size; ++i) gsl_vector_set(g, i, grad[i]);
}

void gsl_df(const gsl_vector* x, void* params, gsl_vector* g) {
    double f = 0.0;
    gsl_fdf(x, params, &f, g);
}

struct BfgsOutcome {
    std::size_t iterations = 0;
    bool converged = false;
};

BfgsOutcome run_bfgs(AnsatzProblem& prob, const std::vector<double>& start,
                     const OptimizerSettings& settings) {
    static std::once_flag handler_once;
    std::call_once(handler_once, [] { gsl_set_error_handler_off(); });

    const std::size_t m = start.size();
    gsl_multimin_function_fdf func;
    func.n = m;
    func.f = &gsl_f;
    func.df = &gsl_df;
    func.fdf = &gsl_fdf;
    func.params = &prob;

    gsl_vector* x = gsl_vector_alloc(m);
    for (std::size_t i = 0; i < m; ++i) gsl_vector_set(x, i, start[i]);
    gsl_multimin_fdfminimizer* minimizer =
        gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, m);
    gsl_multimin_fdfminimizer_set(minimizer, &func, x, settings.initial_step,
                                  settings.line_search_tolerance);

    const auto gradient_max = [&] {
        double gmax = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            gmax = std::max(gmax, std::abs(gsl_vector_get(minimizer->gradient, i)));
        return gmax;
    };

    BfgsOutcome outcome;
    outcome.converged = gradient_max() < settings.gradient_tolerance;
    while (!outcome.converged && outcome.iterations < settings.max_iterations) {
        const int status = gsl_multimin_fdfminimizer_iterate(minimizer);
        ++outcome.iterations;
        if (gradient_max() < settings.gradient_tolerance) {
            outcome.converged = true;
            break;
        }
        if (status != GSL_SUCCESS) break;  // no further progress possible
    }

    gsl_multimin_fdfminimizer_free(minimizer);
    gsl_vector_free(x);
    return outcome;
}

void validate_ansatz_inputs(const char* who, const PauliSum& h, std::uint64_t reference,
                            const std::vector<PauliString>& generators,
                            const std::vector<double>& thetas) {
    const std::size_t n = h.n_qubits();
    const auto fail = [&](const char* what) {
        throw std::invalid_argument(std::string(who) + ": " + what);
    };
    if (n == 0 || n > QuantumState::max_sim_qubits) fail("qubit count out of range");
    if (n < 64 && (reference >> n) != 0) fail("reference bits exceed qubit count");
    if (thetas.size() != generators.size()) fail("one angle per generator");
    for (const PauliString& p : generators) {
        if (p.n_qubits() != n) fail("generator qubit count mismatch");
        if (p.is_identity_word() || !p.is_hermitian())
            fail("generators must be Hermitian non-identity words");
    }
    for (const double t : thetas)
        if (!std::isfinite(t)) fail("angles must be finite");
}

}  // namespace

OperatorPool build_pool(std::size_t n_qubits) {
    if (n_qubits == 0) throw std::invalid_argument("build_pool: need at least one qubit");
    if (n_qubits > QuantumState::max_sim_qubits)
        throw std::invalid_argument("build_pool: qubit count exceeds simulator limit");

    std::vector<Word> words;
    std::vector<std::size_t> subset;
    const auto emit_assignments = [&](std::size_t support, bool allow_z) {
        // Letters per support qubit: X, Y, and optionally Z; keep odd Y counts.
        const std::size_t letters = allow_z ? 3 : 2;
        std::vector<std::size_t> choice(support, 0);
        while (true) {
            std::size_t y_count = 0;
            for (const std::size_t c : choice) y_count += c == 1;
            if (y_count % 2 == 1) {
                Word w;
                for (std::size_t i = 0; i < support; ++i) {
                    const std::uint64_t bit = std::uint64_t{1} << subset[i];
                    if (choice[i] == 0) w.x |= bit;        // X
                    else if (choice[i] == 1) {             // Y
                        w.x |= bit;
                        w.z |= bit;
                    } else w.z |= bit;                     // Z
                }
                words.push_back(w);
            }
            std::size_t pos = 0;
            while (pos < support && ++choice[pos] == letters) choice[pos++] = 0;
            if (pos == support) break;
        }
    };
    const auto enumerate = [&](auto&& self, std::size_t first, std::size_t remaining,
                               bool allow_z) -> void {
        if (remaining == 0) {
            emit_assignments(subset.size(), allow_z);
            return;
        }
        for (std::size_t q = first; q + remaining <= n_qubits; ++q) {
            subset.push_back(q);
            self(self, q + 1, remaining - 1, allow_z);
            subset.pop_back();
        }
    };
    for (std::size_t support = 1; support <= std::min<std::size_t>(4, n_qubits); ++support)
        enumerate(enumerate, 0, support, support <= 2);

    std::sort(words.begin(), words.end(), WordLess{n_qubits});
    OperatorPool pool;
    pool.origin = PoolOrigin::singles_doubles;
    pool.operators.reserve(words.size());
    for (const Word& w : words)
        pool.operators.push_back(PauliString::from_word(w, n_qubits));
    return pool;
}

double pool_score(const PauliSum& h, const PauliString& p, const QuantumState& state) {
    const PauliSum comm = commutator(h, p);
    if (comm.empty()) return 0.0;
    return expectation(state, comm);
}

OptimizeResult optimize_parameters(const PauliSum& h, std::uint64_t reference,
                                   const std::vector<PauliString>& generators,
                                   std::vector<double> initial_thetas,
                                   const OptimizerSettings& settings) {
    validate_ansatz_inputs("optimize_parameters", h, reference, generators, initial_thetas);

    AnsatzProblem prob;
    prob.h = &h;
    prob.generators = &generators;
    prob.reference = reference;
    prob.dim = std::size_t{1} << h.n_qubits();

    const double initial_energy = prob.evaluate(initial_thetas.data(), nullptr);
    if (generators.empty())
        return OptimizeResult{{}, initial_energy, 0, true};

    const BfgsOutcome base = run_bfgs(prob, initial_thetas, settings);
    OptimizeResult out;
    out.thetas = prob.best_thetas;
    out.energy = prob.best_energy;
    out.iterations = base.iterations;
    out.converged = base.converged;

    if (out.energy < initial_energy - 1e-12) return out;

    // No strict progress: the start may be a stationary non-minimum (a zero
    // gradient stalls quasi-Newton descent). Probe deterministically from
    // shifted starts and accept only strict improvement, so a converged
    // minimum passed back in is returned untouched.
    for (const double sign : {1.0, -1.0}) {
        AnsatzProblem probe = prob;
        probe.best_energy = std::numeric_limits<double>::infinity();
        probe.best_thetas.clear();
        std::vector<double> start = initial_thetas;
        for (double& t : start) t += sign * 0.25;
        const BfgsOutcome outcome = run_bfgs(probe, start, settings);
        out.iterations += outcome.iterations;
        if (probe.best_energy < out.energy - 1e-12) {
            out.thetas = probe.best_thetas;
            out.energy = probe.best_energy;
            out.converged = outcome.converged;
        }
    }
    return out;
}

EnergyGradient ansatz_energy_gradient(const PauliSum& h, std::uint64_t reference,
                                      const std::vector<PauliString>& generators,
                                      const std::vector<double>& thetas) {
    validate_ansatz_inputs("ansatz_energy_gradient", h, reference, generators, thetas);
    AnsatzProblem prob;
    prob.h = &h;
    prob.generators = &generators;
    prob.reference = reference;
    prob.dim = std::size_t{1} << h.n_qubits();
    EnergyGradient out;
    out.gradient.resize(generators.size());
    out.energy = prob.evaluate(thetas.data(), out.gradient.data());
    return out;
}

void AdaptConfig::validate() const {
    if (!(delta_f > 0.0)) throw std::invalid_argument("AdaptConfig: delta_f must be > 0");
    if (!(delta_c > 0.0)) throw std::invalid_argument("AdaptConfig: delta_c must be > 0");
    if (!(optimizer.gradient_tolerance > 0.0))
        throw std::invalid_argument("AdaptConfig: gradient tolerance must be > 0");
    if (hardware) {
        hardware->validate();
        bias.validate();
    }
}

std::string_view termination_name(AdaptTermination t) {
    switch (t) {
        case AdaptTermination::score_converged: return "score_converged";
        case AdaptTermination::energy_converged: return "energy_converged";
        case AdaptTermination::max_iterations: return "max_iterations";
    }
    throw std::logic_error("termination_name: unknown value");
}

namespace {

std::string graph_key(const CouplingGraph& g) {
    std::string key;
    for (const std::size_t u : g.nodes) {
        key += std::to_string(u);
        key += ',';
    }
    key += ';';
    for (const auto& [edge, weight] : g.edges) {
        key += std::to_string(edge.first);
        key += '-';
        key += std::to_string(edge.second);
        key += 'x';
        key += std::to_string(weight);
        key += ',';
    }
    return key;
}

}  // namespace

AdaptResult run_adapt(const LabeledHamiltonian& h, std::uint64_t reference,
                      const AdaptConfig& cfg) {
    cfg.validate();
    const std::size_t n = h.n_qubits;
    const PauliSum hsum = h.cover.reconstruct();
    const OperatorPool pool = build_pool(n);

    AdaptResult out;
    QuantumState state = QuantumState::basis(n, reference);
    out.reference_energy = expectation(state, hsum);
    out.energy = out.reference_energy;

    double previous_energy = 0.0;  // the loop's stand-in for E_0
    double delta_c = std::numeric_limits<double>::infinity();
    std::map<std::string, double> bias_memo;

    while (true) {
        if (out.generators.size() >= cfg.n_max) {
            out.termination = AdaptTermination::max_iterations;
            break;
        }
        if (delta_c <= cfg.delta_c) {
            out.termination = AdaptTermination::energy_converged;
            break;
        }

        CouplingGraph ansatz_graph;
        if (cfg.hardware)
            ansatz_graph = coupling_graph(compile_ansatz(n, reference, out.generators));

        std::size_t best_index = pool.operators.size();
        double best_abs = -1.0;
        for (std::size_t i = 0; i < pool.operators.size(); ++i) {
            const PauliString& p = pool.operators[i];
            double score = pool_score(hsum, p, state);
            if (cfg.hardware) {
                const CouplingGraph extended = extend_with_exponential(ansatz_graph, p);
                const std::string key = graph_key(extended);
                auto it = bias_memo.find(key);
                if (it == bias_memo.end())
                    it = bias_memo.emplace(key, isomorphism_bias(extended, *cfg.hardware,
                                                                 cfg.bias))
                             .first;
                score *= it->second;
            }
            if (std::abs(score) > best_abs) {
                best_abs = std::abs(score);
                best_index = i;
            }
        }
        if (best_abs <= cfg.delta_f) {
            out.termination = AdaptTermination::score_converged;
            break;
        }

        out.generators.push_back(pool.operators[best_index]);
        out.thetas.push_back(0.0);
        OptimizeResult opt;
        try {
            opt = optimize_parameters(hsum, reference, out.generators, out.thetas,
                                      cfg.optimizer);
        } catch (const std::runtime_error& e) {
            out.generators.pop_back();
            out.thetas.pop_back();
            out.ansatz = compile_ansatz(n, reference, out.generators);
            throw AdaptAbort(e.what(), std::move(out));
        }
        out.thetas = opt.thetas;
        if (!opt.converged) out.optimizer_warning = true;

        delta_c = std::abs(opt.energy - previous_energy);
        previous_energy = opt.energy;
        out.energy = opt.energy;

        state = QuantumState::basis(n, reference);
        for (std::size_t k = 0; k < out.generators.size(); ++k)
            state = apply_pauli_exponential(state, out.generators[k], out.thetas[k]);

        const Circuit compiled = compile_ansatz(n, reference, out.generators);
        out.trace.push_back(AdaptTraceRow{out.generators.size(),
                                          pool.operators[best_index], best_abs, opt.energy,
                                          delta_c, compiled.cnot_count()});
    }

    out.ansatz = compile_ansatz(n, reference, out.generators);
    return out;
}

AdaptAbort::AdaptAbort(const std::string& message, AdaptResult partial)
    : std::runtime_error(message), partial_(std::move(partial)) {}

std::uint64_t default_reference_for(double bond_length) {
    if (bond_length <= 1.2) return 0b11000;
    if (bond_length < 2.0) return 0b10000;
    return 0;
}

std::string trace_json_lines(const AdaptResult& result) {
    std::string lines;
    for (const AdaptTraceRow& row : result.trace) {
        nlohmann::json j;
        j["iteration"] = row.iteration;
        j["operator"] = row.op.to_string();
        j["score"] = row.score;
        j["energy"] = row.energy;
        j["energy_delta"] = row.energy_delta;
        j["cnot_count"] = row.cnot_count;
        lines += j.dump();
        lines += '\n';
    }
    return lines;
}

}  // namespace vqekit
