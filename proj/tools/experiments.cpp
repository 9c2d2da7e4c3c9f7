// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "robustbeam/analytic.hpp"
#include "robustbeam/errors.hpp"
#include "robustbeam/oracle.hpp"
#include "robustbeam/rng.hpp"
#include "robustbeam/socp.hpp"

namespace robustbeam {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRecheckTol = 1e-6; // relative slack floor before a rate is emitted
constexpr double kLn2 = 0.69314718055994530942;

struct MethodSample {
    double rate_nats = kNaN;
    bool ok = false;
};

// One doubly constrained trial solved by up to three methods.
struct TrialOutcome {
    MethodSample analytic;
    MethodSample socp;
    MethodSample oracle;
};

// One trial of the constraint-comparison sweep.
struct ConstraintOutcome {
    MethodSample power_only;
    MethodSample intf_only;
    MethodSample both_analytic;
    MethodSample both_socp;
    MethodSample oracle;
};

bool recheck(const BeamSolution& sol, const Scenario& sc) {
    const FeasibilityReport rep = check_feasible(sol, sc, kRecheckTol);
    return rep.power_slack >= -kRecheckTol && rep.interference_slack >= -kRecheckTol;
}

// Static strided partition over trial indices; fn(i) must only write state
// owned by trial i.
template <typename Fn>
void run_parallel(int count, Fn&& fn) {
    const int workers = std::max(1, std::min(thread_budget(), count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&fn, t, count, workers] {
            for (int i = t; i < count; i += workers) {
                fn(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

MethodSample score_solution(const BeamSolution& sol, const Scenario& sc) {
    MethodSample s;
    s.rate_nats = sol.rate;
    s.ok = recheck(sol, sc);
    return s;
}

TrialOutcome run_standard_trial(const ExperimentConfig& cfg, int trial, bool want_analytic,
                                bool want_socp, bool want_oracle) {
    const Scenario sc = gen_scenario(cfg, trial);
    TrialOutcome out;
    if (want_analytic) {
        try {
            out.analytic = score_solution(solve_p1(sc), sc);
        } catch (const Error&) {
            // No analytic answer for this trial (typically: the root scan
            // of the doubly constrained stage found no sign change).
        }
    }
    if (want_socp) {
        try {
            const SolverReport rep = solve_socp(build_socp(sc));
            if (rep.status == SolveStatus::Optimal) {
                out.socp = score_solution(recover_solution(rep, sc), sc);
            }
        } catch (const Error&) {
        }
    }
    if (want_oracle) {
        OracleConfig ocfg;
        ocfg.seed = cfg.seed;
        out.oracle = score_solution(grid_oracle(sc, ocfg), sc);
    }
    return out;
}

struct Agg {
    double mean_bits = kNaN;
    double std_bits = kNaN;
    int count = 0;
};

Agg aggregate_bits(const std::vector<double>& nats) {
    Agg a;
    a.count = static_cast<int>(nats.size());
    if (a.count == 0) {
        return a;
    }
    double sum = 0.0;
    for (const double r : nats) {
        sum += nats_to_bits(r);
    }
    a.mean_bits = sum / a.count;
    double sq = 0.0;
    for (const double r : nats) {
        const double d = nats_to_bits(r) - a.mean_bits;
        sq += d * d;
    }
    a.std_bits = std::sqrt(sq / a.count);
    return a;
}

// Mean of (oracle - method) in bits over trials where both produced a rate.
double mean_gap(const std::vector<TrialOutcome>& outs, MethodSample TrialOutcome::*method) {
    double sum = 0.0;
    int n = 0;
    for (const auto& o : outs) {
        const MethodSample& m = o.*method;
        if (m.ok && o.oracle.ok) {
            sum += nats_to_bits(o.oracle.rate_nats) - nats_to_bits(m.rate_nats);
            ++n;
        }
    }
    return n > 0 ? sum / n : kNaN;
}

SweepRow make_row(double axis, const char* name, const std::vector<TrialOutcome>& outs,
                  MethodSample TrialOutcome::*method, double gap, std::uint64_t seed) {
    std::vector<double> rates;
    rates.reserve(outs.size());
    for (const auto& o : outs) {
        if ((o.*method).ok) {
            rates.push_back((o.*method).rate_nats);
        }
    }
    const Agg agg = aggregate_bits(rates);
    SweepRow row;
    row.axis = axis;
    row.method = name;
    row.mean_rate_bits = agg.mean_bits;
    row.std_rate_bits = agg.std_bits;
    row.mean_gap_to_oracle = gap;
    row.trials = agg.count;
    row.seed = seed;
    row.feasible_count = agg.count;
    return row;
}

SweepResult run_standard_sweep(const ExperimentConfig& cfg, const std::vector<double>& axis_values,
                               double ExperimentConfig::*axis_field) {
    validate(cfg);
    if (axis_values.empty()) {
        throw std::invalid_argument("sweep: empty axis");
    }
    const auto start = std::chrono::steady_clock::now();
    const bool want_analytic = cfg.method == Method::Analytic || cfg.method == Method::All;
    const bool want_socp = cfg.method == Method::Socp || cfg.method == Method::All;
    const bool want_oracle = cfg.method == Method::Oracle || cfg.method == Method::All;

    SweepResult result;
    for (const double axis : axis_values) {
        ExperimentConfig point = cfg;
        point.*axis_field = axis;
        std::vector<TrialOutcome> outs(static_cast<std::size_t>(cfg.trials));
        run_parallel(cfg.trials, [&](int i) {
            outs[static_cast<std::size_t>(i)] =
                run_standard_trial(point, i, want_analytic, want_socp, want_oracle);
        });
        if (want_analytic) {
            result.rows.push_back(make_row(axis, "analytic", outs, &TrialOutcome::analytic,
                                           want_oracle ? mean_gap(outs, &TrialOutcome::analytic)
                                                       : kNaN,
                                           cfg.seed));
        }
        if (want_socp) {
            result.rows.push_back(make_row(axis, "socp", outs, &TrialOutcome::socp,
                                           want_oracle ? mean_gap(outs, &TrialOutcome::socp)
                                                       : kNaN,
                                           cfg.seed));
        }
        if (want_oracle) {
            result.rows.push_back(
                make_row(axis, "oracle", outs, &TrialOutcome::oracle, 0.0, cfg.seed));
        }
        for (auto it = result.rows.end() - (want_analytic + want_socp + want_oracle);
             it != result.rows.end(); ++it) {
            result.failed_trials += cfg.trials - it->trials;
        }
    }
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace

void validate(const ExperimentConfig& cfg) {
    if (cfg.n_antennas < 1) {
        throw std::invalid_argument("n_antennas must be >= 1");
    }
    if (cfg.trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    if (!(cfg.path_loss_exponent > 0.0)) {
        throw std::invalid_argument("path_loss_exponent must be > 0");
    }
    if (!(cfg.l_ratio >= 1.0)) {
        throw std::invalid_argument("l_ratio must be >= 1");
    }
    if (!(cfg.epsilon >= 0.0)) {
        throw std::invalid_argument("epsilon must be >= 0");
    }
    if (cfg.cov_mode == CovMode::Isotropic && !(cfg.sigma > 0.0)) {
        throw std::invalid_argument("sigma must be > 0 in isotropic mode");
    }
}

double db_to_linear(double db) {
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear) {
    return 10.0 * std::log10(linear);
}

double nats_to_bits(double nats) {
    return nats / kLn2;
}

Scenario gen_scenario(const ExperimentConfig& cfg, int trial_index) {
    validate(cfg);
    if (trial_index < 0) {
        throw std::invalid_argument("trial_index must be >= 0");
    }
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial_index)));
    const int n = cfg.n_antennas;
    Vec hs(n);
    for (int i = 0; i < n; ++i) {
        hs(i) = rng.complex_gaussian();
    }
    const double scale = std::pow(cfg.l_ratio, -cfg.path_loss_exponent / 2.0);
    Vec h0(n);
    for (int i = 0; i < n; ++i) {
        h0(i) = scale * rng.complex_gaussian();
    }
    Mat r;
    if (cfg.cov_mode == CovMode::Isotropic) {
        r = cfg.sigma * cfg.sigma * Mat::Identity(n, n);
    } else {
        // Wishart draw: a square factor with unit-variance real and
        // imaginary parts per entry, conjugate-squared and symmetrized.
        Mat factor(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                factor(i, j) = Cplx(rng.gaussian(), rng.gaussian());
            }
        }
        const Mat w = factor.adjoint() * factor;
        r = 0.5 * (w + w.adjoint());
    }
    Scenario sc;
    sc.hs = std::move(hs);
    sc.uncertainty.h0 = std::move(h0);
    sc.uncertainty.r = std::move(r);
    sc.uncertainty.epsilon = cfg.epsilon;
    sc.p_bar = db_to_linear(cfg.p_bar_db);
    sc.p_t = db_to_linear(cfg.p_t_db);
    return sc;
}

SweepResult sweep_pbar(const ExperimentConfig& cfg, const std::vector<double>& pbar_db_values) {
    return run_standard_sweep(cfg, pbar_db_values, &ExperimentConfig::p_bar_db);
}

SweepResult sweep_distance(const ExperimentConfig& cfg, const std::vector<double>& l_values) {
    for (const double l : l_values) {
        if (!(l >= 1.0)) {
            throw std::invalid_argument("sweep_distance: l values must be >= 1");
        }
    }
    return run_standard_sweep(cfg, l_values, &ExperimentConfig::l_ratio);
}

SweepResult sweep_constraints(const ExperimentConfig& cfg,
                              const std::vector<double>& pbar_db_values) {
    validate(cfg);
    if (pbar_db_values.empty()) {
        throw std::invalid_argument("sweep: empty axis");
    }
    const auto start = std::chrono::steady_clock::now();
    const bool want_analytic = cfg.method == Method::Analytic || cfg.method == Method::All;
    const bool want_socp = cfg.method == Method::Socp || cfg.method == Method::All;
    const bool want_oracle = cfg.method == Method::Oracle || cfg.method == Method::All;

    SweepResult result;
    for (const double axis : pbar_db_values) {
        ExperimentConfig point = cfg;
        point.p_bar_db = axis;
        std::vector<ConstraintOutcome> outs(static_cast<std::size_t>(cfg.trials));
        run_parallel(cfg.trials, [&](int idx) {
            ConstraintOutcome& o = outs[static_cast<std::size_t>(idx)];
            const Scenario sc = gen_scenario(point, idx);
            if (want_analytic) {
                // Budget as the only constraint: matched beam at full power.
                o.power_only.rate_nats = std::log1p(sc.p_bar * sc.hs.squaredNorm());
                o.power_only.ok = true;
                try {
                    // Cap as the only constraint, exact in the whitened
                    // domain; skip the power re-check since this curve has
                    // no budget.
                    const BeamSolution s = solve_interference_only(whiten_problem(sc));
                    const double worst = worst_case_interference(s.p, s.v, sc.uncertainty);
                    o.intf_only.rate_nats = s.rate;
                    o.intf_only.ok = worst <= sc.p_t * (1.0 + kRecheckTol);
                } catch (const Error&) {
                }
                try {
                    o.both_analytic = score_solution(solve_p1(sc), sc);
                } catch (const Error&) {
                }
            }
            if (want_socp) {
                try {
                    const SolverReport rep = solve_socp(build_socp(sc));
                    if (rep.status == SolveStatus::Optimal) {
                        o.both_socp = score_solution(recover_solution(rep, sc), sc);
                    }
                } catch (const Error&) {
                }
            }
            if (want_oracle) {
                OracleConfig ocfg;
                ocfg.seed = cfg.seed;
                o.oracle = score_solution(grid_oracle(sc, ocfg), sc);
            }
        });

        auto push = [&](const char* name, MethodSample ConstraintOutcome::*method, bool with_gap) {
            std::vector<double> rates;
            double gap_sum = 0.0;
            int gap_n = 0;
            for (const auto& o : outs) {
                if ((o.*method).ok) {
                    rates.push_back((o.*method).rate_nats);
                    if (with_gap && o.oracle.ok) {
                        gap_sum +=
                            nats_to_bits(o.oracle.rate_nats) - nats_to_bits((o.*method).rate_nats);
                        ++gap_n;
                    }
                }
            }
            const Agg agg = aggregate_bits(rates);
            SweepRow row;
            row.axis = axis;
            row.method = name;
            row.mean_rate_bits = agg.mean_bits;
            row.std_rate_bits = agg.std_bits;
            row.mean_gap_to_oracle = gap_n > 0 ? gap_sum / gap_n : kNaN;
            row.trials = agg.count;
            row.seed = cfg.seed;
            row.feasible_count = agg.count;
            result.rows.push_back(std::move(row));
            result.failed_trials += cfg.trials - agg.count;
        };
        if (want_analytic) {
            push("power-only", &ConstraintOutcome::power_only, false);
            push("interference-only", &ConstraintOutcome::intf_only, false);
            push("both-analytic", &ConstraintOutcome::both_analytic, want_oracle);
        }
        if (want_socp) {
            push("both-socp", &ConstraintOutcome::both_socp, want_oracle);
        }
        if (want_oracle) {
            push("oracle", &ConstraintOutcome::oracle, true);
        }
    }
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string to_csv(const SweepResult& result) {
    std::string out = "axis,method,mean_rate_bits,std_rate_bits,mean_gap_to_oracle,trials,seed\n";
    char buf[256];
    for (const auto& row : result.rows) {
        std::snprintf(buf, sizeof buf, "%.12g,%s,%.12g,%.12g,%.12g,%d,%llu\n", row.axis,
                      row.method.c_str(), row.mean_rate_bits, row.std_rate_bits,
                      row.mean_gap_to_oracle, row.trials,
                      static_cast<unsigned long long>(row.seed));
        out += buf;
    }
    return out;
}

int thread_budget() {
    const char* env = std::getenv("ROBUST_BEAM_THREADS");
    if (env == nullptr || *env == '\0') {
        return std::max(1u, std::thread::hardware_concurrency());
    }
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 0) {
        throw std::invalid_argument("ROBUST_BEAM_THREADS must be a nonnegative integer");
    }
    if (value == 0) {
        return std::max(1u, std::thread::hardware_concurrency());
    }
    return static_cast<int>(std::min<long>(value, 256));
}

} // namespace robustbeam
