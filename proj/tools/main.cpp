// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: single-scenario solves, the rate sweeps, and an
// oracle invariant runner. Exit codes: 0 success, 1 bad input or I/O, 2
// solver failure or failed invariant suite.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "experiments.hpp"
#include "robustbeam/analytic.hpp"
#include "robustbeam/errors.hpp"
#include "robustbeam/oracle.hpp"
#include "robustbeam/rng.hpp"
#include "robustbeam/socp.hpp"

namespace rb = robustbeam;
using nlohmann::json;

namespace {

const char* tag_name(rb::CaseTag tag) {
    switch (tag) {
    case rb::CaseTag::PowerOnly:
        return "PowerOnly";
    case rb::CaseTag::InterferenceOnly:
        return "InterferenceOnly";
    case rb::CaseTag::BothActive:
        return "BothActive";
    }
    return "?";
}

rb::Vec parse_complex_list(const json& arr, int n, const char* field) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != n) {
        throw std::invalid_argument(std::string(field) + ": expected " + std::to_string(n) +
                                    " [re, im] pairs");
    }
    rb::Vec out(n);
    for (int i = 0; i < n; ++i) {
        const json& pair = arr[static_cast<std::size_t>(i)];
        if (!pair.is_array() || pair.size() != 2) {
            throw std::invalid_argument(std::string(field) + ": entries must be [re, im]");
        }
        out(i) = rb::Cplx(pair[0].get<double>(), pair[1].get<double>());
    }
    return out;
}

rb::Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open scenario file: " + path);
    }
    json j = json::parse(in);
    const int n = j.at("n").get<int>();
    if (n < 1) {
        throw std::invalid_argument("scenario: n must be >= 1");
    }
    rb::Scenario sc;
    sc.hs = parse_complex_list(j.at("hs"), n, "hs");
    sc.uncertainty.h0 = parse_complex_list(j.at("h0"), n, "h0");
    const rb::Vec flat = parse_complex_list(j.at("R"), n * n, "R");
    rb::Mat r(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            r(i, k) = flat(i * n + k);
        }
    }
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
        throw std::invalid_argument("scenario: R is not Hermitian");
    }
    sc.uncertainty.r = 0.5 * (r + rb::Mat(r.adjoint()));
    sc.uncertainty.epsilon = j.at("epsilon").get<double>();
    if (sc.uncertainty.epsilon < 0.0) {
        throw std::invalid_argument("scenario: epsilon must be >= 0");
    }
    sc.p_bar = rb::db_to_linear(j.at("p_bar_db").get<double>());
    sc.p_t = rb::db_to_linear(j.at("p_t_db").get<double>());
    return sc;
}

// Axis spec: either a single value or start:stop:step (step > 0, stop
// inclusive up to rounding).
std::vector<double> parse_axis(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    auto to_double = [&](const std::string& s) {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) {
            throw std::invalid_argument("bad axis value: " + spec);
        }
        return v;
    };
    if (parts.size() == 1) {
        return {to_double(parts[0])};
    }
    if (parts.size() != 3) {
        throw std::invalid_argument("axis must be a value or start:stop:step: " + spec);
    }
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const double step = to_double(parts[2]);
    if (!(step > 0.0) || stop < start) {
        throw std::invalid_argument("axis range needs stop >= start and step > 0: " + spec);
    }
    std::vector<double> values;
    for (double v = start; v <= stop + 1e-9 * step; v += step) {
        values.push_back(v);
    }
    return values;
}

rb::Method parse_method(const std::string& name) {
    static const std::map<std::string, rb::Method> table = {
        {"analytic", rb::Method::Analytic},
        {"socp", rb::Method::Socp},
        {"oracle", rb::Method::Oracle},
        {"all", rb::Method::All},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        throw std::invalid_argument("unknown method: " + name);
    }
    return it->second;
}

rb::CovMode parse_cov_mode(const std::string& name) {
    if (name == "isotropic") {
        return rb::CovMode::Isotropic;
    }
    if (name == "wishart") {
        return rb::CovMode::RandomWishart;
    }
    throw std::invalid_argument("unknown covariance mode: " + name);
}

void print_solution(const char* name, const rb::BeamSolution& sol) {
    std::printf("%s: rate_bits=%.12g p=%.12g worst_interference=%.12g case=%s\n", name,
                rb::nats_to_bits(sol.rate), sol.p, sol.worst_interference, tag_name(sol.case_tag));
}

int run_solve(const std::string& path, rb::Method method) {
    const rb::Scenario sc = load_scenario(path);
    bool any_failed = false;
    if (method == rb::Method::Analytic || method == rb::Method::All) {
        try {
            print_solution("analytic", rb::solve_p1(sc));
        } catch (const rb::Error& e) {
            std::printf("analytic: failed (%s)\n", e.what());
            any_failed = true;
        }
    }
    if (method == rb::Method::Socp || method == rb::Method::All) {
        const rb::SolverReport rep = rb::solve_socp(rb::build_socp(sc));
        if (rep.status == rb::SolveStatus::Optimal) {
            print_solution("socp", rb::recover_solution(rep, sc));
        } else {
            std::printf("socp: failed (solver did not reach optimality)\n");
            any_failed = true;
        }
    }
    if (method == rb::Method::Oracle || method == rb::Method::All) {
        print_solution("oracle", rb::grid_oracle(sc, rb::OracleConfig{}));
    }
    return any_failed ? 2 : 0;
}

int emit_sweep(const rb::SweepResult& result, const std::string& out_path) {
    if (result.failed_trials > 0) {
        std::fprintf(stderr, "note: %d method-trial solves produced no answer and were excluded\n",
                     result.failed_trials);
    }
    const std::string csv = rb::to_csv(result);
    if (out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::fprintf(stderr, "cannot open output file: %s\n", out_path.c_str());
        return 1;
    }
    out << csv;
    return out.good() ? 0 : 1;
}

struct OracleCheckStats {
    int cases = 0;
    int sandwich_violations = 0;
    int feasibility_violations = 0;
    int plane_violations = 0;
    int dominance_violations = 0;
    double worst_sandwich = 0.0;  // nats beyond the band
    double worst_plane = 0.0;     // nats the full-space search wins by
};

int run_oracle_check(std::uint64_t seed, int cases, const std::string& cov, int n, int beta_steps,
                     int dirs, int mc_samples) {
    OracleCheckStats stats;
    stats.cases = cases;
    for (int i = 0; i < cases; ++i) {
        rb::ExperimentConfig cfg;
        cfg.n_antennas = n;
        cfg.seed = seed;
        if (cov == "mixed") {
            cfg.cov_mode = i % 2 == 0 ? rb::CovMode::Isotropic : rb::CovMode::RandomWishart;
        } else {
            cfg.cov_mode = parse_cov_mode(cov);
        }
        const rb::Scenario sc = rb::gen_scenario(cfg, i);

        rb::OracleConfig ocfg;
        ocfg.beta_steps = beta_steps;
        ocfg.random_dirs = dirs;
        ocfg.mc_samples = mc_samples;
        ocfg.seed = rb::derive_seed(seed, static_cast<std::uint64_t>(i));

        const rb::BeamSolution grid = rb::grid_oracle(sc, ocfg);
        const rb::BeamSolution full = rb::full_space_search(sc, ocfg);

        // Suite 1: analytic and cone-program rates inside the grid band.
        const double band = 1e-6;
        double overshoot = 0.0;
        bool sandwich_ok = true;
        try {
            const rb::BeamSolution ana = rb::solve_p1(sc);
            overshoot = std::max(overshoot, std::abs(ana.rate - grid.rate) - band);
            sandwich_ok = std::abs(ana.rate - grid.rate) <= band;
        } catch (const rb::Error&) {
            sandwich_ok = false;
        }
        const rb::SolverReport rep = rb::solve_socp(rb::build_socp(sc));
        if (rep.status == rb::SolveStatus::Optimal) {
            const rb::BeamSolution cone = rb::recover_solution(rep, sc);
            overshoot = std::max(overshoot, std::abs(cone.rate - grid.rate) - band);
            sandwich_ok = sandwich_ok && std::abs(cone.rate - grid.rate) <= band;
        } else {
            sandwich_ok = false;
        }
        if (!sandwich_ok) {
            ++stats.sandwich_violations;
            stats.worst_sandwich = std::max(stats.worst_sandwich, overshoot);
        }

        // Suite 2: oracle outputs must themselves be feasible.
        const double feas_tol = 1e-8;
        for (const rb::BeamSolution* sol : {&grid, &full}) {
            const rb::FeasibilityReport fr = rb::check_feasible(*sol, sc, feas_tol);
            if (fr.power_slack < -feas_tol || fr.interference_slack < -feas_tol) {
                ++stats.feasibility_violations;
                break;
            }
        }

        // Suite 3: leaving the two-dimensional plane must not help.
        if (full.rate > grid.rate + band) {
            ++stats.plane_violations;
            stats.worst_plane = std::max(stats.worst_plane, full.rate - grid.rate);
        }

        // Suite 4: closed-form worst case dominates sampled interference.
        const double sampled =
            rb::mc_worst_interference_samples(grid.p, grid.v, sc.uncertainty, ocfg);
        const double closed = rb::worst_case_interference(grid.p, grid.v, sc.uncertainty);
        if (closed < sampled - 1e-10 * std::max(1.0, sampled)) {
            ++stats.dominance_violations;
        }
    }

    std::printf("sandwich: %d/%d inside +-1e-6 nats of grid (worst overshoot %.3g nats)\n",
                stats.cases - stats.sandwich_violations, stats.cases, stats.worst_sandwich);
    std::printf("oracle feasibility: %d/%d feasible at 1e-8\n",
                stats.cases - stats.feasibility_violations, stats.cases);
    std::printf("plane restriction: %d/%d not beaten by full-space search (worst win %.3g "
                "nats)\n",
                stats.cases - stats.plane_violations, stats.cases, stats.worst_plane);
    std::printf("interference dominance: %d/%d closed form >= sampled max\n",
                stats.cases - stats.dominance_violations, stats.cases);
    const bool all_pass = stats.sandwich_violations == 0 && stats.feasibility_violations == 0 &&
                          stats.plane_violations == 0 && stats.dominance_violations == 0;
    std::printf("oracle-check: %s\n", all_pass ? "PASS" : "FAIL");
    return all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust cognitive beamforming: solvers, sweeps, and oracles"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string method_name = "all";
    auto* solve = app.add_subcommand("solve", "solve one scenario file");
    solve->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    solve->add_option("--method", method_name, "analytic|socp|oracle|all");

    // Shared sweep flags, registered per subcommand.
    struct SweepFlags {
        int n = 3;
        double l_ratio = 2.0;
        double pt_db = 0.0;
        double pbar_db = 5.0;
        std::string pbar_axis;
        std::string l_axis;
        double epsilon = 0.2;
        double sigma = 1.0;
        double ple = 4.0;
        int trials = 500;
        std::uint64_t seed = 1;
        std::string method = "all";
        std::string cov_mode;
        std::string out;
    };
    SweepFlags pbar_flags;
    SweepFlags dist_flags;
    SweepFlags con_flags;

    auto add_common = [](CLI::App* cmd, SweepFlags& f, const char* default_cov) {
        f.cov_mode = default_cov;
        cmd->add_option("--n", f.n, "antenna count");
        cmd->add_option("--pt-db", f.pt_db, "interference cap in dB");
        cmd->add_option("--epsilon", f.epsilon, "uncertainty radius");
        cmd->add_option("--sigma", f.sigma, "isotropic covariance scale");
        cmd->add_option("--ple", f.ple, "path loss exponent");
        cmd->add_option("--trials", f.trials, "channel draws per axis point");
        cmd->add_option("--seed", f.seed, "base seed");
        cmd->add_option("--method", f.method, "analytic|socp|oracle|all");
        cmd->add_option("--cov-mode", f.cov_mode, "isotropic|wishart");
        cmd->add_option("--out", f.out, "CSV output path (default stdout)");
    };

    auto* sweep_pbar_cmd = app.add_subcommand("sweep-pbar", "mean rate versus transmit budget");
    add_common(sweep_pbar_cmd, pbar_flags, "isotropic");
    sweep_pbar_cmd->add_option("--l-ratio", pbar_flags.l_ratio, "distance ratio");
    sweep_pbar_cmd->add_option("--pbar-db", pbar_flags.pbar_axis, "budget axis, dB start:stop:step")
        ->required();

    auto* sweep_dist_cmd = app.add_subcommand("sweep-distance", "mean rate versus distance ratio");
    add_common(sweep_dist_cmd, dist_flags, "wishart");
    sweep_dist_cmd->add_option("--pbar-db", dist_flags.pbar_db, "transmit budget in dB");
    sweep_dist_cmd->add_option("--l-ratio", dist_flags.l_axis, "distance axis, start:stop:step")
        ->required();

    auto* sweep_con_cmd = app.add_subcommand(
        "sweep-constraints", "single-constraint reference curves versus both constraints");
    add_common(sweep_con_cmd, con_flags, "wishart");
    sweep_con_cmd->add_option("--l-ratio", con_flags.l_ratio, "distance ratio");
    sweep_con_cmd->add_option("--pbar-db", con_flags.pbar_axis, "budget axis, dB start:stop:step")
        ->required();

    std::uint64_t check_seed = 7;
    int check_cases = 200;
    std::string check_cov = "mixed";
    int check_n = 3;
    int check_beta_steps = 100000;
    int check_dirs = 10000;
    int check_samples = 10000;
    auto* check_cmd = app.add_subcommand("oracle-check", "run the oracle invariant suites");
    check_cmd->add_option("--seed", check_seed, "base seed");
    check_cmd->add_option("--cases", check_cases, "number of random scenarios");
    check_cmd->add_option("--cov-mode", check_cov, "isotropic|wishart|mixed");
    check_cmd->add_option("--n", check_n, "antenna count");
    check_cmd->add_option("--beta-steps", check_beta_steps, "grid resolution");
    check_cmd->add_option("--dirs", check_dirs, "full-space directions");
    check_cmd->add_option("--mc-samples", check_samples, "interference samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*solve) {
            return run_solve(scenario_path, parse_method(method_name));
        }
        auto to_config = [](const SweepFlags& f) {
            rb::ExperimentConfig cfg;
            cfg.n_antennas = f.n;
            cfg.p_bar_db = f.pbar_db;
            cfg.p_t_db = f.pt_db;
            cfg.epsilon = f.epsilon;
            cfg.l_ratio = f.l_ratio;
            cfg.path_loss_exponent = f.ple;
            cfg.sigma = f.sigma;
            cfg.trials = f.trials;
            cfg.seed = f.seed;
            cfg.method = parse_method(f.method);
            cfg.cov_mode = parse_cov_mode(f.cov_mode);
            return cfg;
        };
        if (*sweep_pbar_cmd) {
            return emit_sweep(rb::sweep_pbar(to_config(pbar_flags),
                                             parse_axis(pbar_flags.pbar_axis)),
                              pbar_flags.out);
        }
        if (*sweep_dist_cmd) {
            return emit_sweep(rb::sweep_distance(to_config(dist_flags),
                                                 parse_axis(dist_flags.l_axis)),
                              dist_flags.out);
        }
        if (*sweep_con_cmd) {
            return emit_sweep(rb::sweep_constraints(to_config(con_flags),
                                                    parse_axis(con_flags.pbar_axis)),
                              con_flags.out);
        }
        if (*check_cmd) {
            if (check_cases < 1) {
                throw std::invalid_argument("--cases must be >= 1");
            }
            return run_oracle_check(check_seed, check_cases, check_cov, check_n, check_beta_steps,
                                    check_dirs, check_samples);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const rb::Error& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
