// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustbeam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "robustbeam/errors.hpp"
#include "robustbeam/rng.hpp"

namespace robustbeam {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_counts(const OracleConfig& cfg) {
    if (cfg.beta_steps < 1 || cfg.power_steps < 1 || cfg.random_dirs < 1 || cfg.mc_samples < 1) {
        throw std::invalid_argument("OracleConfig counts must all be >= 1");
    }
}

CaseTag classify_tag(double p, double worst, const Scenario& sc) {
    const bool power_tight = std::abs(p - sc.p_bar) <= 1e-9 * sc.p_bar;
    const bool intf_tight = std::abs(worst - sc.p_t) <= 1e-9 * sc.p_t;
    if (power_tight) {
        return intf_tight ? CaseTag::BothActive : CaseTag::PowerOnly;
    }
    return CaseTag::InterferenceOnly;
}

// Golden-section maximization; assumes the bracket encloses one peak. The
// callers seed it with the winning grid cell, so a misshaped bracket can
// only cost polish accuracy, never the grid incumbent.
template <typename F>
double golden_max(double lo, double hi, F&& objective) {
    const double inv_phi = 0.61803398874989484820;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

BeamSolution grid_oracle(const Scenario& sc, const OracleConfig& cfg) {
    check_counts(cfg);
    const UncertaintyModel& m = sc.uncertainty;
    const Vec aligned = phase_align(sc.hs, m.h0);
    const TwoDimBasis basis = two_dim_basis(m.h0, aligned);
    const double a = basis.a_hs;
    const double b = basis.b_hs;
    const double h0n = m.h0.norm();

    // v(beta) stays in a fixed plane, so the quadratic form v^H R v reduces
    // to three precomputed scalars.
    const Vec r_h = m.r * basis.h_hat;
    const Vec r_p = m.r * basis.h_perp_hat;
    const double rh = basis.h_hat.dot(r_h).real();
    const double rxr = basis.h_hat.dot(r_p).real();
    const double rp = basis.h_perp_hat.dot(r_p).real();

    struct Point {
        double p = 0.0;
        double obj = -1.0;
    };
    auto eval = [&](double beta) {
        const double cb = std::cos(beta);
        const double sb = std::sin(beta);
        const double q = std::max(0.0, cb * cb * rh + 2.0 * cb * sb * rxr + sb * sb * rp);
        const double c = h0n * cb + std::sqrt(m.epsilon * q);
        const double csq = c * c;
        Point pt;
        pt.p = csq > 0.0 ? std::min(sc.p_bar, sc.p_t / csq) : sc.p_bar;
        const double sig = a * cb + b * sb;
        pt.obj = pt.p * sig * sig;
        return pt;
    };

    const double span = kPi / 2.0 - basis.alpha;
    double best_beta = basis.alpha;
    Point best = eval(best_beta);
    for (int k = 1; k <= cfg.beta_steps; ++k) {
        const double beta = basis.alpha + span * static_cast<double>(k) / cfg.beta_steps;
        const Point pt = eval(beta);
        if (pt.obj > best.obj) {
            best = pt;
            best_beta = beta;
        }
    }

    // The closed-form power makes the objective piecewise smooth with a
    // kink where the binding constraint switches; a grid alone is only
    // first-order accurate there, so polish inside the winning cell.
    const double cell = span / cfg.beta_steps;
    if (cell > 0.0) {
        const double lo = std::max(basis.alpha, best_beta - cell);
        const double hi = std::min(kPi / 2.0, best_beta + cell);
        const double polished = golden_max(lo, hi, [&](double beta) { return eval(beta).obj; });
        if (eval(polished).obj > best.obj) {
            best = eval(polished);
            best_beta = polished;
        }
    }

    BeamSolution sol;
    sol.p = best.p;
    sol.v = std::cos(best_beta) * basis.h_hat + std::sin(best_beta) * basis.h_perp_hat;
    sol.v /= sol.v.norm();
    sol.rate = rate_of(sol.p, sol.v, sc.hs);
    sol.worst_interference = worst_case_interference(sol.p, sol.v, m);
    sol.case_tag = classify_tag(sol.p, sol.worst_interference, sc);
    return sol;
}

BeamSolution grid_oracle_mc(const Scenario& sc, const OracleConfig& cfg) {
    check_counts(cfg);
    const UncertaintyModel& m = sc.uncertainty;
    const Vec aligned = phase_align(sc.hs, m.h0);
    const TwoDimBasis basis = two_dim_basis(m.h0, aligned);
    const double a = basis.a_hs;
    const double b = basis.b_hs;

    // One fixed boundary sample set shared by every grid cell. Each sample
    // collapses to two scalars against the plane basis, making the inner
    // maximization O(1) per (sample, beta) pair.
    const std::vector<Vec> samples = sample_ellipsoid(m, cfg.seed, cfg.mc_samples, true);
    std::vector<Cplx> along_h(samples.size());
    std::vector<Cplx> along_p(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        along_h[i] = samples[i].dot(basis.h_hat);
        along_p[i] = samples[i].dot(basis.h_perp_hat);
    }

    const double span = kPi / 2.0 - basis.alpha;
    double best_obj = -1.0;
    double best_beta = basis.alpha;
    double best_p = 0.0;
    double best_intf_unit = 0.0;
    for (int k = 0; k <= cfg.beta_steps; ++k) {
        const double beta = basis.alpha + span * static_cast<double>(k) / cfg.beta_steps;
        const double cb = std::cos(beta);
        const double sb = std::sin(beta);
        double intf_unit = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            intf_unit = std::max(intf_unit, std::norm(cb * along_h[i] + sb * along_p[i]));
        }
        // Largest grid power whose estimated interference stays under cap.
        double p = 0.0;
        for (int j = cfg.power_steps; j >= 0; --j) {
            const double cand = sc.p_bar * static_cast<double>(j) / cfg.power_steps;
            if (cand * intf_unit <= sc.p_t) {
                p = cand;
                break;
            }
        }
        const double sig = a * cb + b * sb;
        const double obj = p * sig * sig;
        if (obj > best_obj) {
            best_obj = obj;
            best_beta = beta;
            best_p = p;
            best_intf_unit = intf_unit;
        }
    }

    BeamSolution sol;
    sol.p = best_p;
    sol.v = std::cos(best_beta) * basis.h_hat + std::sin(best_beta) * basis.h_perp_hat;
    sol.v /= sol.v.norm();
    sol.rate = rate_of(sol.p, sol.v, sc.hs);
    sol.worst_interference = best_p * best_intf_unit;
    sol.case_tag = classify_tag(sol.p, sol.worst_interference, sc);
    return sol;
}

BeamSolution best_for_direction(const Scenario& sc, const Vec& v) {
    const double vn = v.norm();
    if (!(vn > 0.0)) {
        throw std::invalid_argument("best_for_direction: zero direction");
    }
    const Vec unit = v / vn;
    const UncertaintyModel& m = sc.uncertainty;
    const double quad = std::max(0.0, unit.dot(m.r * unit).real());
    const double c = std::abs(m.h0.dot(unit)) + std::sqrt(m.epsilon * quad);
    const double csq = c * c;

    BeamSolution sol;
    sol.p = csq > 0.0 ? std::min(sc.p_bar, sc.p_t / csq) : sc.p_bar;
    sol.v = unit;
    sol.rate = rate_of(sol.p, sol.v, sc.hs);
    sol.worst_interference = worst_case_interference(sol.p, sol.v, m);
    sol.case_tag = classify_tag(sol.p, sol.worst_interference, sc);
    return sol;
}

BeamSolution full_space_search(const Scenario& sc, const OracleConfig& cfg) {
    check_counts(cfg);
    const Eigen::Index n = sc.hs.size();
    if (n > 6) {
        throw DimensionTooLarge("full_space_search: refusing dimensions above 6");
    }
    Rng rng(cfg.seed);
    BeamSolution best;
    best.rate = -1.0;
    for (int d = 0; d < cfg.random_dirs; ++d) {
        Vec u(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            u(i) = rng.complex_gaussian();
        }
        const double norm = u.norm();
        if (!(norm > 0.0)) {
            continue;
        }
        BeamSolution cand = best_for_direction(sc, u / norm);
        if (cand.rate > best.rate) {
            best = std::move(cand);
        }
    }
    return best;
}

double mc_worst_interference_samples(double p, const Vec& v, const UncertaintyModel& m,
                                     const OracleConfig& cfg) {
    if (p < 0.0) {
        throw std::invalid_argument("mc_worst_interference: negative power");
    }
    const std::vector<Vec> samples = sample_ellipsoid(m, cfg.seed, cfg.mc_samples, true);
    double worst = 0.0;
    for (const Vec& h : samples) {
        worst = std::max(worst, p * std::norm(h.dot(v)));
    }
    return worst;
}

double mc_worst_interference(double p, const Vec& v, const UncertaintyModel& m,
                             const OracleConfig& cfg) {
    const double from_samples = mc_worst_interference_samples(p, v, m, cfg);
    const Vec h_max = worst_case_channel(v, m);
    return std::max(from_samples, p * std::norm(h_max.dot(v)));
}

BeamSolution perfect_csi_reference(const Scenario& sc, const Vec& h_fixed) {
    if (!(h_fixed.norm() > kLinTol)) {
        throw std::invalid_argument("perfect_csi_reference: h_fixed is zero");
    }
    const Vec aligned = phase_align(sc.hs, h_fixed);
    const TwoDimBasis basis = two_dim_basis(h_fixed, aligned);
    const double a = basis.a_hs;
    const double b = basis.b_hs;
    const double hf2 = h_fixed.squaredNorm();

    struct Point {
        double p = 0.0;
        double obj = -1.0;
    };
    auto evaluate = [&](double beta) {
        const double cb = std::cos(beta);
        const double sb = std::sin(beta);
        const double denom = hf2 * cb * cb;
        Point pt;
        pt.p = denom > 1e-300 ? std::min(sc.p_bar, sc.p_t / denom) : sc.p_bar;
        const double sig = a * cb + b * sb;
        pt.obj = pt.p * sig * sig;
        return pt;
    };

    const double span = kPi / 2.0 - basis.alpha;
    const int steps = 20000;
    double best_beta = basis.alpha;
    Point best = evaluate(best_beta);
    for (int k = 1; k <= steps; ++k) {
        const double beta = basis.alpha + span * static_cast<double>(k) / steps;
        const Point pt = evaluate(beta);
        if (pt.obj > best.obj) {
            best = pt;
            best_beta = beta;
        }
    }

    // Golden-section polish inside the winning cell's neighborhood.
    const double cell = span / steps;
    if (cell > 0.0) {
        const double lo = std::max(basis.alpha, best_beta - cell);
        const double hi = std::min(kPi / 2.0, best_beta + cell);
        const double polished =
            golden_max(lo, hi, [&](double beta) { return evaluate(beta).obj; });
        if (evaluate(polished).obj > best.obj) {
            best = evaluate(polished);
            best_beta = polished;
        }
    }

    BeamSolution sol;
    sol.p = best.p;
    sol.v = std::cos(best_beta) * basis.h_hat + std::sin(best_beta) * basis.h_perp_hat;
    sol.v /= sol.v.norm();
    sol.rate = rate_of(sol.p, sol.v, sc.hs);
    sol.worst_interference = sol.p * std::norm(h_fixed.dot(sol.v));
    sol.case_tag = classify_tag(sol.p, sol.worst_interference, sc);
    return sol;
}

} // namespace robustbeam
