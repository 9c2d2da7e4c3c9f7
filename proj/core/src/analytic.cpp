// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustbeam/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace robustbeam {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Relative slack for routing comparisons (which regime applies). Distinct
// from the looser feasibility band kFeasTol: routing wants to be as close
// to the exact mathematical comparison as floating point allows.
constexpr double kRouteSlack = 1e-12;

// Realizes the in-plane beam v = cos(beta) h_hat + sin(beta) h_perp_hat
// and assembles a BeamSolution. The signal amplitude uses the basis
// coordinates of hs: |hs^H v| = a cos(beta) + b sin(beta) (nonnegative on
// beta in [0, pi/2] since a, b >= 0).
BeamSolution beam_from_beta(double beta, double p, const TwoDimBasis& basis, CaseTag tag,
                            double worst) {
    BeamSolution sol;
    const double cb = std::cos(beta);
    const double sb = std::sin(beta);
    sol.v = cb * basis.h_hat + sb * basis.h_perp_hat;
    sol.p = p;
    const double signal = basis.a_hs * cb + basis.b_hs * sb;
    sol.rate = std::log1p(p * signal * signal);
    sol.case_tag = tag;
    sol.worst_interference = worst;
    return sol;
}

TwoDimBasis synthetic_basis(const MeanFeedbackInstance& inst) {
    TwoDimBasis basis;
    basis.h_hat = Vec::Zero(2);
    basis.h_hat(0) = 1.0;
    basis.h_perp_hat = Vec::Zero(2);
    basis.h_perp_hat(1) = 1.0;
    basis.alpha = inst.alpha;
    basis.a_hs = inst.hs_norm * std::cos(inst.alpha);
    basis.b_hs = inst.hs_norm * std::sin(inst.alpha);
    return basis;
}

// Squared norm of Delta^{1/2} (cos(beta) h_hat + sin(beta) h_perp_hat) as
// a quadratic form in (cos, sin); the three coefficients are precomputed
// once so each evaluation is O(1).
struct PlaneQuadratic {
    double hh = 0.0; // ||D^{1/2} h_hat||^2
    double pp = 0.0; // ||D^{1/2} h_perp_hat||^2
    double hp = 0.0; // Re((D^{1/2} h_hat)^H (D^{1/2} h_perp_hat))

    double eval(double cb, double sb) const {
        return cb * cb * hh + 2.0 * cb * sb * hp + sb * sb * pp;
    }
};

PlaneQuadratic plane_quadratic(const RealVec& delta, const TwoDimBasis& basis) {
    const Vec dh = delta.cwiseSqrt().asDiagonal() * basis.h_hat;
    const Vec dp = delta.cwiseSqrt().asDiagonal() * basis.h_perp_hat;
    PlaneQuadratic q;
    q.hh = dh.squaredNorm();
    q.pp = dp.squaredNorm();
    q.hp = dh.dot(dp).real();
    return q;
}

// Back-maps a whitened unit direction v_bar into the original domain:
// v = U^H Delta^{1/2} v_bar, returned unnormalized together with its norm
// (which equals ||Delta^{1/2} v_bar|| because U is unitary).
std::pair<Vec, double> back_map(const WhitenedInstance& w, const Vec& v_bar) {
    Vec v = w.u.adjoint() * (w.delta.cwiseSqrt().asDiagonal() * v_bar);
    return {v, v.norm()};
}

struct RootCandidate {
    double beta = 0.0;
    double objective = 0.0;
};

} // namespace

BeamSolution solve_sp1(const Scenario& sc) {
    const double n = sc.hs.norm();
    if (n < kLinTol) {
        throw ZeroChannel("solve_sp1: direct channel is numerically zero");
    }
    BeamSolution sol;
    sol.v = sc.hs / n;
    sol.p = sc.p_bar;
    sol.rate = std::log1p(sc.p_bar * n * n);
    sol.case_tag = CaseTag::PowerOnly;
    sol.worst_interference = worst_case_interference(sol.p, sol.v, sc.uncertainty);
    return sol;
}

double f_beta(double beta, const MeanFeedbackInstance& inst) {
    const double diff = std::cos(beta - inst.alpha);
    const double denom = inst.h0_norm * std::cos(beta) + std::sqrt(inst.epsilon) * inst.sigma;
    return inst.hs_norm * inst.hs_norm * inst.p_t * diff * diff / (denom * denom);
}

BeamSolution solve_sp2_mean(const MeanFeedbackInstance& inst, const TwoDimBasis& basis) {
    const double se = std::sqrt(inst.epsilon) * inst.sigma;
    // Candidates in ascending order; a strict-greater comparison then
    // resolves exact ties toward the smallest beta.
    std::vector<double> candidates;
    candidates.push_back(inst.alpha);
    const double sine_arg = inst.h0_norm * std::sin(inst.alpha) / se;
    if (sine_arg <= 1.0) {
        const double beta1 = std::asin(sine_arg) + inst.alpha;
        if (beta1 <= 0.5 * kPi) {
            candidates.push_back(beta1);
        }
    }
    candidates.push_back(0.5 * kPi);
    std::sort(candidates.begin(), candidates.end());

    double best_beta = candidates.front();
    double best_val = f_beta(best_beta, inst);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double val = f_beta(candidates[i], inst);
        if (val > best_val) {
            best_val = val;
            best_beta = candidates[i];
        }
    }

    const double denom = inst.h0_norm * std::cos(best_beta) + se;
    const double p = inst.p_t / (denom * denom);
    const double worst = p * denom * denom; // the cap, met with equality
    return beam_from_beta(best_beta, p, basis, CaseTag::InterferenceOnly, worst);
}

BeamSolution solve_sp2_mean(const MeanFeedbackInstance& inst) {
    return solve_sp2_mean(inst, synthetic_basis(inst));
}

BeamSolution solve_both_active_mean(const MeanFeedbackInstance& inst, const TwoDimBasis& basis) {
    const double se = std::sqrt(inst.epsilon) * inst.sigma;
    const double arg = (std::sqrt(inst.p_t / inst.p_bar) - se) / inst.h0_norm;
    const double cos_alpha = std::cos(inst.alpha);
    if (arg < -1e-8 || arg > cos_alpha + 1e-8) {
        throw InfeasibleGeometry("solve_both_active_mean: arccos argument outside [0, cos(alpha)]");
    }
    const double clamped = std::min(std::max(arg, 0.0), cos_alpha);
    const double beta = std::acos(clamped);
    const double amp = inst.h0_norm * std::cos(beta) + se;
    const double worst = inst.p_bar * amp * amp;
    return beam_from_beta(beta, inst.p_bar, basis, CaseTag::BothActive, worst);
}

BeamSolution solve_both_active_mean(const MeanFeedbackInstance& inst) {
    return solve_both_active_mean(inst, synthetic_basis(inst));
}

BeamSolution solve_p3(const MeanFeedbackInstance& inst, const Scenario& sc) {
    BeamSolution sp1 = solve_sp1(sc);
    if (sp1.worst_interference <= sc.p_t * (1.0 + kRouteSlack)) {
        return sp1;
    }
    const Vec hs_aligned = phase_align(sc.hs, sc.uncertainty.h0);
    const TwoDimBasis basis = two_dim_basis(sc.uncertainty.h0, hs_aligned);
    BeamSolution sp2 = solve_sp2_mean(inst, basis);
    if (sp2.p <= sc.p_bar * (1.0 + kRouteSlack)) {
        return sp2;
    }
    return solve_both_active_mean(inst, basis);
}

WhitenedInstance whiten_problem(const Scenario& sc) {
    const Mat& r = sc.uncertainty.r;
    const Eigen::Index n = r.rows();
    const EigenPair ep = hermitian_eig(r); // r = U_r^H gamma U_r, gamma descending
    if (ep.delta(n - 1) < kPdTol) {
        throw SingularCovariance("whiten_problem: covariance eigenvalue below kPdTol");
    }

    // R^{-1} = U^H Delta U with Delta_i = 1/gamma_{n-1-i} kept descending;
    // U is U_r with rows reversed to match the reordering.
    WhitenedInstance w;
    w.delta = RealVec(n);
    w.u = Mat(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        w.delta(i) = 1.0 / ep.delta(n - 1 - i);
        w.u.row(i) = ep.u.row(n - 1 - i);
    }

    const Mat transform = w.delta.cwiseSqrt().asDiagonal() * w.u;
    w.h0_bar = transform * sc.uncertainty.h0;
    w.hs_bar = phase_align(transform * sc.hs, w.h0_bar);
    w.basis = two_dim_basis(w.h0_bar, w.hs_bar);
    w.epsilon = sc.uncertainty.epsilon;
    w.p_bar = sc.p_bar;
    w.p_t = sc.p_t;
    return w;
}

BeamSolution solve_interference_only(const WhitenedInstance& w) {
    // In whitened coordinates the uncertainty set is a unit-shape ball of
    // radius parameter epsilon, which is exactly the isotropic geometry
    // with sigma = 1; the plane solver applies verbatim.
    MeanFeedbackInstance inst;
    inst.h0_norm = w.h0_bar.norm();
    inst.hs_norm = w.hs_bar.norm();
    inst.alpha = w.basis.alpha;
    inst.sigma = 1.0;
    inst.epsilon = w.epsilon;
    inst.p_bar = w.p_bar;
    inst.p_t = w.p_t;
    const BeamSolution bar = solve_sp2_mean(inst, w.basis);

    // Map back. With whitened power q on the unit direction v_bar, the
    // original transmit power is q ||Delta^{1/2} v_bar||^2, while the rate
    // and the worst-case interference are invariant under the transform.
    auto [v_raw, norm] = back_map(w, bar.v);
    BeamSolution sol;
    sol.v = v_raw / norm;
    sol.p = bar.p * norm * norm;
    sol.rate = bar.rate;
    sol.case_tag = CaseTag::InterferenceOnly;
    sol.worst_interference = bar.worst_interference;
    return sol;
}

BeamSolution solve_both_active_general(const WhitenedInstance& w) {
    const double alpha = w.basis.alpha;
    const double hi = 0.5 * kPi;
    const double h0n = w.h0_bar.norm();
    const double sqrt_eps = std::sqrt(w.epsilon);
    const double ratio = std::sqrt(w.p_t / w.p_bar);
    const PlaneQuadratic quad = plane_quadratic(w.delta, w.basis);

    const auto g = [&](double beta) {
        const double cb = std::cos(beta);
        const double sb = std::sin(beta);
        return ratio * std::sqrt(quad.eval(cb, sb)) - (cb * h0n + sqrt_eps);
    };

    // Bracket by scanning, then bisect each sign change and polish with a
    // few secant steps so the root residual reaches rounding level.
    constexpr int kScanIntervals = 256;
    constexpr double kBisectWidth = 1e-12;
    std::vector<RootCandidate> roots;
    const auto refine = [&](double lo, double hi_end, double glo, double ghi) {
        while (hi_end - lo > kBisectWidth) {
            const double mid = 0.5 * (lo + hi_end);
            const double gm = g(mid);
            if (gm == 0.0) {
                lo = hi_end = mid;
                break;
            }
            if ((glo < 0.0) != (gm < 0.0)) {
                hi_end = mid;
                ghi = gm;
            } else {
                lo = mid;
                glo = gm;
            }
        }
        double root = 0.5 * (lo + hi_end);
        double x0 = lo, x1 = hi_end, f0 = glo, f1 = ghi;
        for (int it = 0; it < 8 && f1 != f0; ++it) {
            const double next = x1 - f1 * (x1 - x0) / (f1 - f0);
            if (!(next >= alpha && next <= hi)) {
                break;
            }
            x0 = x1;
            f0 = f1;
            x1 = next;
            f1 = g(next);
            root = next;
            if (f1 == 0.0) {
                break;
            }
        }
        return root;
    };

    double prev_x = alpha;
    double prev_g = g(prev_x);
    for (int k = 1; k <= kScanIntervals; ++k) {
        const double x = alpha + (hi - alpha) * static_cast<double>(k) / kScanIntervals;
        const double gx = g(x);
        if (prev_g == 0.0) {
            roots.push_back({prev_x, 0.0});
        } else if ((prev_g < 0.0) != (gx < 0.0)) {
            roots.push_back({refine(prev_x, x, prev_g, gx), 0.0});
        }
        prev_x = x;
        prev_g = gx;
    }
    if (prev_g == 0.0) {
        roots.push_back({prev_x, 0.0});
    }
    if (roots.empty()) {
        throw NoRoot("solve_both_active_general: no root in [alpha, pi/2]");
    }

    // Objective along the constraint surface: with both constraints tight
    // the rate is log(1 + p_bar ||hs_bar||^2 cos^2(beta - alpha) / nv^2)
    // where nv = ||Delta^{1/2} v_bar(beta)||; maximizing the fraction
    // suffices. Ties pick the smallest beta; the scan emits candidates in
    // ascending order already.
    const double hsn2 = w.hs_bar.squaredNorm();
    RootCandidate best{0.0, -1.0};
    for (auto& cand : roots) {
        const double cb = std::cos(cand.beta);
        const double sb = std::sin(cand.beta);
        const double diff = std::cos(cand.beta - alpha);
        cand.objective = hsn2 * diff * diff / quad.eval(cb, sb);
        if (cand.objective > best.objective) {
            best = cand;
        }
    }

    const double cb = std::cos(best.beta);
    const double sb = std::sin(best.beta);
    Vec v_bar = cb * w.basis.h_hat + sb * w.basis.h_perp_hat;
    auto [v_raw, norm] = back_map(w, v_bar);

    BeamSolution sol;
    sol.v = v_raw / norm;
    sol.p = w.p_bar;
    sol.rate = std::log1p(w.p_bar * best.objective);
    sol.case_tag = CaseTag::BothActive;
    // At a root, (cos(beta) ||h0_bar|| + sqrt(eps))^2 = (p_t/p_bar) nv^2,
    // so this evaluates to p_t up to the root residual.
    const double amp = cb * h0n + sqrt_eps;
    sol.worst_interference = w.p_bar * amp * amp / (norm * norm);
    return sol;
}

BeamSolution solve_p1(const Scenario& sc) {
    if (sc.uncertainty.h0.norm() < kLinTol) {
        throw ZeroMeanChannel("solve_p1: mean channel is numerically zero");
    }
    if (is_isotropic(sc.uncertainty.r)) {
        const Eigen::Index n = sc.uncertainty.r.rows();
        const double sigma =
            std::sqrt(sc.uncertainty.r.trace().real() / static_cast<double>(n));
        const Vec hs_aligned = phase_align(sc.hs, sc.uncertainty.h0);
        const TwoDimBasis basis = two_dim_basis(sc.uncertainty.h0, hs_aligned);
        MeanFeedbackInstance inst;
        inst.h0_norm = sc.uncertainty.h0.norm();
        inst.hs_norm = sc.hs.norm();
        inst.alpha = basis.alpha;
        inst.sigma = sigma;
        inst.epsilon = sc.uncertainty.epsilon;
        inst.p_bar = sc.p_bar;
        inst.p_t = sc.p_t;
        return solve_p3(inst, sc);
    }
    return solve_p1_general(sc);
}

BeamSolution solve_p1_general(const Scenario& sc) {
    if (sc.uncertainty.h0.norm() < kLinTol) {
        throw ZeroMeanChannel("solve_p1_general: mean channel is numerically zero");
    }
    BeamSolution sp1 = solve_sp1(sc);
    if (sp1.worst_interference <= sc.p_t * (1.0 + kRouteSlack)) {
        return sp1;
    }
    const WhitenedInstance w = whiten_problem(sc);
    BeamSolution intf = solve_interference_only(w);
    if (intf.p <= sc.p_bar * (1.0 + kRouteSlack)) {
        return intf;
    }
    return solve_both_active_general(w);
}

} // namespace robustbeam
