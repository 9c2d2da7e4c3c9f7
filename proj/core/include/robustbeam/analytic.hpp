// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0
//
// Closed-form solution chain. The full problem routes through three
// regimes (power-only, interference-only, both constraints active); the
// isotropic-covariance case has fully closed-form answers, the general
// case whitens the ellipsoid into a ball and reuses the same plane
// geometry plus a one-dimensional root search.

#pragma once

#include "robustbeam/channel.hpp"

namespace robustbeam {

// Scalar geometry of the isotropic (R = sigma^2 I) case. Everything the
// plane solvers need: channel norms, the angle alpha between hs and h0,
// the isotropic spread sigma, and the problem constants.
struct MeanFeedbackInstance {
    double h0_norm = 0.0;
    double hs_norm = 0.0;
    double alpha = 0.0;
    double sigma = 0.0;
    double epsilon = 0.0;
    double p_bar = 0.0;
    double p_t = 0.0;
};

// Whitened problem data: with R^{-1} = U^H Delta U the substitution
// h_bar = Delta^{1/2} U h turns the uncertainty ellipsoid into the ball
// ||h_bar - h0_bar||^2 <= epsilon. hs_bar is stored phase-aligned to
// h0_bar, and basis spans (h0_bar, hs_bar) in the whitened coordinates.
struct WhitenedInstance {
    Vec hs_bar;
    Vec h0_bar;
    RealVec delta;
    Mat u;
    TwoDimBasis basis;
    double epsilon = 0.0;
    double p_bar = 0.0;
    double p_t = 0.0;
};

// Power-budget-only optimum: full power on the matched beam hs/||hs||.
// Throws ZeroChannel when ||hs|| < kLinTol.
BeamSolution solve_sp1(const Scenario& sc);

// Interference-capped rate along the in-plane direction at angle beta,
//   f(beta) = ||hs||^2 p_t cos^2(beta - alpha)
//             / (||h0|| cos(beta) + sqrt(epsilon) sigma)^2,
// i.e. p(beta) |hs^H v(beta)|^2 at the power that meets the cap with
// equality. Domain beta in [alpha, pi/2].
double f_beta(double beta, const MeanFeedbackInstance& inst);

// Interference-only optimum for the isotropic case: the maximizer of
// f over [alpha, pi/2] is one of { alpha, pi/2, beta1 } where
// beta1 = asin(||h0|| sin(alpha) / (sqrt(epsilon) sigma)) + alpha, admitted
// only when the arcsine argument is <= 1 and beta1 <= pi/2. Exact ties
// pick the smallest beta. The returned solution realizes the beam in the
// supplied basis and meets the cap with equality.
BeamSolution solve_sp2_mean(const MeanFeedbackInstance& inst, const TwoDimBasis& basis);

// Convenience overload realizing the beam in a synthetic two-antenna
// basis (h_hat = e0, h_perp_hat = e1); used when only the scalar geometry
// exists, e.g. in direct unit tests of the plane solvers.
BeamSolution solve_sp2_mean(const MeanFeedbackInstance& inst);

// Both-constraints-tight optimum for the isotropic case:
// beta_opt = arccos((sqrt(p_t/p_bar) - sqrt(epsilon) sigma) / ||h0||),
// p = p_bar. Throws InfeasibleGeometry when the arccos argument falls
// outside [0, cos(alpha)] by more than 1e-8; the routing only enters this
// branch when a both-active solution exists, so that indicates a bug
// upstream rather than difficult input.
BeamSolution solve_both_active_mean(const MeanFeedbackInstance& inst, const TwoDimBasis& basis);

// Synthetic-basis overload, as for solve_sp2_mean.
BeamSolution solve_both_active_mean(const MeanFeedbackInstance& inst);

// Isotropic-covariance solver: tries the power-only solution, then the
// interference-only solution, then the both-active closed form. inst must
// describe sc (same norms, angle, sigma and constants); solve_p1 builds
// it that way.
BeamSolution solve_p3(const MeanFeedbackInstance& inst, const Scenario& sc);

// Whitens a general-covariance scenario. Throws SingularCovariance.
WhitenedInstance whiten_problem(const Scenario& sc);

// Interference-only optimum for general covariance: the plane solver runs
// in whitened coordinates (where the ball geometry is exact for this
// regime) and the beam maps back through v = U^H Delta^{1/2} v_bar. The
// returned power is unconstrained by the budget; callers check it.
BeamSolution solve_interference_only(const WhitenedInstance& w);

// Both-constraints-tight step for general covariance: scans
// g(beta) = sqrt(p_t/p_bar) ||Delta^{1/2} v_bar(beta)|| -
//           (cos(beta) ||h0_bar|| + sqrt(epsilon))
// over [alpha_bar, pi/2] at 256 intervals, bisects each sign change, and
// keeps the root with the highest objective (smallest beta on ties). At a
// root, both the power budget and the interference cap hold with
// equality. Throws NoRoot when no sign change exists in the bracket; that
// is a real regime for anisotropic covariance, not an internal failure.
BeamSolution solve_both_active_general(const WhitenedInstance& w);

// Full solver: isotropic inputs dispatch to solve_p3, everything else
// runs the whitened chain. Throws ZeroMeanChannel / ZeroChannel for
// degenerate channels and propagates NoRoot from the both-active step.
BeamSolution solve_p1(const Scenario& sc);

// The general-covariance chain without the isotropic shortcut; exposed so
// tests can verify that the whitened path reproduces the closed-form
// isotropic answers.
BeamSolution solve_p1_general(const Scenario& sc);

} // namespace robustbeam
