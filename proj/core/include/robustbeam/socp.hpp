// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0
//
// Real-valued second-order cone reformulation of the robust beamforming
// problem and a self-contained primal log-barrier solver for it.

#pragma once

#include <string>
#include <vector>

#include "robustbeam/channel.hpp"

namespace robustbeam {

// One second-order cone block ||A x + b|| <= d^T x + e. A block with zero
// rows in A encodes the linear inequality 0 <= d^T x + e (used when
// epsilon = 0 collapses a cone).
struct SocpCone {
    RealMat a;
    RealVec b;
    RealVec d;
    double e = 0.0;
};

// Linear equality g^T x = value.
struct SocpEq {
    RealVec g;
    double value = 0.0;
};

// A conic program: maximize c^T x subject to the cone blocks and the
// equality rows. The standard aligned instance has exactly 3 cone blocks
// (norm budget plus the two interference cones) and 1 equality row (the
// phase-alignment constraint); the phase-free variant built by
// build_socp_phase_free has 3 cones, no equality, and one extra variable.
struct SocpData {
    RealVec c;
    std::vector<SocpCone> cones;
    std::vector<SocpEq> eq_rows;
    int dim = 0;
};

enum class SolveStatus {
    Optimal,
    MaxIterations,
    NumericalFailure,
};

struct SolverReport {
    RealVec x_opt;
    double objective = 0.0;
    int iterations = 0;      // total Newton steps across the barrier path
    double duality_gap = 0.0;
    SolveStatus status = SolveStatus::NumericalFailure;
    // Gap bound recorded after each outer (centering) stage; strictly
    // decreasing along the barrier path. Diagnostic, not part of the
    // stable interface.
    std::vector<double> gap_history;
};

struct SolverOptions {
    // Both tolerances are relative to the problem scale ||c|| * e of the
    // norm-budget cone (sqrt(p_bar) * ||hs|| for built instances).
    double tol_gap = 1e-8;
    double tol_feas = 1e-9;
    int max_iter = 500;
};

// Cone program over x = [Re w; Im w] with hs phase-aligned to h0 inside
// the builder: maximize Re(hs^H w) subject to ||w|| <= sqrt(p_bar), the
// two interference cones sqrt(eps)||Q w|| +- Re(h0^H w) <= sqrt(p_t), and
// the alignment equality Im(w^H h0) = 0. This transcribes the worst-case
// interference bound |h0^H w| + sqrt(eps)||Q w|| under the restriction
// that h0^H w is real at the optimum. Throws SingularCovariance.
SocpData build_socp(const Scenario& sc);

// Phase-free variant over x = [Re w; Im w; t']: maximize Re(hs^H w)
// subject to ||w|| <= sqrt(p_bar), |h0^H w| <= t (a 2-row cone over the
// real and imaginary parts), and sqrt(eps)||Q w|| <= sqrt(p_t) - t, with
// t = t' + sqrt(p_t)/2 shifted so the origin is strictly interior. Its
// feasible set is invariant under rotating w by a unit phase, so
// maximizing Re(hs^H w) equals maximizing |hs^H w|: this formulation
// carries no phase restriction and bounds the aligned form from above.
SocpData build_socp_phase_free(const Scenario& sc);

// Primal log-barrier method: equalities are eliminated by a null-space
// projection, each centering stage runs damped Newton with backtracking
// (Armijo 0.25, halving), and the barrier parameter starts at 1 and grows
// tenfold per stage until the gap bound meets tol_gap. Deterministic for
// identical inputs.
SolverReport solve_socp(const SocpData& data, const SolverOptions& opts = {});

// Maps an optimal report back to a beam: w from the leading 2N entries of
// x, p = ||w||^2, v = w/||w||. The case tag classifies which constraints
// are numerically tight (1e-6 relative band); unlike the analytic chain's
// tags it is a diagnostic label, not a structural guarantee. Throws
// NotOptimal unless the report status is Optimal.
BeamSolution recover_solution(const SolverReport& report, const Scenario& sc);

// Relative stationarity residual of the KKT condition at x: distance from
// c to the cone of nonnegative combinations of active-constraint
// gradients (plus the equality row with free multiplier), divided by
// ||c||. Active constraints are detected at active_slack relative slack.
// Test support.
double kkt_stationarity_residual(const SocpData& data, const RealVec& x, double active_slack);

// One cone per line, fixed field order. Debugging aid, not a stable
// format.
std::string dump_socp(const SocpData& data);

} // namespace robustbeam
