// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0
//
// Problem-instance data model, worst-case interference machinery over the
// ellipsoidal channel-uncertainty set, feasibility checks, and rate
// evaluation.

#pragma once

#include <cstdint>
#include <vector>

#include "robustbeam/linalg.hpp"

namespace robustbeam {

// Ellipsoidal uncertainty set for the transmitter-to-protected-receiver
// channel: H = { h : (h - h0)^H R^{-1} (h - h0) <= epsilon } with mean h0,
// positive-definite shape R, and radius parameter epsilon > 0.
struct UncertaintyModel {
    Vec h0;
    Mat r;
    double epsilon = 0.0;
};

// A full problem instance: direct channel hs, the uncertainty set, the
// transmit power budget p_bar, and the interference cap p_t (both linear
// scale, relative to unit noise power).
struct Scenario {
    Vec hs;
    UncertaintyModel uncertainty;
    double p_bar = 0.0;
    double p_t = 0.0;
};

// Which constraints hold with equality at the returned solution.
enum class CaseTag {
    PowerOnly,
    InterferenceOnly,
    BothActive,
};

// Rank-1 transmit solution S = p * v v^H: power p, unit direction v, the
// achieved rate log(1 + p |hs^H v|^2) in nats, and the worst-case
// interference over the uncertainty set.
struct BeamSolution {
    double p = 0.0;
    Vec v;
    double rate = 0.0;
    CaseTag case_tag = CaseTag::PowerOnly;
    double worst_interference = 0.0;
};

struct FeasibilityReport {
    bool power_ok = false;
    bool interference_ok = false;
    // Signed relative margins: 1 - p/p_bar and 1 - worst/p_t.
    double power_slack = 0.0;
    double interference_slack = 0.0;
};

// Achieved rate log(1 + p |hs^H v|^2) in nats. Requires p >= 0 and unit v.
double rate_of(double p, const Vec& v, const Vec& hs);

// The ellipsoid member maximizing |h^H v|:
//   h_max = h0 + sqrt(epsilon / (v^H R v)) * phase * R v,
// where phase = v^H h0 / |v^H h0| (set to 1 when v^H h0 = 0; any unit
// phase attains the same maximum value then). Scale-invariant in v.
Vec worst_case_channel(const Vec& v, const UncertaintyModel& m);

// Worst-case interference p * (|h0^H v| + sqrt(epsilon * v^H R v))^2 for a
// unit direction v; equals p * |h_max^H v|^2 at the worst-case channel.
double worst_case_interference(double p, const Vec& v, const UncertaintyModel& m);

// Re-evaluates both constraints of a solution against a scenario with a
// relative tolerance band.
FeasibilityReport check_feasible(const BeamSolution& sol, const Scenario& sc, double tol);

// Deterministic sampler of the uncertainty set: boundary=true places every
// sample exactly on the ellipsoid surface, otherwise samples are uniform
// in the solid ellipsoid. Throws SingularCovariance for a degenerate R.
std::vector<Vec> sample_ellipsoid(const UncertaintyModel& m, std::uint64_t seed, int count,
                                  bool boundary);

} // namespace robustbeam
