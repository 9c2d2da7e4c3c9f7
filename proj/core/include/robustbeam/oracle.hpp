// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force reference solvers used to verify the fast paths: a dense
// angular grid over the two-dimensional plane spanned by the mean channel
// and the secondary channel, a random search over the full complex unit
// sphere, Monte-Carlo maximization of the interference over the channel
// ellipsoid, and a perfect-CSI reference for the zero-uncertainty limit.

#pragma once

#include <cstdint>

#include "robustbeam/channel.hpp"
#include "robustbeam/linalg.hpp"

namespace robustbeam {

struct OracleConfig {
    int beta_steps = 100000;  // angular grid intervals over [alpha, pi/2]
    int power_steps = 64;     // power grid (validation mode only)
    int random_dirs = 10000;  // directions for the full-space search
    int mc_samples = 100000;  // ellipsoid samples for interference checks
    std::uint64_t seed = 1;
};

// Dense grid over beams v(beta) = cos(beta) h_hat + sin(beta) h_perp_hat,
// beta in [alpha, pi/2] inclusive. Per beta the transmit power is the
// closed-form min(p_bar, p_t / worst_unit_interference); ties between grid
// cells keep the lowest beta. Resolution in beta is at most
// pi / (2 beta_steps).
BeamSolution grid_oracle(const Scenario& sc, const OracleConfig& cfg);

// Validation twin of grid_oracle that never touches the closed-form
// worst-case channel: interference per direction is estimated as the max
// over one fixed set of mc_samples boundary samples, and power comes from
// a descending grid of power_steps points instead of the closed form.
// Because the sample max understates the true worst case, the returned
// beam can overshoot the interference cap by the Monte-Carlo gap; compare
// rates against this oracle at matching coarse tolerances.
BeamSolution grid_oracle_mc(const Scenario& sc, const OracleConfig& cfg);

// Best beam among random_dirs isotropically random unit directions, each
// given its closed-form optimal power. Checks that leaving the 2-D plane
// never helps. Dimensions above 6 are refused (cost guard).
BeamSolution full_space_search(const Scenario& sc, const OracleConfig& cfg);

// Closed-form optimal power and resulting solution for one fixed unit
// direction. This is the single-direction building block of
// full_space_search, exposed so callers can score externally chosen beams.
BeamSolution best_for_direction(const Scenario& sc, const Vec& v);

// Max of p |h^H v|^2 over mc_samples boundary samples of the ellipsoid,
// with the analytic worst-case channel included as one more candidate.
double mc_worst_interference(double p, const Vec& v, const UncertaintyModel& m,
                             const OracleConfig& cfg);

// Samples-only variant (analytic candidate excluded); converges to the
// closed form from below as mc_samples grows.
double mc_worst_interference_samples(double p, const Vec& v, const UncertaintyModel& m,
                                     const OracleConfig& cfg);

// Reference solution when the interfered channel is known exactly: the
// single constraint p |h_fixed^H v|^2 <= p_t replaces the robust cap.
// Solved by grid search plus golden-section polish over the plane spanned
// by h_fixed and hs.
BeamSolution perfect_csi_reference(const Scenario& sc, const Vec& h_fixed);

} // namespace robustbeam
