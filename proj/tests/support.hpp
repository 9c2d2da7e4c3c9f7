// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded instance builders shared by the test suites. Everything funnels
// through the library's own Rng so fixtures are reproducible across
// machines and standard libraries.

#pragma once

#include <robustbeam/channel.hpp>
#include <robustbeam/rng.hpp>

namespace testsupport {

using robustbeam::Cplx;
using robustbeam::Mat;
using robustbeam::Rng;
using robustbeam::Scenario;
using robustbeam::Vec;

inline Vec random_vec(Rng& rng, int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = rng.complex_gaussian();
    }
    return v;
}

inline Vec random_unit(Rng& rng, int n) {
    Vec v = random_vec(rng, n);
    return v / v.norm();
}

// Complex Wishart-style positive definite matrix F^H F with unit-variance
// Gaussian factor entries, symmetrized exactly.
inline Mat random_wishart(Rng& rng, int n) {
    Mat f(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            f(i, j) = Cplx(rng.gaussian(), rng.gaussian());
        }
    }
    Mat r = f.adjoint() * f;
    return 0.5 * (r + r.adjoint());
}

inline Scenario iso_scenario(std::uint64_t seed, int n, double eps, double sigma, double p_bar,
                             double p_t, double h0_scale = 1.0) {
    Rng rng(seed);
    Scenario sc;
    sc.hs = random_vec(rng, n);
    sc.uncertainty.h0 = h0_scale * random_vec(rng, n);
    sc.uncertainty.r = sigma * sigma * Mat::Identity(n, n);
    sc.uncertainty.epsilon = eps;
    sc.p_bar = p_bar;
    sc.p_t = p_t;
    return sc;
}

inline Scenario wishart_scenario(std::uint64_t seed, int n, double eps, double p_bar, double p_t,
                                 double h0_scale = 1.0) {
    Rng rng(seed);
    Scenario sc;
    sc.hs = random_vec(rng, n);
    sc.uncertainty.h0 = h0_scale * random_vec(rng, n);
    sc.uncertainty.r = random_wishart(rng, n);
    sc.uncertainty.epsilon = eps;
    sc.p_bar = p_bar;
    sc.p_t = p_t;
    return sc;
}

// Relative difference with an absolute floor of 1, the convention used by
// the solver contracts for near-zero reference values.
inline double rel_gap(double value, double reference) {
    return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace testsupport
