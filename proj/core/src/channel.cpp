// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustbeam/channel.hpp"

#include <cmath>

#include "robustbeam/rng.hpp"

namespace robustbeam {

double rate_of(double p, const Vec& v, const Vec& hs) {
    if (p < 0.0) {
        throw std::invalid_argument("rate_of: negative power");
    }
    const double gain = std::abs(hs.dot(v));
    return std::log1p(p * gain * gain);
}

Vec worst_case_channel(const Vec& v, const UncertaintyModel& m) {
    if (v.norm() == 0.0) {
        throw std::invalid_argument("worst_case_channel: zero direction");
    }
    const Vec rv = m.r * v;
    const double quad = v.dot(rv).real(); // v^H R v > 0 for PD R
    const Cplx z = v.dot(m.h0);           // v^H h0
    const double mag = std::abs(z);
    const Cplx phase = (mag <= 1e-300) ? Cplx(1.0, 0.0) : z / mag;
    return m.h0 + std::sqrt(m.epsilon / quad) * phase * rv;
}

double worst_case_interference(double p, const Vec& v, const UncertaintyModel& m) {
    if (p < 0.0) {
        throw std::invalid_argument("worst_case_interference: negative power");
    }
    const double quad = v.dot(m.r * v).real();
    const double amp = std::abs(m.h0.dot(v)) + std::sqrt(m.epsilon * quad);
    return p * amp * amp;
}

FeasibilityReport check_feasible(const BeamSolution& sol, const Scenario& sc, double tol) {
    FeasibilityReport rep;
    const double worst = worst_case_interference(sol.p, sol.v, sc.uncertainty);
    rep.power_ok = sol.p <= sc.p_bar * (1.0 + tol);
    rep.interference_ok = worst <= sc.p_t * (1.0 + tol);
    rep.power_slack = 1.0 - sol.p / sc.p_bar;
    rep.interference_slack = 1.0 - worst / sc.p_t;
    return rep;
}

std::vector<Vec> sample_ellipsoid(const UncertaintyModel& m, std::uint64_t seed, int count,
                                  bool boundary) {
    if (count < 1) {
        throw std::invalid_argument("sample_ellipsoid: count must be >= 1");
    }
    const Eigen::Index n = m.r.rows();
    const EigenPair ep = hermitian_eig(m.r); // R = U^H gamma U
    if (ep.delta(n - 1) < kPdTol) {
        throw SingularCovariance("sample_ellipsoid: covariance eigenvalue below kPdTol");
    }
    // Square root R^{1/2} = U^H gamma^{1/2} U maps the unit ball onto the
    // shape of the ellipsoid: with u on the complex unit sphere,
    // h = h0 + sqrt(epsilon) R^{1/2} u lands exactly on the boundary
    // (h - h0)^H R^{-1} (h - h0) = epsilon.
    Mat root(n, n);
    root = ep.u.adjoint() * ep.delta.cwiseSqrt().asDiagonal() * ep.u;

    Rng rng(seed);
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    const double sqrt_eps = std::sqrt(m.epsilon);
    for (int s = 0; s < count; ++s) {
        Vec u(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            u(i) = rng.complex_gaussian();
        }
        double scale = 1.0 / u.norm();
        if (!boundary) {
            // Volume-uniform radius in 2n real dimensions.
            scale *= std::pow(rng.uniform01(), 1.0 / (2.0 * static_cast<double>(n)));
        }
        out.push_back(m.h0 + sqrt_eps * (root * (scale * u)));
    }
    return out;
}

} // namespace robustbeam
