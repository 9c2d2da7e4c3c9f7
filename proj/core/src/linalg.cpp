// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustbeam/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace robustbeam {

namespace {

// Largest absolute entry of a complex matrix; the scale reference for
// relative residual checks.
double max_abs_entry(const Mat& m) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            best = std::max(best, std::abs(m(i, j)));
        }
    }
    return best;
}

} // namespace

EigenPair hermitian_eig(const Mat& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("hermitian_eig: matrix must be square and nonempty");
    }
    const Eigen::Index n = m.rows();
    const double scale = std::max(1.0, max_abs_entry(m));
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
            if (std::abs(m(i, j) - std::conj(m(j, i))) > kLinTol * scale) {
                throw NotHermitian("hermitian_eig: input violates conjugate symmetry");
            }
        }
    }

    // Exact symmetrization removes the sub-tolerance asymmetry before the
    // solver runs, so the residual contract is met even for inputs at the
    // edge of the Hermitian band.
    const Mat sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("hermitian_eig: eigeniteration failed");
    }

    // Eigen returns ascending eigenvalues with eigenvectors as columns.
    // Reorder descending, clamp rounding-level negatives of PSD inputs,
    // and fix each eigenvector's free phase.
    EigenPair out;
    out.delta = RealVec(n);
    Mat cols(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index src = n - 1 - i;
        double ev = solver.eigenvalues()(src);
        if (ev < 0.0 && ev > -kLinTol * scale) {
            ev = 0.0;
        }
        out.delta(i) = ev;
        Vec v = solver.eigenvectors().col(src);
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            const double a = std::abs(v(k));
            if (a > best) {
                best = a;
                arg = k;
            }
        }
        if (best > 0.0) {
            v *= std::conj(v(arg)) / best;
        }
        cols.col(i) = v;
    }
    // Row-form convention M = U^H diag(delta) U.
    out.u = cols.adjoint();
    return out;
}

Mat whitening_map(const Mat& r) {
    const EigenPair ep = hermitian_eig(r); // r = U^H gamma U, gamma descending
    const Eigen::Index n = r.rows();
    const double gamma_min = ep.delta(n - 1);
    if (gamma_min < kPdTol) {
        throw SingularCovariance("whitening_map: covariance eigenvalue below kPdTol");
    }
    // With R = U^H gamma U we have R^{-1} = U'^H delta U' where
    // delta_i = 1/gamma_{n-1-i} (descending again) and U' is U with rows
    // reversed to match. Q = delta^{-1/2} U' scales row i of U' by
    // sqrt(gamma_{n-1-i}).
    Mat q(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        q.row(i) = std::sqrt(ep.delta(n - 1 - i)) * ep.u.row(n - 1 - i);
    }
    return q;
}

Vec phase_align(const Vec& hs, const Vec& h0) {
    if (hs.size() != h0.size()) {
        throw std::invalid_argument("phase_align: dimension mismatch");
    }
    const Cplx z = hs.dot(h0); // sum conj(hs_i) * h0_i
    const double mag = std::abs(z);
    if (mag <= 1e-300) {
        return hs;
    }
    // result = (z/|z|) * hs gives result^H h0 = conj(z/|z|) * z = |z|.
    return (z / mag) * hs;
}

TwoDimBasis two_dim_basis(const Vec& h0, const Vec& hs) {
    if (hs.size() != h0.size()) {
        throw std::invalid_argument("two_dim_basis: dimension mismatch");
    }
    const double n0 = h0.norm();
    if (n0 < kLinTol) {
        throw ZeroMeanChannel("two_dim_basis: mean channel is numerically zero");
    }
    TwoDimBasis basis;
    basis.h_hat = h0 / n0;
    const Cplx proj = basis.h_hat.dot(hs);
    const double hs_norm = hs.norm();
    if (proj.real() < -1e-8 * std::max(hs_norm, 1.0)) {
        throw std::invalid_argument("two_dim_basis: hs is not phase-aligned to h0");
    }
    Vec perp = hs - proj * basis.h_hat;
    const double b = perp.norm();
    if (b > 1e-12 * std::max(hs_norm, 1.0)) {
        basis.h_perp_hat = perp / b;
        basis.b_hs = b;
    } else {
        // Parallel channels: any unit vector orthogonal to h_hat works
        // since b_hs = 0. Use a canonical basis vector Gram-Schmidt
        // orthogonalized against h_hat; fall back to the second one when
        // the first is nearly parallel to h_hat itself.
        const Eigen::Index n = h0.size();
        for (Eigen::Index k = 0; k < n; ++k) {
            Vec cand = Vec::Zero(n);
            cand(k) = 1.0;
            cand -= basis.h_hat.dot(cand) * basis.h_hat;
            const double norm = cand.norm();
            if (norm > 0.5) {
                basis.h_perp_hat = cand / norm;
                break;
            }
        }
        basis.b_hs = 0.0;
    }
    basis.a_hs = std::max(proj.real(), 0.0);
    basis.alpha = std::atan2(basis.b_hs, basis.a_hs);
    return basis;
}

RealVec realify(const Vec& v) {
    const Eigen::Index n = v.size();
    RealVec out(2 * n);
    out.head(n) = v.real();
    out.tail(n) = v.imag();
    return out;
}

Vec derealify(const RealVec& x) {
    if (x.size() % 2 != 0) {
        throw std::invalid_argument("derealify: length must be even");
    }
    const Eigen::Index n = x.size() / 2;
    Vec out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i) = Cplx(x(i), x(n + i));
    }
    return out;
}

RealMat realify_op(const Mat& q) {
    const Eigen::Index r = q.rows();
    const Eigen::Index c = q.cols();
    RealMat out(2 * r, 2 * c);
    out.topLeftCorner(r, c) = q.real();
    out.topRightCorner(r, c) = -q.imag();
    out.bottomLeftCorner(r, c) = q.imag();
    out.bottomRightCorner(r, c) = q.real();
    return out;
}

RealVec realify_check(const Vec& h0) {
    const Eigen::Index n = h0.size();
    RealVec out(2 * n);
    out.head(n) = h0.imag();
    out.tail(n) = -h0.real();
    return out;
}

bool is_isotropic(const Mat& r) {
    if (r.rows() != r.cols() || r.rows() == 0) {
        return false;
    }
    const Eigen::Index n = r.rows();
    const double mean_diag = r.trace().real() / static_cast<double>(n);
    if (!(mean_diag > 0.0)) {
        return false;
    }
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const Cplx want = (i == j) ? Cplx(mean_diag, 0.0) : Cplx(0.0, 0.0);
            worst = std::max(worst, std::abs(r(i, j) - want));
        }
    }
    return worst <= 1e-10 * mean_diag;
}

} // namespace robustbeam
