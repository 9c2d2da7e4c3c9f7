// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0
//
// Complex vector/matrix primitives shared by all solvers: Hermitian
// eigendecomposition, whitening, 2-D basis construction, phase alignment,
// and the complex-to-real stacking used by the cone program.

#pragma once

#include <Eigen/Dense>
#include <complex>

#include "robustbeam/errors.hpp"

namespace robustbeam {

using Cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

// Shared numeric tolerances. kLinTol bounds linear-algebra residuals
// (reconstruction, unitarity, basis orthogonality) on unit-normalized
// inputs; kPdTol is the positive-definiteness floor for covariance
// eigenvalues; kFeasTol is the relative band for feasibility checks.
inline constexpr double kLinTol = 1e-10;
inline constexpr double kPdTol = 1e-12;
inline constexpr double kFeasTol = 1e-8;

// Eigendecomposition of a Hermitian matrix M in the row-form convention
// M = U^H diag(delta) U: row i of U is the conjugated eigenvector of
// delta[i]. Eigenvalues are sorted descending and each eigenvector's
// phase is fixed (largest-magnitude entry made real positive) so the
// output is deterministic.
struct EigenPair {
    Mat u;
    RealVec delta;
};

// Orthonormal basis of the plane spanned by the mean channel h0 and the
// direct channel hs, plus the coordinates of hs in that basis:
//   hs = a_hs * h_hat + b_hs * h_perp_hat,  a_hs >= 0,  b_hs >= 0,
//   alpha = atan2(b_hs, a_hs) in [0, pi/2].
// Requires hs phase-aligned to h0 so that the projection coefficient is
// real nonnegative.
struct TwoDimBasis {
    Vec h_hat;
    Vec h_perp_hat;
    double a_hs = 0.0;
    double b_hs = 0.0;
    double alpha = 0.0;
};

// Decomposes a Hermitian PSD matrix. Throws NotHermitian if the input's
// conjugate symmetry is violated beyond kLinTol (relative to the largest
// entry), NoConvergence if the iteration fails. Eigenvalues within
// rounding of zero are clamped to zero.
EigenPair hermitian_eig(const Mat& m);

// Whitening operator Q = delta^{-1/2} U built from R^{-1} = U^H delta U,
// so that ||Q w||^2 = w^H R w for every w. sqrt(eps)*||Q w|| is then the
// worst-case magnitude of h1^H w over the origin-centered ellipsoid
// h1^H R^{-1} h1 <= eps. Throws SingularCovariance when the smallest
// eigenvalue of R is below kPdTol (equivalently, an eigenvalue of R^{-1}
// exceeds 1/kPdTol).
Mat whitening_map(const Mat& r);

// Returns e^{j theta} * hs with theta chosen so the inner product with h0
// is real nonnegative: Im(result^H h0) = 0, Re(result^H h0) >= 0. If
// hs^H h0 vanishes the input is returned unchanged. Total function.
Vec phase_align(const Vec& hs, const Vec& h0);

// Builds the 2-D basis over (h0, hs). hs must already be phase-aligned to
// h0; a clearly unaligned hs (negative projection beyond rounding) throws
// std::invalid_argument since it indicates a caller bug. When hs is
// parallel to h0 the perpendicular direction is the first canonical basis
// vector Gram-Schmidt-orthogonalized against h0 (deterministic filler;
// b_hs = 0 makes the choice immaterial to any solver output). Throws
// ZeroMeanChannel when ||h0|| < kLinTol.
TwoDimBasis two_dim_basis(const Vec& h0, const Vec& hs);

// Complex-to-real stacking: realify(v) = [Re v; Im v]. Preserves norms.
RealVec realify(const Vec& v);

// Inverse of realify on length-2N real vectors.
Vec derealify(const RealVec& x);

// Real 2N x 2N block form [[Re Q, -Im Q], [Im Q, Re Q]] satisfying
// realify_op(Q) * realify(w) = realify(Q w), hence norm preservation.
RealMat realify_op(const Mat& q);

// Row vector [Im h0; -Re h0] whose inner product with realify(w) equals
// Im(w^H h0); used as the alignment equality of the cone program.
RealVec realify_check(const Vec& h0);

// True when R is numerically a scalar multiple of the identity:
// ||R - (tr R / N) I||_max <= 1e-10 * (tr R / N).
bool is_isotropic(const Mat& r);

} // namespace robustbeam
