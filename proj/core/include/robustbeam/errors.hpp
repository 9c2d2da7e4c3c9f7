// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace robustbeam {

// Base class for every domain error thrown by the library. Usage bugs
// (violated preconditions that indicate a broken caller rather than bad
// problem data) throw std::invalid_argument instead.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A matrix handed to the eigensolver is not Hermitian within tolerance.
class NotHermitian : public Error {
  public:
    using Error::Error;
};

// The eigensolver's iteration failed to converge.
class NoConvergence : public Error {
  public:
    using Error::Error;
};

// A covariance matrix has an eigenvalue too close to zero to invert.
class SingularCovariance : public Error {
  public:
    using Error::Error;
};

// The mean channel h0 is (numerically) the zero vector; the geometric
// solution chain needs a nonzero mean to define its angles.
class ZeroMeanChannel : public Error {
  public:
    using Error::Error;
};

// The direct channel hs is (numerically) the zero vector; no beam can
// deliver positive rate.
class ZeroChannel : public Error {
  public:
    using Error::Error;
};

// The closed-form both-active step was reached with geometry that places
// its arccos argument outside [0, cos(alpha)]. The routing logic only
// enters that step when a both-active solution exists, so this signals an
// upstream routing bug rather than valid-but-hard input.
class InfeasibleGeometry : public Error {
  public:
    using Error::Error;
};

// The both-active root equation has no root in the bracket [alpha, pi/2].
// This is a real regime for anisotropic covariances, not an internal bug;
// callers are expected to catch it and report the trial as unsolved.
class NoRoot : public Error {
  public:
    using Error::Error;
};

// A brute-force search was requested for a dimension above its cost guard.
class DimensionTooLarge : public Error {
  public:
    using Error::Error;
};

// A solution recovery was attempted from a solver report whose status is
// not Optimal.
class NotOptimal : public Error {
  public:
    using Error::Error;
};

} // namespace robustbeam
