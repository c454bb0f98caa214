#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "lrd/error.hpp"

namespace lrd {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Upper bound of the memory parameter in the fitted sieve.
inline constexpr double kDMax = 0.49;
/// Box bound on every partial autocorrelation of the fitted AR part.
inline constexpr double kPacfBound = 0.99;
/// Stability margin on the roots of 1 + a_1 z + ... + a_k z^k for is_stable.
inline constexpr double kStabilityMargin = 1e-3;

/// Parameter vector (d, a_1, ..., a_k) of a FARIMA(k,d,0) spectral density
///   f(lambda) = |1 - e^{i lambda}|^{-2d} / (2 pi |1 + sum_j a_j e^{-i lambda j}|^2).
template <typename Scalar>
struct SieveParams {
  Scalar d{0};
  VectorX<Scalar> ar;

  SieveParams() : ar(VectorX<Scalar>::Zero(0)) {}
  SieveParams(Scalar d_, VectorX<Scalar> ar_) : d(d_), ar(std::move(ar_)) {}

  Eigen::Index k() const { return ar.size(); }

  /// Flattened (d, a_1, ..., a_k).
  VectorX<Scalar> theta() const {
    VectorX<Scalar> t(k() + 1);
    t(0) = d;
    t.tail(k()) = ar;
    return t;
  }

  static SieveParams from_theta(const VectorX<Scalar>& t) {
    return SieveParams(t(0), t.tail(t.size() - 1));
  }
};

using SieveParamsd = SieveParams<double>;

/// Maps partial autocorrelations r_1..r_k in (-1,1) to the coefficients a of a
/// stable polynomial 1 + a_1 z + ... + a_k z^k (Durbin-Levinson step-up).
template <typename Scalar>
VectorX<Scalar> pacf_to_ar(const VectorX<Scalar>& r) {
  const Eigen::Index k = r.size();
  // phi holds the predictor form X_t = sum phi_j X_{t-j} + Z_t, so a = -phi.
  VectorX<Scalar> phi = VectorX<Scalar>::Zero(k);
  VectorX<Scalar> prev(k);
  for (Eigen::Index m = 0; m < k; ++m) {
    prev.head(m) = phi.head(m);
    for (Eigen::Index j = 0; j < m; ++j) phi(j) = prev(j) - r(m) * prev(m - 1 - j);
    phi(m) = r(m);
  }
  return -phi;
}

/// Inverse of pacf_to_ar. Throws ConstraintError when some |r_m| >= 1.
inline VectorX<double> ar_to_pacf(const VectorX<double>& a) {
  const Eigen::Index k = a.size();
  VectorX<double> phi = -a;
  VectorX<double> r(k);
  for (Eigen::Index m = k - 1; m >= 0; --m) {
    const double rm = phi(m);
    if (!(std::abs(rm) < 1.0))
      throw ConstraintError("AR polynomial is not stable (partial autocorrelation " +
                            std::to_string(rm) + " at lag " + std::to_string(m + 1) + ")");
    r(m) = rm;
    const double denom = 1.0 - rm * rm;
    VectorX<double> next(m);
    for (Eigen::Index j = 0; j < m; ++j) next(j) = (phi(j) + rm * phi(m - 1 - j)) / denom;
    phi.head(m) = next;
  }
  return r;
}

/// Smallest modulus among the roots of 1 + a_1 z + ... + a_k z^k (infinity for k = 0).
inline double min_root_modulus(const VectorX<double>& a) {
  const Eigen::Index k = a.size();
  if (k == 0) return std::numeric_limits<double>::infinity();
  // Reciprocal roots are the eigenvalues of the companion matrix of
  // z^k + a_1 z^{k-1} + ... + a_k.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
  companion.row(0) = -a.transpose();
  if (k > 1) companion.bottomLeftCorner(k - 1, k - 1).setIdentity();
  const Eigen::VectorXcd eig = companion.eigenvalues();
  const double largest = eig.cwiseAbs().maxCoeff();
  return largest == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / largest;
}

inline bool is_stable(const VectorX<double>& a, double margin = kStabilityMargin) {
  return min_root_modulus(a) >= 1.0 + margin;
}

/// Throws ConstraintError unless d in [d_lower, kDMax] and the AR part lies in
/// the feasible set: stable, with every partial autocorrelation in
/// [-kPacfBound, kPacfBound] (a relative slack of 1e-9 absorbs round-off).
inline void validate(const SieveParamsd& p, double d_lower = -kDMax) {
  if (!std::isfinite(p.d) || p.d < d_lower || p.d > kDMax)
    throw ConstraintError("memory parameter d = " + std::to_string(p.d) + " outside [" +
                          std::to_string(d_lower) + ", " + std::to_string(kDMax) + "]");
  if (!p.ar.allFinite()) throw ConstraintError("non-finite AR coefficient");
  const VectorX<double> r = ar_to_pacf(p.ar);
  if (r.size() > 0 && r.cwiseAbs().maxCoeff() > kPacfBound * (1.0 + 1e-9))
    throw ConstraintError("AR polynomial outside the feasible set (largest |partial autocorrelation| = " +
                          std::to_string(r.cwiseAbs().maxCoeff()) + ", min |z| = " +
                          std::to_string(min_root_modulus(p.ar)) + ")");
}

}  // namespace lrd
