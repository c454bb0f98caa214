#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "lrd/params.hpp"
#include "lrd/quadrature.hpp"

namespace lrd {

/// log |1 - e^{i lambda}|^2 = log(2 - 2 cos lambda), written through sin(lambda/2)
/// so it stays accurate near 0.
template <typename Scalar>
Scalar log_abs2_one_minus_exp(Scalar lambda) {
  using std::log;
  using std::sin;
  const Scalar s = sin(lambda / Scalar(2));
  return log(Scalar(4) * s * s);
}

/// Squared modulus |1 + sum_j a_j e^{-i lambda j}|^2 using only cosines of
/// multiples of lambda (so the value is even in lambda).
template <typename Scalar>
Scalar ar_transfer_abs2(const VectorX<Scalar>& a, Scalar lambda) {
  using std::cos;
  // |A|^2 = sum_{j,m} a_j a_m cos((j - m) lambda) with a_0 = 1.
  const Eigen::Index k = a.size();
  Scalar out(0);
  for (Eigen::Index j = 0; j <= k; ++j) {
    const Scalar aj = j == 0 ? Scalar(1) : a(j - 1);
    for (Eigen::Index m = 0; m <= k; ++m) {
      const Scalar am = m == 0 ? Scalar(1) : a(m - 1);
      out += aj * am * cos(Scalar(double(j - m)) * lambda);
    }
  }
  return out;
}

/// FARIMA(k,d,0) density without validation; lambda must be nonzero.
template <typename Scalar>
Scalar density_unchecked(const SieveParams<Scalar>& p, Scalar lambda) {
  using std::exp;
  const Scalar two_pi(2.0 * std::numbers::pi);
  return exp(-p.d * log_abs2_one_minus_exp(lambda)) / (two_pi * ar_transfer_abs2(p.ar, lambda));
}

/// Spectral density of FARIMA(k,d,0); validates parameters and frequency.
double eval_density(const SieveParamsd& params, double lambda);

/// Gradient of log f with respect to (d, a_1, ..., a_k).
Eigen::VectorXd grad_log_density(const SieveParamsd& params, double lambda);

/// Trigonometric tables at a fixed set of frequencies, reused across many
/// density and gradient evaluations with different parameters.
class SpectralTable {
public:
  SpectralTable(Eigen::ArrayXd lambda, Eigen::Index max_order);

  Eigen::Index size() const { return lambda_.size(); }
  Eigen::Index max_order() const { return cos_.cols(); }
  const Eigen::ArrayXd& lambda() const { return lambda_; }
  /// log(2 - 2 cos lambda).
  const Eigen::ArrayXd& log_abs2() const { return log_abs2_; }

  /// log f at every frequency.
  Eigen::ArrayXd log_density(const SieveParamsd& p) const;

  /// log f and the (n x (k+1)) gradient matrix of log f.
  void log_density_and_gradient(const SieveParamsd& p, Eigen::ArrayXd& log_f,
                                Eigen::MatrixXd& grad) const;

private:
  void ar_parts(const Eigen::VectorXd& a, Eigen::ArrayXd& re, Eigen::ArrayXd& im) const;

  Eigen::ArrayXd lambda_;
  Eigen::ArrayXd log_abs2_;
  Eigen::MatrixXd cos_;  // cos(j lambda), j = 1..max_order
  Eigen::MatrixXd sin_;
};

/// Fisher information (1/4pi) int grad log f (grad log f)^T over [-pi, pi].
Eigen::MatrixXd gamma_matrix(const SieveParamsd& params,
                             const QuadratureGrid& grid = default_grid());

struct GammaInverse {
  Eigen::MatrixXd inverse;
  double w11 = 0.0;        // inverse(0, 0)
  double condition = 0.0;  // ratio of extreme eigenvalues of Gamma
};

inline constexpr double kMaxGammaCondition = 1e12;

GammaInverse gamma_inverse(const SieveParamsd& params,
                           const QuadratureGrid& grid = default_grid());

/// int_0^pi grad log f(lambda) d lambda (zero in exact arithmetic for this
/// model family; computed by quadrature).
Eigen::VectorXd integrated_log_density_gradient(const SieveParamsd& params,
                                                const QuadratureGrid& grid = default_grid());

}  // namespace lrd
