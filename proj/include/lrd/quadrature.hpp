#pragma once

#include <Eigen/Dense>

namespace lrd {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
};

GaussRule gauss_legendre(int m);

/// Composite Gauss-Legendre grid on (0, pi] for integrands of the form
///   a(lambda) + b(lambda) log(lambda) + c(lambda) log(lambda)^2
/// with a, b, c smooth. Away from 0 the log factors are folded into the
/// weights; the panel touching 0 carries product-integration weights that are
/// exact for polynomial a, b, c of degree < kPanelOrder.
///
/// Integrals of even integrands over [-pi, pi] are twice the grid sum.
class QuadratureGrid {
public:
  static constexpr int kPanelOrder = 8;
  static constexpr int kDefaultNodes = 4096;

  /// q must be a multiple of kPanelOrder and at least 2 * kPanelOrder.
  explicit QuadratureGrid(int q = kDefaultNodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  const Eigen::ArrayXd& nodes() const { return nodes_; }
  /// Plain weights; they sum to pi.
  const Eigen::ArrayXd& weights() const { return weights_; }
  const Eigen::ArrayXd& log_weights() const { return log_weights_; }
  const Eigen::ArrayXd& log2_weights() const { return log2_weights_; }

  /// Approximates int_0^pi a + b log(lambda) + c log(lambda)^2 d lambda, with
  /// a, b, c sampled at nodes().
  double integrate(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b,
                   const Eigen::ArrayXd& c) const {
    return (weights_ * a).sum() + (log_weights_ * b).sum() + (log2_weights_ * c).sum();
  }

  double integrate(const Eigen::ArrayXd& a) const { return (weights_ * a).sum(); }

private:
  Eigen::ArrayXd nodes_;
  Eigen::ArrayXd weights_;
  Eigen::ArrayXd log_weights_;
  Eigen::ArrayXd log2_weights_;
};

/// Shared default grid (Q = 4096), built on first use.
const QuadratureGrid& default_grid();

}  // namespace lrd
