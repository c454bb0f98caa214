#pragma once

#include <functional>

#include <Eigen/Dense>

namespace lrd {

/// Objective returning f(x) and writing the gradient into the second argument.
using ObjectiveWithGradient = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct MinimizeOptions {
  double gradient_tolerance = 1e-11;  // on the projected gradient, infinity norm
  /// When floating point stalls the search before gradient_tolerance is met, the
  /// point still counts as converged if the projected gradient's Euclidean norm
  /// is below this.
  double accept_tolerance = 1e-6;
  int max_iterations = 400;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double projected_gradient_norm = 0.0;  // Euclidean norm
  int iterations = 0;
  bool converged = false;
};

/// Projected gradient x - clamp(x - g, lower, upper).
Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

/// Bound-constrained quasi-Newton minimization (projected BFGS with an
/// Armijo search along the projection arc). Infinite bounds are allowed.
MinimizeResult minimize_box(const ObjectiveWithGradient& objective, Eigen::VectorXd x0,
                            const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                            const MinimizeOptions& options = {});

}  // namespace lrd
