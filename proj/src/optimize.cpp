#include "lrd/optimize.hpp"

#include <cmath>
#include <vector>

namespace lrd {

Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  return x - (x - g).cwiseMax(lower).cwiseMin(upper);
}

MinimizeResult minimize_box(const ObjectiveWithGradient& objective, Eigen::VectorXd x0,
                            const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                            const MinimizeOptions& options) {
  const Eigen::Index n = x0.size();
  auto clamp = [&](const Eigen::VectorXd& v) { return v.cwiseMax(lower).cwiseMin(upper).eval(); };

  MinimizeResult res;
  Eigen::VectorXd x = clamp(x0);
  Eigen::VectorXd g(n);
  double f = objective(x, g);
  // Hessian approximation; steps solve it on the free variables only.
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
  bool fresh_b = true;

  // Quasi-Newton direction on the variables not held at a bound by the gradient.
  auto direction = [&](Eigen::VectorXd& p) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool at_lower = x(i) <= lower(i) && g(i) > 0.0;
      const bool at_upper = x(i) >= upper(i) && g(i) < 0.0;
      if (!at_lower && !at_upper) free.push_back(i);
    }
    if (free.empty()) return false;
    const auto nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd Bf(nf, nf);
    Eigen::VectorXd gf(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      gf(a) = g(free[a]);
      for (Eigen::Index b = 0; b < nf; ++b) Bf(a, b) = B(free[a], free[b]);
    }
    Eigen::VectorXd pf = Bf.ldlt().solve(-gf);
    if (!pf.allFinite() || gf.dot(pf) >= -1e-14 * gf.norm() * pf.norm()) {
      B.setIdentity();
      fresh_b = true;
      pf = -gf;
    }
    p.setZero(n);
    for (Eigen::Index a = 0; a < nf; ++a) p(free[a]) = pf(a);
    return true;
  };

  auto update = [&](const Eigen::VectorXd& x_new, const Eigen::VectorXd& g_new) {
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    const Eigen::VectorXd Bs = B * s;
    const double sBs = s.dot(Bs);
    if (sy > 1e-12 * s.norm() * y.norm() && sBs > 0.0) {
      if (fresh_b) {
        // Scale the initial identity to the observed curvature.
        B *= sy / sBs;
        const Eigen::VectorXd Bs0 = B * s;
        B += y * y.transpose() / sy - Bs0 * Bs0.transpose() / s.dot(Bs0);
      } else {
        B += y * y.transpose() / sy - Bs * Bs.transpose() / sBs;
      }
      fresh_b = false;
    }
    x = x_new;
    g = g_new;
  };

  auto pg_norm = [&](const Eigen::VectorXd& xv, const Eigen::VectorXd& gv) {
    return projected_gradient(xv, gv, lower, upper).lpNorm<Eigen::Infinity>();
  };

  Eigen::VectorXd p(n), x_new(n), g_new(n);
  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    if (!std::isfinite(f) || !g.allFinite()) break;
    if (pg_norm(x, g) < options.gradient_tolerance) {
      res.converged = true;
      break;
    }
    if (!direction(p)) break;

    // Armijo backtracking along the projected path.
    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = clamp(x + step * p);
      f_new = objective(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * g.dot(x_new - x)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (fresh_b) break;
      B.setIdentity();
      fresh_b = true;
      continue;
    }
    const bool stalled = (x_new - x).lpNorm<Eigen::Infinity>() == 0.0 && f_new == f;
    update(x_new, g_new);
    f = f_new;
    if (stalled) break;
  }

  // Near the optimum, function values stop resolving progress at about
  // sqrt(machine epsilon) in x; the gradient is still accurate, so continue
  // with steps that shrink the projected gradient.
  for (int polish = 0; polish < 50 && !res.converged && std::isfinite(f) && g.allFinite(); ++polish) {
    const double current = pg_norm(x, g);
    if (current < options.gradient_tolerance) {
      res.converged = true;
      break;
    }
    if (!direction(p)) break;
    bool improved = false;
    double step = 1.0;
    for (int ls = 0; ls < 20; ++ls, step *= 0.5) {
      x_new = clamp(x + step * p);
      const double f_new = objective(x_new, g_new);
      if (std::isfinite(f_new) && g_new.allFinite() && pg_norm(x_new, g_new) < current &&
          f_new <= f + 1e-12 * (1.0 + std::abs(f))) {
        update(x_new, g_new);
        f = f_new;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }

  res.x = x;
  res.value = f;
  const Eigen::VectorXd pg = projected_gradient(x, g, lower, upper);
  res.projected_gradient_norm = pg.norm();
  if (!res.converged) res.converged = pg.allFinite() && res.projected_gradient_norm < options.accept_tolerance;
  return res;
}

}  // namespace lrd
