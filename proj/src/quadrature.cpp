#include "lrd/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "lrd/error.hpp"

namespace lrd {

GaussRule gauss_legendre(int m) {
  if (m < 1) throw ConfigError("Gauss-Legendre order must be positive");
  GaussRule rule{Eigen::ArrayXd(m), Eigen::ArrayXd(m)};
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= m; ++n) {
        const double pn = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = pn;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(m - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(m - 1 - i) = w;
  }
  return rule;
}

namespace {

// Shifted Legendre polynomials on [0, 1] evaluated at t: row n holds P~_n(t).
Eigen::ArrayXXd shifted_legendre(const Eigen::ArrayXd& t, int order) {
  Eigen::ArrayXXd p(order, t.size());
  const Eigen::ArrayXd x = 2.0 * t - 1.0;
  p.row(0).setOnes();
  if (order > 1) p.row(1) = x.transpose();
  for (int n = 2; n < order; ++n)
    p.row(n) = ((2.0 * n - 1.0) * x.transpose() * p.row(n - 1) - (n - 1.0) * p.row(n - 2)) / n;
  return p;
}

// Moments int_0^1 P~_n(t) log(t)^power dt, from the monomial expansion
// P~_n(t) = sum_k (-1)^{n+k} C(n,k) C(n+k,k) t^k and int t^k log t = -1/(k+1)^2,
// int t^k log^2 t = 2/(k+1)^3.
Eigen::ArrayXd log_moments(int order, int power) {
  Eigen::ArrayXd out(order);
  for (int n = 0; n < order; ++n) {
    long double sum = 0.0L;
    long double binom_n = 1.0L;    // C(n, k)
    long double binom_nk = 1.0L;   // C(n + k, k)
    for (int k = 0; k <= n; ++k) {
      if (k > 0) {
        binom_n = binom_n * (n - k + 1) / k;
        binom_nk = binom_nk * (n + k) / k;
      }
      const long double kp1 = k + 1.0L;
      const long double mono = power == 1 ? -1.0L / (kp1 * kp1) : 2.0L / (kp1 * kp1 * kp1);
      const long double sign = ((n + k) % 2 == 0) ? 1.0L : -1.0L;
      sum += sign * binom_n * binom_nk * mono;
    }
    out(n) = static_cast<double>(sum);
  }
  return out;
}

}  // namespace

QuadratureGrid::QuadratureGrid(int q) {
  constexpr int m = kPanelOrder;
  if (q < 2 * m || q % m != 0)
    throw ConfigError("quadrature size must be a multiple of " + std::to_string(m) +
                      " and at least " + std::to_string(2 * m));
  const int panels = q / m;
  const double pi = std::numbers::pi;

  const GaussRule rule = gauss_legendre(m);
  const Eigen::ArrayXd t = 0.5 * (rule.nodes + 1.0);
  const Eigen::ArrayXd wt = 0.5 * rule.weights;

  // First panel [0, h0]; its smallest node must stay >= pi / (4q).
  const double h0 = std::max(pi / panels, 1.0001 * pi / (4.0 * q) / t(0));

  // Product-integration weights on [0, 1]: v_i = wt_i sum_n (2n+1) mom_n P~_n(t_i).
  const Eigen::ArrayXXd leg = shifted_legendre(t, m);
  const Eigen::ArrayXd mom1 = log_moments(m, 1);
  const Eigen::ArrayXd mom2 = log_moments(m, 2);
  Eigen::ArrayXd v1 = Eigen::ArrayXd::Zero(m), v2 = Eigen::ArrayXd::Zero(m);
  for (int n = 0; n < m; ++n) {
    v1 += (2.0 * n + 1.0) * mom1(n) * leg.row(n).transpose();
    v2 += (2.0 * n + 1.0) * mom2(n) * leg.row(n).transpose();
  }
  v1 *= wt;
  v2 *= wt;

  nodes_.resize(q);
  weights_.resize(q);
  log_weights_.resize(q);
  log2_weights_.resize(q);

  // On [0, h0], log(h0 t) = log h0 + log t.
  const double lh = std::log(h0);
  nodes_.head(m) = h0 * t;
  weights_.head(m) = h0 * wt;
  log_weights_.head(m) = h0 * (v1 + lh * wt);
  log2_weights_.head(m) = h0 * (v2 + 2.0 * lh * v1 + lh * lh * wt);

  const double width = (pi - h0) / (panels - 1);
  for (int p = 1; p < panels; ++p) {
    const double a = h0 + (p - 1) * width;
    auto seg = Eigen::seqN(p * m, m);
    nodes_(seg) = a + width * t;
    weights_(seg) = width * wt;
  }
  auto rest = Eigen::seq(m, q - 1);
  const Eigen::ArrayXd logs = nodes_(rest).log();
  log_weights_(rest) = weights_(rest) * logs;
  log2_weights_(rest) = weights_(rest) * logs * logs;
}

const QuadratureGrid& default_grid() {
  static const QuadratureGrid grid(QuadratureGrid::kDefaultNodes);
  return grid;
}

}  // namespace lrd
