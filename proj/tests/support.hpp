#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "lrd/params.hpp"

namespace lrd::testing {

inline Eigen::VectorXd gaussian_noise(Eigen::Index n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z(0.0, sd);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = z(gen);
  return x;
}

/// Random feasible sieve parameters: d in [lo, hi], PACFs uniform in (-0.8, 0.8).
inline SieveParamsd random_params(std::mt19937_64& gen, Eigen::Index k, double lo = 0.0,
                                  double hi = 0.45) {
  std::uniform_real_distribution<double> ud(lo, hi), ur(-0.8, 0.8);
  Eigen::VectorXd r(k);
  for (Eigen::Index i = 0; i < k; ++i) r(i) = ur(gen);
  return SieveParamsd(ud(gen), pacf_to_ar(r));
}

/// Double-exponential (tanh-sinh) quadrature of g over (a, b). Never evaluates
/// the endpoints, so integrable log singularities there are harmless.
inline double tanh_sinh(const std::function<double(double)>& g, double a, double b,
                        double h = 1.0 / 64.0, double t_max = 4.0) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (double t = -t_max; t <= t_max + 1e-12; t += h) {
    const double s = 0.5 * std::numbers::pi * std::sinh(t);
    const double c = std::cosh(s);
    const double x = std::tanh(s);
    const double w = 0.5 * std::numbers::pi * std::cosh(t) / (c * c);
    // Distance to the nearer endpoint, computed without cancellation.
    const double to_end = half / (std::exp(2.0 * std::abs(s)) + 1.0) * 2.0;
    const double point = x < 0 ? a + to_end : b - to_end;
    if (to_end <= 0.0) continue;
    sum += w * g(point);
  }
  return sum * h * half;
}

}  // namespace lrd::testing
