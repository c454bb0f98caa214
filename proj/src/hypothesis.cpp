#include "lrd/hypothesis.hpp"

#include <cmath>
#include <numbers>

#include "lrd/error.hpp"
#include "lrd/normal.hpp"
#include "lrd/spectral.hpp"

namespace lrd {

std::string to_string(VarianceMode mode) {
  switch (mode) {
    case VarianceMode::gaussian: return "gaussian";
    case VarianceMode::general: return "general";
    case VarianceMode::automatic: return "auto";
  }
  return "gaussian";
}

VarianceMode parse_variance_mode(const std::string& name) {
  if (name == "gaussian") return VarianceMode::gaussian;
  if (name == "general") return VarianceMode::general;
  if (name == "auto") return VarianceMode::automatic;
  throw ConfigError("unknown variance mode '" + name + "' (gaussian, general, auto)");
}

double compute_F(const Eigen::VectorXd& d_profile) {
  if (d_profile.size() == 0) throw ConfigError("empty d profile");
  return d_profile.mean();
}

GaussianVariance gaussian_variance(const std::vector<BlockFit>& fits, const QuadratureGrid& grid) {
  if (fits.empty()) throw ConfigError("no block fits");
  GaussianVariance out;
  const Eigen::Index dim = fits.front().params.k() + 1;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim, dim);
  double diag_sum = 0.0;
  for (const auto& fit : fits) {
    if (!fit.converged) throw EstimationError("block " + std::to_string(fit.block) +
                                                  " did not converge",
                                              fit);
    if (fit.params.k() + 1 != dim) throw ConfigError("blocks fitted with different orders");
    try {
      GammaInverse gi = gamma_inverse(fit.params, grid);
      sum += gi.inverse;
      diag_sum += gi.w11;
      out.inverses.push_back(std::move(gi.inverse));
    } catch (const ConditioningError& e) {
      throw ConditioningError("block " + std::to_string(fit.block) + ": " + e.what(),
                              e.condition());
    }
  }
  const double M = static_cast<double>(fits.size());
  out.average_then_extract = (sum / M)(0, 0);
  out.extract_then_average = diag_sum / M;
  return out;
}

double compute_W_gaussian(const std::vector<BlockFit>& fits, const QuadratureGrid& grid) {
  return gaussian_variance(fits, grid).average_then_extract;
}

ResidualMoments residual_moments(const Eigen::VectorXd& block_values, const SieveParamsd& params) {
  const Eigen::Index N = block_values.size();
  const Eigen::Index k = params.k();
  if (N <= k + 1) throw ConfigError("block too short for the residual filter");
  // theta_i for i = 2..k is a_{i-1}, applied at lag i - 1.
  ResidualMoments out;
  double m2 = 0.0, m4 = 0.0;
  for (Eigen::Index t = k; t < N; ++t) {
    double z = block_values(t);
    for (Eigen::Index i = 2; i <= k; ++i) z -= params.ar(i - 2) * block_values(t - i + 1);
    const double z2 = z * z;
    m2 += z2;
    m4 += z2 * z2;
  }
  out.count = N - k;
  m2 /= static_cast<double>(out.count);
  m4 /= static_cast<double>(out.count);
  out.sigma2 = m2;
  out.kappa4 = m4 - 3.0 * m2 * m2;
  return out;
}

ResidualMoments residual_moments(SeriesView series, const Eigen::VectorXd& mean,
                                 const BlockFit& fit, Eigen::Index N, BlockLayout layout) {
  return residual_moments(block_residuals(series, mean, N, fit.block, layout), fit.params);
}

double kurtosis_correction_integral(const SieveParamsd& params,
                                    const Eigen::MatrixXd& gamma_inverse,
                                    const QuadratureGrid& grid) {
  // f * grad f^{-1} = -grad log f, and the integrand is even.
  const Eigen::VectorXd g = integrated_log_density_gradient(params, grid);
  return -2.0 * gamma_inverse.row(0).dot(g);
}

double kurtosis_adjusted_variance(double w_gaussian, const std::vector<ResidualMoments>& moments,
                                  const std::vector<double>& integrals) {
  if (moments.size() != integrals.size() || moments.empty())
    throw ConfigError("need one residual moment set and one integral per block");
  double sum = 0.0;
  for (std::size_t j = 0; j < moments.size(); ++j) {
    const double s4 = moments[j].sigma2 * moments[j].sigma2;
    if (!(s4 > 1e-300) || !std::isfinite(s4))
      throw NumericalError("block " + std::to_string(j + 1) +
                           ": residual variance is zero, kurtosis correction undefined");
    sum += moments[j].kappa4 / s4 * integrals[j] * integrals[j];
  }
  return w_gaussian + sum / (4.0 * std::numbers::pi * static_cast<double>(moments.size()));
}

double compute_W_general(const std::vector<BlockFit>& fits,
                         const std::vector<ResidualMoments>& moments,
                         const QuadratureGrid& grid) {
  const GaussianVariance gv = gaussian_variance(fits, grid);
  std::vector<double> integrals;
  integrals.reserve(fits.size());
  for (std::size_t j = 0; j < fits.size(); ++j)
    integrals.push_back(kurtosis_correction_integral(fits[j].params, gv.inverses[j], grid));
  return kurtosis_adjusted_variance(gv.average_then_extract, moments, integrals);
}

BlockShape resolve_blocks(Eigen::Index T, std::optional<Eigen::Index> N,
                          std::optional<Eigen::Index> M) {
  if (N.has_value() == M.has_value()) throw ConfigError("specify exactly one of N and M");
  BlockShape s;
  if (N) {
    if (*N < 4 || *N % 2 != 0) throw ConfigError("block length N must be even and >= 4");
    s.N = *N;
    s.M = T / s.N;
  } else {
    if (*M < 1) throw ConfigError("number of blocks M must be positive");
    s.M = *M;
    s.N = (T / s.M) / 2 * 2;
  }
  if (s.M < 1 || s.N < 4) throw ConfigError("sample too short for the requested blocks");
  s.T = s.N * s.M;
  return s;
}

TestReport run_test(SeriesView series, const TestConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
  const QuadratureGrid& grid = config.grid ? *config.grid : default_grid();
  TestReport rep;
  const BlockShape shape = resolve_blocks(series.size(), config.N, config.M);
  if (shape.T < kMinTestLength)
    throw ConfigError("need at least " + std::to_string(kMinTestLength) +
                      " observations after truncation, have " + std::to_string(shape.T));
  if (shape.T != series.size())
    rep.warnings.push_back("series truncated from T=" + std::to_string(series.size()) +
                           " to N*M=" + std::to_string(shape.T));
  const SeriesView x = series.head(shape.T);
  rep.T = shape.T;
  rep.N = shape.N;
  rep.M = shape.M;
  rep.alpha = config.alpha;
  rep.L = config.L > 0 ? config.L : default_mean_window(shape.N);
  if (rep.L % 2 != 0) throw ConfigError("mean window L must be even");
  if (rep.L > shape.T) {
    rep.L = shape.T;
    rep.warnings.push_back("mean window clipped to T");
  }

  // Order: fixed or AIC on the full-sample fit, capped by the block resolution.
  const Eigen::Index k_cap = shape.N / 2 - 2;
  if (config.k) {
    if (*config.k < 0 || *config.k > k_cap)
      throw ConfigError("order k=" + std::to_string(*config.k) + " not in 0.." +
                        std::to_string(k_cap));
    rep.k = *config.k;
  } else {
    const Eigen::VectorXd mean = local_window_means(x, rep.L, config.edge);
    AicOptions aic;
    aic.k_max = std::min(config.k_max, k_cap);
    aic.penalty = config.aic_penalty;
    aic.fit = config.fit;
    const AicResult sel = select_order_aic(x, mean, aic);
    rep.k = sel.k;
    rep.aic_criteria = sel.criteria;
    rep.warnings.insert(rep.warnings.end(), sel.warnings.begin(), sel.warnings.end());
  }

  BlockConfig bc;
  bc.N = shape.N;
  bc.M = shape.M;
  bc.k = rep.k;
  bc.L = rep.L;
  bc.layout = config.layout;
  bc.edge = config.edge;
  bc.fit = config.fit;
  BlockFits bf = fit_all_blocks(x, bc);

  rep.F_hat = compute_F(bf.d_profile);
  for (const auto& f : bf.fits) rep.d_profile.push_back({f.block, f.u, f.params.d});

  const GaussianVariance gv = gaussian_variance(bf.fits, grid);
  rep.W_gaussian = gv.average_then_extract;
  rep.W_hat = rep.W_gaussian;

  VarianceMode mode = config.variance_mode;
  std::vector<ResidualMoments> moments;
  if (mode != VarianceMode::gaussian) {
    for (const auto& f : bf.fits)
      moments.push_back(residual_moments(x, bf.mean, f, shape.N, config.layout));
  }
  if (mode == VarianceMode::automatic) {
    double ratio = 0.0;
    bool defined = true;
    for (const auto& m : moments) {
      if (!(m.sigma2 > 0.0)) defined = false;
      else ratio += m.kappa4 / (m.sigma2 * m.sigma2);
    }
    ratio /= static_cast<double>(moments.size());
    mode = (defined && std::abs(ratio) > kKurtosisPrescreen) ? VarianceMode::general
                                                             : VarianceMode::gaussian;
  }
  if (mode == VarianceMode::general) {
    std::vector<double> integrals;
    for (std::size_t j = 0; j < bf.fits.size(); ++j)
      integrals.push_back(kurtosis_correction_integral(bf.fits[j].params, gv.inverses[j], grid));
    rep.W_hat = kurtosis_adjusted_variance(rep.W_gaussian, moments, integrals);
  }
  rep.variance_mode = mode;
  if (!(rep.W_hat > 0.0)) throw NumericalError("variance estimate is not positive");

  rep.statistic = std::sqrt(static_cast<double>(rep.T)) * rep.F_hat / std::sqrt(rep.W_hat);
  rep.p_value = normal_upper_tail(rep.statistic);
  rep.critical_value = normal_quantile(1.0 - rep.alpha);
  rep.reject = rep.p_value <= rep.alpha;
  rep.fits = std::move(bf.fits);
  return rep;
}

}  // namespace lrd
