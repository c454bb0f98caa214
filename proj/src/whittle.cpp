#include "lrd/whittle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/AutoDiff>

namespace lrd {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::ArrayXd frequencies_for(Eigen::Index n) { return fourier_frequencies(n); }

// a = pacf_to_ar(r) and its Jacobian da/dr.
Eigen::VectorXd ar_with_jacobian(const Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
  using AD = Eigen::AutoDiffScalar<Eigen::VectorXd>;
  const Eigen::Index k = r.size();
  VectorX<AD> rr(k);
  for (Eigen::Index i = 0; i < k; ++i) rr(i) = AD(r(i), k, i);
  const VectorX<AD> a = pacf_to_ar(rr);
  Eigen::VectorXd out(k);
  jac.setZero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out(i) = a(i).value();
    if (a(i).derivatives().size() == k) jac.row(i) = a(i).derivatives().transpose();
  }
  return out;
}

SieveParamsd from_coordinates(const Eigen::VectorXd& x) {
  const Eigen::VectorXd r = x.tail(x.size() - 1);
  return SieveParamsd(x(0), pacf_to_ar(r));
}

}  // namespace

WhittleData::WhittleData(Eigen::ArrayXd ordinates_, Eigen::Index n_, Eigen::Index max_order)
    : ordinates(std::move(ordinates_)), n(n_), table(frequencies_for(n_), max_order) {
  if (ordinates.size() != n / 2) throw ConfigError("ordinate count must be floor(n/2)");
  if (ordinates.size() == 0) throw ConfigError("no positive Fourier frequencies");
  if ((ordinates < 0.0).any() || !ordinates.allFinite())
    throw DataError("periodogram ordinates must be finite and nonnegative");
}

double profiled_scale(const SieveParamsd& params, const WhittleData& data) {
  const Eigen::ArrayXd log_f = data.table.log_density(params);
  return (data.ordinates * (-log_f).exp()).mean();
}

double whittle_objective_gradient(const SieveParamsd& params, const WhittleData& data,
                                  WhittleMode mode, Eigen::VectorXd& grad) {
  Eigen::ArrayXd log_f;
  Eigen::MatrixXd dlog;
  data.table.log_density_and_gradient(params, log_f, dlog);
  const Eigen::ArrayXd ratio = data.ordinates * (-log_f).exp();  // I / f
  const double K = static_cast<double>(data.ordinates.size());
  double value;
  if (mode == WhittleMode::unprofiled) {
    value = 0.5 * (log_f + ratio).mean();
    grad = (0.5 / K) * (dlog.transpose() * (1.0 - ratio).matrix());
  } else {
    const double scale = ratio.mean();
    value = 0.5 * (std::log(scale) + log_f.mean() + 1.0);
    grad = (0.5 / K) * (dlog.transpose() * (1.0 - ratio / scale).matrix());
  }
  if (!std::isfinite(value)) throw NumericalError("Whittle objective is not finite");
  return value;
}

double whittle_objective(const SieveParamsd& params, const WhittleData& data, WhittleMode mode) {
  Eigen::VectorXd grad;
  return whittle_objective_gradient(params, data, mode, grad);
}

double whittle_objective(const SieveParamsd& params, const LocalPeriodogram& pgram,
                         WhittleMode mode) {
  validate(params);
  const WhittleData data(pgram.ordinates, pgram.N, params.k());
  return whittle_objective(params, data, mode);
}

Eigen::VectorXd yule_walker_pacf(const WhittleData& data, Eigen::Index k) {
  const Eigen::Index n = data.n;
  const Eigen::Index K = data.ordinates.size();
  const Eigen::ArrayXd& lambda = data.table.lambda();
  // gamma(h) = (2 pi / n) sum over all nonzero Fourier frequencies of I cos(h lambda).
  Eigen::VectorXd gamma(k + 1);
  for (Eigen::Index h = 0; h <= k; ++h) {
    double s = 0.0;
    for (Eigen::Index p = 0; p < K; ++p) {
      const double weight = (n % 2 == 0 && p == K - 1) ? 1.0 : 2.0;
      s += weight * data.ordinates(p) * std::cos(h * lambda(p));
    }
    gamma(h) = 2.0 * kPi / static_cast<double>(n) * s;
  }
  Eigen::VectorXd r = Eigen::VectorXd::Zero(k);
  if (k == 0 || !(gamma(0) > 0.0)) return r;
  // Levinson-Durbin on the predictor form.
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(k), prev(k);
  double v = gamma(0);
  for (Eigen::Index m = 0; m < k; ++m) {
    double num = gamma(m + 1);
    for (Eigen::Index j = 0; j < m; ++j) num -= phi(j) * gamma(m - j);
    double rm = num / v;
    rm = std::clamp(rm, -0.95 * kPacfBound, 0.95 * kPacfBound);
    r(m) = rm;
    prev.head(m) = phi.head(m);
    for (Eigen::Index j = 0; j < m; ++j) phi(j) = prev(j) - rm * prev(m - 1 - j);
    phi(m) = rm;
    v *= (1.0 - rm * rm);
  }
  return r;
}

WhittleFit fit_whittle(const WhittleData& data, Eigen::Index k, const FitOptions& options) {
  if (k < 0) throw ConfigError("AR order must be nonnegative");
  if (k + 1 >= data.ordinates.size())
    throw ConfigError("AR order " + std::to_string(k) + " too large for " +
                      std::to_string(data.ordinates.size()) + " Fourier frequencies");
  if (k > data.table.max_order()) throw ConfigError("AR order exceeds table order");

  WhittleFit best;
  best.params = SieveParamsd(0.0, Eigen::VectorXd::Zero(k));
  if (data.ordinates.maxCoeff() == 0.0) {
    best.degenerate = true;
    best.converged = true;
    best.likelihood = -std::numeric_limits<double>::infinity();
    return best;
  }

  const double d_lo = std::max(options.d_lower, -kDMax);
  const double d_hi = std::min(options.d_upper, kDMax);
  Eigen::VectorXd lower(k + 1), upper(k + 1);
  lower(0) = d_lo;
  upper(0) = d_hi;
  lower.tail(k).setConstant(-kPacfBound);
  upper.tail(k).setConstant(kPacfBound);

  auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& gx) {
    Eigen::MatrixXd jac;
    const Eigen::VectorXd r = x.tail(k);
    const Eigen::VectorXd a = ar_with_jacobian(r, jac);
    const SieveParamsd p(x(0), a);
    Eigen::VectorXd g;
    double value;
    try {
      value = whittle_objective_gradient(p, data, options.mode, g);
    } catch (const NumericalError&) {
      gx = Eigen::VectorXd::Zero(k + 1);
      return std::numeric_limits<double>::infinity();
    }
    gx.resize(k + 1);
    gx(0) = g(0);
    gx.tail(k) = jac.transpose() * g.tail(k);
    return value;
  };

  std::vector<Eigen::VectorXd> starts;
  auto add_start = [&](double d, const Eigen::VectorXd& r) {
    Eigen::VectorXd x(k + 1);
    x(0) = std::clamp(d, d_lo, d_hi);
    x.tail(k) = r.cwiseMax(-kPacfBound).cwiseMin(kPacfBound);
    starts.push_back(x);
  };
  const Eigen::VectorXd zero_r = Eigen::VectorXd::Zero(k);
  add_start(0.0, zero_r);
  add_start(0.25, zero_r);
  add_start(0.45, zero_r);
  if (d_lo < 0.0) add_start(-0.25, zero_r);
  if (k > 0) {
    const Eigen::VectorXd yw = yule_walker_pacf(data, k);
    add_start(0.0, yw);
    add_start(0.25, yw);
  }
  for (const auto& extra : options.extra_starts) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(k);
    const Eigen::Index m = std::min<Eigen::Index>(k, extra.k());
    a.head(m) = extra.ar.head(m);
    try {
      add_start(extra.d, ar_to_pacf(a));
    } catch (const ConstraintError&) {
    }
  }

  double best_value = std::numeric_limits<double>::infinity();
  bool have_best = false;
  bool best_converged = false;
  MinimizeResult best_run;
  for (const auto& x0 : starts) {
    const MinimizeResult run = minimize_box(objective, x0, lower, upper, options.minimizer);
    if (!std::isfinite(run.value)) continue;
    // A converged run beats a non-converged one; otherwise the lower value wins.
    const bool better = !have_best || (run.converged && !best_converged) ||
                        (run.converged == best_converged && run.value < best_value);
    if (better) {
      best_run = run;
      best_value = run.value;
      best_converged = run.converged;
      have_best = true;
    }
  }
  best.n_restarts_used = static_cast<int>(starts.size());
  if (!have_best) throw EstimationError("Whittle objective not finite at any start", best);

  best.params = from_coordinates(best_run.x);
  best.likelihood = best_run.value;
  best.grad_norm = best_run.projected_gradient_norm;
  best.converged = best_run.converged;
  if (!best.converged)
    throw EstimationError("no start converged (best projected gradient norm " +
                              std::to_string(best.grad_norm) + ")",
                          best);
  return best;
}

BlockFit fit_block(const LocalPeriodogram& pgram, Eigen::Index k, const FitOptions& options) {
  const WhittleData data(pgram.ordinates, pgram.N, k);
  BlockFit out;
  static_cast<WhittleFit&>(out) = fit_whittle(data, k, options);
  out.block = pgram.block;
  out.midpoint = pgram.midpoint;
  out.u = pgram.u;
  return out;
}

AicResult select_order_aic(SeriesView series, const Eigen::VectorXd& mean,
                           const AicOptions& options) {
  if (options.k_max < 0) throw ConfigError("k_max must be nonnegative");
  AicResult out;
  out.criteria.assign(options.k_max + 1, std::numeric_limits<double>::quiet_NaN());
  if (options.k_max == 0) {
    out.k = 0;
    return out;
  }
  const Eigen::Index T = series.size();
  const WhittleData data(full_periodogram(series, mean), T, options.k_max);
  const double scale = 2.0 * static_cast<double>(data.ordinates.size()) / static_cast<double>(T);

  FitOptions fit = options.fit;
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  std::optional<SieveParamsd> previous;
  for (Eigen::Index k = 0; k <= options.k_max; ++k) {
    FitOptions local = fit;
    if (previous) local.extra_starts.push_back(*previous);
    try {
      const WhittleFit f = fit_whittle(data, k, local);
      const double likelihood = f.degenerate ? 0.0 : f.likelihood;
      const double crit = scale * likelihood + options.penalty * (k + 1.0) / static_cast<double>(T);
      out.criteria[k] = crit;
      previous = f.params;
      if (crit < best) {
        best = crit;
        out.k = k;
      }
      any = true;
    } catch (const Error& e) {
      out.warnings.push_back("AIC: order " + std::to_string(k) + " skipped: " + e.what());
    }
  }
  if (!any) throw EstimationError("AIC: every candidate order failed", WhittleFit{});
  return out;
}

BlockFits fit_all_blocks(SeriesView series, const BlockConfig& config) {
  const Eigen::Index N = config.N, M = config.M;
  if (N < 2 || N % 2 != 0) throw ConfigError("block length N must be even");
  if (M < 1) throw ConfigError("number of blocks M must be positive");
  if (N * M != series.size()) throw ConfigError("T must equal N * M");
  BlockFits out;
  out.L = config.L > 0 ? config.L : default_mean_window(N);
  if (out.L > series.size()) out.L = series.size() - series.size() % 2;
  out.mean = local_window_means(series, out.L, config.edge);
  out.d_profile.resize(M);
  out.u.resize(M);
  for (Eigen::Index j = 1; j <= M; ++j) {
    const LocalPeriodogram pg = local_periodogram(series, out.mean, N, j, config.layout);
    try {
      out.fits.push_back(fit_block(pg, config.k, config.fit));
    } catch (const EstimationError& e) {
      throw EstimationError("block " + std::to_string(j) + ": " + e.what(), e.best());
    }
    out.d_profile(j - 1) = out.fits.back().params.d;
    out.u(j - 1) = out.fits.back().u;
  }
  return out;
}

}  // namespace lrd
