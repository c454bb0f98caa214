#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrd/error.hpp"
#include "lrd/optimize.hpp"
#include "lrd/params.hpp"
#include "lrd/periodogram.hpp"
#include "lrd/spectral.hpp"

namespace lrd {

enum class WhittleMode {
  profiled,    // innovation scale profiled out (scale invariant)
  unprofiled,  // density with unit innovation variance, as written
};

/// Periodogram ordinates at 2 pi p / n, p = 1..floor(n/2), with the trigonometric
/// tables needed to evaluate the likelihood for AR orders up to max_order.
struct WhittleData {
  Eigen::ArrayXd ordinates;
  Eigen::Index n = 0;
  SpectralTable table;

  WhittleData(Eigen::ArrayXd ordinates_, Eigen::Index n_, Eigen::Index max_order);
};

/// Discrete Whittle likelihood averaged over the positive Fourier frequencies.
double whittle_objective(const SieveParamsd& params, const WhittleData& data,
                         WhittleMode mode = WhittleMode::profiled);

double whittle_objective(const SieveParamsd& params, const LocalPeriodogram& pgram,
                         WhittleMode mode = WhittleMode::profiled);

/// Objective and its gradient with respect to (d, a_1, ..., a_k).
double whittle_objective_gradient(const SieveParamsd& params, const WhittleData& data,
                                  WhittleMode mode, Eigen::VectorXd& grad);

/// Innovation variance estimate mean_p I_p / f(lambda_p) (the profiled scale).
double profiled_scale(const SieveParamsd& params, const WhittleData& data);

struct FitOptions {
  WhittleMode mode = WhittleMode::profiled;
  /// Lower bound for d. Negative values admit anti-persistent fits.
  double d_lower = -kDMax;
  double d_upper = kDMax;
  /// Additional starting points tried after the built-in ones.
  std::vector<SieveParamsd> extra_starts;
  MinimizeOptions minimizer{};
};

struct WhittleFit {
  SieveParamsd params;
  double likelihood = 0.0;
  double grad_norm = 0.0;  // projected gradient in (d, pacf) coordinates
  int n_restarts_used = 0;
  bool converged = false;
  bool degenerate = false;  // all ordinates zero; params fixed at white noise
};

/// Result of fitting one block.
struct BlockFit : WhittleFit {
  Eigen::Index block = 0;
  Eigen::Index midpoint = 0;
  double u = 0.0;
};

class EstimationError : public Error {
public:
  EstimationError(const std::string& what, WhittleFit best) : Error(what), best_(std::move(best)) {}
  const WhittleFit& best() const noexcept { return best_; }

private:
  WhittleFit best_;
};

/// Multi-start minimization of the Whittle likelihood for order k.
WhittleFit fit_whittle(const WhittleData& data, Eigen::Index k, const FitOptions& options = {});

BlockFit fit_block(const LocalPeriodogram& pgram, Eigen::Index k, const FitOptions& options = {});

/// Partial autocorrelations of orders 1..k from the autocovariances implied
/// by the periodogram (Yule-Walker / Levinson-Durbin).
Eigen::VectorXd yule_walker_pacf(const WhittleData& data, Eigen::Index k);

struct AicOptions {
  Eigen::Index k_max = 5;
  /// Penalty numerator: criterion adds penalty * (k + 1) / T. 1 as printed,
  /// 2 for the classical AIC.
  double penalty = 1.0;
  FitOptions fit{};
};

struct AicResult {
  Eigen::Index k = 0;
  std::vector<double> criteria;  // NaN where the fit failed
  std::vector<std::string> warnings;
};

/// Order selection by fitting stationary FARIMA(k,d,0) models to the
/// full-sample periodogram for k = 0..k_max.
AicResult select_order_aic(SeriesView series, const Eigen::VectorXd& mean,
                           const AicOptions& options = {});

struct BlockConfig {
  Eigen::Index N = 0;
  Eigen::Index M = 0;
  Eigen::Index k = 0;
  Eigen::Index L = 0;  // 0 selects default_mean_window(N)
  BlockLayout layout = BlockLayout::contiguous;
  MeanEdge edge = MeanEdge::truncate;
  FitOptions fit{};
};

struct BlockFits {
  std::vector<BlockFit> fits;
  Eigen::VectorXd d_profile;
  Eigen::VectorXd u;
  Eigen::VectorXd mean;  // local-window mean at t = 1..T
  Eigen::Index L = 0;
};

/// Fits every block with the same order. Requires T == N * M.
BlockFits fit_all_blocks(SeriesView series, const BlockConfig& config);

}  // namespace lrd
