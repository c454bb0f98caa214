#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrd/periodogram.hpp"
#include "lrd/quadrature.hpp"
#include "lrd/whittle.hpp"

namespace lrd {

enum class VarianceMode { gaussian, general, automatic };

std::string to_string(VarianceMode mode);
VarianceMode parse_variance_mode(const std::string& name);

/// Average block memory estimate.
double compute_F(const Eigen::VectorXd& d_profile);

struct GaussianVariance {
  double average_then_extract = 0.0;  // [ (1/M) sum Gamma^{-1} ]_11
  double extract_then_average = 0.0;  // (1/M) sum [Gamma^{-1}]_11
  std::vector<Eigen::MatrixXd> inverses;
};

GaussianVariance gaussian_variance(const std::vector<BlockFit>& fits,
                                   const QuadratureGrid& grid = default_grid());

/// [ (1/M) sum_j Gamma_k^{-1}(theta_j) ]_11.
double compute_W_gaussian(const std::vector<BlockFit>& fits,
                          const QuadratureGrid& grid = default_grid());

struct ResidualMoments {
  double sigma2 = 0.0;  // second raw moment of the residuals
  double kappa4 = 0.0;  // fourth raw moment minus 3 sigma2^2
  Eigen::Index count = 0;
};

/// Moments of Z_t = r_t - sum_{i=2}^{k} theta_i r_{t-i+1} over t = k+1..N (1-based
/// within the block), where theta = (d, a_1, ..., a_k) and r holds the block's
/// mean-corrected values.
ResidualMoments residual_moments(const Eigen::VectorXd& block_values, const SieveParamsd& params);

/// residual_moments on block j of the mean-corrected series.
ResidualMoments residual_moments(SeriesView series, const Eigen::VectorXd& mean,
                                 const BlockFit& fit, Eigen::Index N,
                                 BlockLayout layout = BlockLayout::contiguous);

/// int_{-pi}^{pi} f(lambda) [Gamma^{-1} grad f^{-1}(lambda)]_1 d lambda.
double kurtosis_correction_integral(const SieveParamsd& params,
                                    const Eigen::MatrixXd& gamma_inverse,
                                    const QuadratureGrid& grid = default_grid());

/// W_gaussian + (1/(4 pi M)) sum_j kappa_j / sigma_j^4 * integral_j^2.
double kurtosis_adjusted_variance(double w_gaussian, const std::vector<ResidualMoments>& moments,
                                  const std::vector<double>& integrals);

double compute_W_general(const std::vector<BlockFit>& fits,
                         const std::vector<ResidualMoments>& moments,
                         const QuadratureGrid& grid = default_grid());

/// Threshold on the block-averaged kappa4 / sigma^4 above which the automatic
/// variance mode switches to the kurtosis-adjusted form.
inline constexpr double kKurtosisPrescreen = 0.5;

struct TestConfig {
  std::optional<Eigen::Index> N;
  std::optional<Eigen::Index> M;
  std::optional<Eigen::Index> k;  // nullopt selects the order by AIC
  Eigen::Index k_max = 5;
  double aic_penalty = 1.0;
  Eigen::Index L = 0;  // 0 selects default_mean_window(N)
  double alpha = 0.05;
  VarianceMode variance_mode = VarianceMode::gaussian;
  BlockLayout layout = BlockLayout::contiguous;
  MeanEdge edge = MeanEdge::truncate;
  FitOptions fit{};
  const QuadratureGrid* grid = nullptr;  // nullptr selects default_grid()
};

struct ProfilePoint {
  Eigen::Index j = 0;
  double u = 0.0;
  double d = 0.0;
};

struct TestReport {
  Eigen::Index T = 0, N = 0, M = 0, k = 0, L = 0;
  double F_hat = 0.0;
  double W_hat = 0.0;
  double W_gaussian = 0.0;
  VarianceMode variance_mode = VarianceMode::gaussian;  // resolved, never automatic
  double statistic = 0.0;
  double p_value = 0.0;
  double critical_value = 0.0;
  double alpha = 0.05;
  bool reject = false;
  std::vector<ProfilePoint> d_profile;
  std::vector<std::string> warnings;
  std::vector<BlockFit> fits;
  std::vector<double> aic_criteria;
};

/// Resolves N and M against the sample length; T is truncated to N * M.
struct BlockShape {
  Eigen::Index N = 0, M = 0, T = 0;
};
BlockShape resolve_blocks(Eigen::Index T, std::optional<Eigen::Index> N,
                          std::optional<Eigen::Index> M);

inline constexpr Eigen::Index kMinTestLength = 64;

TestReport run_test(SeriesView series, const TestConfig& config);

}  // namespace lrd
