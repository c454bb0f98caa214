#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrd/hypothesis.hpp"
#include "lrd/periodogram.hpp"
#include "lrd/rng.hpp"

namespace lrd {

using TimeFunction = std::function<double(double)>;

/// Fractional integration coefficients b_0 = 1, b_k = b_{k-1} (k - 1 + d) / k.
struct FracCoeffs {
  double d = 0.0;
  Eigen::VectorXd coeffs;
};

/// b_0..b_n for d < 0.5.
FracCoeffs frac_coeffs(double d, Eigen::Index n);

struct Innovation {
  enum class Law { gaussian, student_t };
  Law law = Law::gaussian;
  double nu = 5.0;  // degrees of freedom for student_t, must exceed 2
  /// sigma(u) > 0; innovations are unit-variance before scaling.
  TimeFunction sigma = [](double) { return 1.0; };
};

/// Unit-variance innovation Z_t of the stream, t >= 0.
double draw_innovation(const CounterRng& rng, const Innovation& law, std::uint64_t t);

/// Time-varying process
///   (1 + sum_i a_i(u) B^i) (1 - B)^{d(u)} Y_t = (1 + sum_j b_j(u) B^j) sigma(u) Z_t
/// with every coefficient frozen at u = t/T when X_t is generated.
struct TvProcessSpec {
  enum class MeanPlacement {
    additive,   // X_t = mu(t/T) + Y_t
    intercept,  // mu(t/T) enters the AR recursion as an intercept
  };

  TimeFunction mean = [](double) { return 0.0; };
  MeanPlacement mean_placement = MeanPlacement::additive;
  TimeFunction d = [](double) { return 0.0; };
  std::vector<TimeFunction> ar;
  std::vector<TimeFunction> ma;
  Innovation innovation{};
  /// Maximum lag of the fractional expansion; 0 uses the exact finite past.
  Eigen::Index truncation = 0;
  /// Stationary specs get a discarded burn-in; triangular arrays start at t = 1.
  bool stationary = false;
  Eigen::Index burn_in = -1;  // -1 selects the default for stationary specs
};

Eigen::Index default_burn_in(const TvProcessSpec& spec);

/// Generates X_1..X_T for replication `stream` of `seed`.
Eigen::VectorXd simulate_tvfarima(const TvProcessSpec& spec, Eigen::Index T, std::uint64_t seed,
                                  std::uint64_t stream = 0);

/// Named processes used in the simulation study.
const std::vector<std::string>& model_names();
TvProcessSpec named_model(const std::string& name);
Eigen::VectorXd simulate_named_model(const std::string& name, Eigen::Index T, std::uint64_t seed,
                                     std::uint64_t stream = 0);

struct MonteCarloResult {
  double rate_5 = 0.0;
  double rate_10 = 0.0;
  double se_5 = 0.0;
  double se_10 = 0.0;
  std::size_t reps = 0;
  std::size_t failures = 0;
  std::vector<std::string> failure_messages;
  std::vector<double> p_values;  // per replication, NaN on failure
  double seconds = 0.0;
};

/// Worker count from LRD_THREADS, defaulting to the available cores.
unsigned worker_threads();

/// Rejection frequencies of run_test at 5% and 10% over n_reps replications.
/// Replication r simulates with stream r, so results do not depend on threads.
MonteCarloResult monte_carlo(const std::string& model, Eigen::Index T, const TestConfig& config,
                             std::size_t n_reps, std::uint64_t seed, unsigned threads = 0);

/// gamma(h) = (1/T) sum_t (X_t - mean)(X_{t+h} - mean), h = 0..max_lag.
Eigen::VectorXd sample_acvf(SeriesView series, Eigen::Index max_lag);

}  // namespace lrd
