#include "lrd/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>

#include "lrd/error.hpp"
#include "lrd/params.hpp"

namespace lrd {

FracCoeffs frac_coeffs(double d, Eigen::Index n) {
  if (!(d < 0.5)) throw DomainError("fractional coefficients need d < 0.5");
  if (n < 0) throw ConfigError("coefficient count must be nonnegative");
  FracCoeffs out{d, Eigen::VectorXd(n + 1)};
  out.coeffs(0) = 1.0;
  for (Eigen::Index k = 1; k <= n; ++k)
    out.coeffs(k) = out.coeffs(k - 1) * (static_cast<double>(k) - 1.0 + d) / static_cast<double>(k);
  return out;
}

namespace {

// Marsaglia-Tsang gamma(shape, 1) for shape >= 1, consuming slots from `slot` on.
double gamma_draw(const CounterRng& rng, std::uint64_t t, double shape, std::uint32_t slot) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (std::uint32_t attempt = 0; attempt < 1000; ++attempt) {
    const double x = rng.normal(t, slot + 2 * attempt);
    const double v0 = 1.0 + c * x;
    if (v0 <= 0.0) continue;
    const double v = v0 * v0 * v0;
    const double u = rng.uniform(t, slot + 2 * attempt + 1);
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
  return shape;  // unreachable in practice
}

}  // namespace

double draw_innovation(const CounterRng& rng, const Innovation& law, std::uint64_t t) {
  const double z = rng.normal(t, 0);
  if (law.law == Innovation::Law::gaussian) return z;
  if (!(law.nu > 2.0)) throw ConfigError("Student-t innovations need nu > 2");
  const double half = 0.5 * law.nu;
  double g;
  if (half >= 1.0) {
    g = gamma_draw(rng, t, half, 1);
  } else {
    // gamma(a) = gamma(a + 1) U^{1/a}
    g = gamma_draw(rng, t, half + 1.0, 2) * std::pow(rng.uniform(t, 1), 1.0 / half);
  }
  const double chi2 = 2.0 * g;
  return z / std::sqrt(chi2 / law.nu) * std::sqrt((law.nu - 2.0) / law.nu);
}

Eigen::Index default_burn_in(const TvProcessSpec& spec) {
  if (!spec.stationary) return 0;
  const double root = spec.truncation > 0 ? std::sqrt(static_cast<double>(spec.truncation)) : 0.0;
  return std::max<Eigen::Index>(512, static_cast<Eigen::Index>(std::ceil(4.0 * root)));
}

Eigen::VectorXd simulate_tvfarima(const TvProcessSpec& spec, Eigen::Index T, std::uint64_t seed,
                                  std::uint64_t stream) {
  if (T < 2) throw ConfigError("simulation needs T >= 2");
  const Eigen::Index burn = spec.burn_in >= 0 ? spec.burn_in : default_burn_in(spec);
  const Eigen::Index total = T + burn;
  const Eigen::Index p = static_cast<Eigen::Index>(spec.ar.size());
  const Eigen::Index q = static_cast<Eigen::Index>(spec.ma.size());
  const CounterRng rng(seed, stream);
  const double Td = static_cast<double>(T);

  Eigen::VectorXd e(total), v(total), y(total), x(T);
  Eigen::VectorXd ar(p);
  FracCoeffs frac{std::numeric_limits<double>::quiet_NaN(), Eigen::VectorXd()};

  for (Eigen::Index i = 0; i < total; ++i) {
    const Eigen::Index t = i - burn + 1;  // time index; <= 0 during burn-in
    const double u = static_cast<double>(std::max<Eigen::Index>(t, 1)) / Td;

    const double sigma = spec.innovation.sigma(u);
    if (!(sigma > 0.0)) throw ConfigError("innovation scale must be positive at u=" + std::to_string(u));
    e(i) = sigma * draw_innovation(rng, spec.innovation, static_cast<std::uint64_t>(i));

    double vi = e(i);
    for (Eigen::Index j = 1; j <= q && j <= i; ++j) vi += spec.ma[j - 1](u) * e(i - j);
    v(i) = vi;

    const double d = spec.d(u);
    if (!(d < 0.5 && d > -0.5))
      throw ConfigError("memory function d(u) outside (-0.5, 0.5) at u=" + std::to_string(u));
    const Eigen::Index lags = spec.truncation > 0 ? std::min(i, spec.truncation) : i;
    if (d != frac.d || frac.coeffs.size() < lags + 1) {
      const Eigen::Index n = spec.truncation > 0 ? spec.truncation : total - 1;
      frac = frac_coeffs(d, d == 0.0 ? 0 : n);
    }
    double w = 0.0;
    const Eigen::Index used = std::min<Eigen::Index>(lags, frac.coeffs.size() - 1);
    for (Eigen::Index l = 0; l <= used; ++l) w += frac.coeffs(l) * v(i - l);

    for (Eigen::Index m = 0; m < p; ++m) ar(m) = spec.ar[m](u);
    if (p > 0 && !(min_root_modulus(ar) > 1.0))
      throw ConfigError("AR polynomial unstable at u=" + std::to_string(u));
    double yi = w;
    for (Eigen::Index m = 1; m <= p && m <= i; ++m) yi -= ar(m - 1) * y(i - m);
    if (spec.mean_placement == TvProcessSpec::MeanPlacement::intercept) yi += spec.mean(u);
    y(i) = yi;

    if (t >= 1) {
      x(t - 1) = yi;
      if (spec.mean_placement == TvProcessSpec::MeanPlacement::additive) x(t - 1) += spec.mean(u);
    }
  }
  return x;
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {"tvar1_smooth_mean", "tvar1_jump_mean",
                                                 "tvma1",             "tvfarima_1_d_0",
                                                 "tvfarima_0_d_1",    "farima_1_d_1"};
  return names;
}

TvProcessSpec named_model(const std::string& name) {
  TvProcessSpec s;
  if (name == "tvar1_smooth_mean") {
    // X_t = mu(t/T) + Y_t with Y_t = 0.6 (t/T) Y_{t-1} + Z_t
    s.mean = [](double u) { return 1.2 * u; };
    s.ar = {[](double u) { return -0.6 * u; }};
  } else if (name == "tvar1_jump_mean") {
    s.mean = [](double u) { return u <= 0.5 ? 0.65 : 1.3; };
    s.ar = {[](double u) { return -0.6 * u; }};
  } else if (name == "tvma1") {
    s.ma = {[](double u) { return 0.55 * std::sin(std::numbers::pi * u); }};
  } else if (name == "tvfarima_1_d_0") {
    s.d = [](double u) { return 0.1 + 0.3 * u; };
    s.ar = {[](double u) { return 0.2 * u; }};
  } else if (name == "tvfarima_0_d_1") {
    s.d = [](double u) { return 0.1 + 0.3 * u; };
    s.ma = {[](double u) { return -0.35 * u; }};
  } else if (name == "farima_1_d_1") {
    s.d = [](double) { return 0.1; };
    s.ar = {[](double) { return 0.25; }};
    s.ma = {[](double) { return -0.3; }};
    s.stationary = true;
  } else {
    std::string known;
    for (const auto& n : model_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown model '" + name + "' (known: " + known + ")");
  }
  return s;
}

Eigen::VectorXd simulate_named_model(const std::string& name, Eigen::Index T, std::uint64_t seed,
                                     std::uint64_t stream) {
  return simulate_tvfarima(named_model(name), T, seed, stream);
}

unsigned worker_threads() {
  if (const char* env = std::getenv("LRD_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

MonteCarloResult monte_carlo(const std::string& model, Eigen::Index T, const TestConfig& config,
                             std::size_t n_reps, std::uint64_t seed, unsigned threads) {
  if (n_reps < 1) throw ConfigError("need at least one replication");
  const TvProcessSpec spec = named_model(model);
  const auto start = std::chrono::steady_clock::now();
  const unsigned workers =
      std::min<std::size_t>(threads > 0 ? threads : worker_threads(), n_reps);

  std::vector<double> p(n_reps, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(n_reps);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t r = next++; r < n_reps; r = next++) {
      try {
        const Eigen::VectorXd x = simulate_tvfarima(spec, T, seed, r);
        p[r] = run_test(x, config).p_value;
      } catch (const Error& e) {
        errors[r] = e.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  MonteCarloResult out;
  out.reps = n_reps;
  std::size_t hits5 = 0, hits10 = 0, ok = 0;
  for (std::size_t r = 0; r < n_reps; ++r) {
    if (std::isnan(p[r])) {
      ++out.failures;
      out.failure_messages.push_back("replication " + std::to_string(r) + ": " + errors[r]);
      continue;
    }
    ++ok;
    hits5 += p[r] <= 0.05;
    hits10 += p[r] <= 0.10;
  }
  if (static_cast<double>(out.failures) >= 0.01 * static_cast<double>(n_reps) && out.failures > 0)
    throw EstimationError(std::to_string(out.failures) + " of " + std::to_string(n_reps) +
                              " replications failed; first: " + out.failure_messages.front(),
                          WhittleFit{});
  const double n = static_cast<double>(ok);
  out.rate_5 = static_cast<double>(hits5) / n;
  out.rate_10 = static_cast<double>(hits10) / n;
  out.se_5 = std::sqrt(out.rate_5 * (1.0 - out.rate_5) / n);
  out.se_10 = std::sqrt(out.rate_10 * (1.0 - out.rate_10) / n);
  out.p_values = std::move(p);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

Eigen::VectorXd sample_acvf(SeriesView series, Eigen::Index max_lag) {
  const Eigen::Index T = series.size();
  if (max_lag < 0 || max_lag >= T) throw ConfigError("max_lag must be in 0..T-1");
  const Eigen::VectorXd c = series.values().array() - series.values().mean();
  Eigen::VectorXd g(max_lag + 1);
  for (Eigen::Index h = 0; h <= max_lag; ++h)
    g(h) = c.head(T - h).dot(c.tail(T - h)) / static_cast<double>(T);
  return g;
}

}  // namespace lrd
