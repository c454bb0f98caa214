// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <cstring>
#include <string>
#include <thread>

#include "lrd/hypothesis.hpp"
#include "lrd/io.hpp"
#include "lrd/simulate.hpp"
#include "lrd/spectral.hpp"
#include "lrd/whittle.hpp"

using namespace lrd;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240601;
constexpr std::size_t kReps = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("%s criterion %2d: %s -- %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", id, name.c_str(),
              out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

SieveParamsd random_params(std::mt19937_64& gen, Eigen::Index k) {
  std::uniform_real_distribution<double> ud(0.0, 0.45), ur(-0.8, 0.8);
  Eigen::VectorXd r(k);
  for (Eigen::Index i = 0; i < k; ++i) r(i) = ur(gen);
  return SieveParamsd(ud(gen), pacf_to_ar(r));
}

MonteCarloResult table_run(const std::string& model, Eigen::Index T) {
  TestConfig cfg;
  cfg.M = 4;
  return monte_carlo(model, T, cfg, kReps, kSeed);
}

std::string data_file(const std::string& name) { return std::string(LRD_DATA_DIR) + "/" + name; }

}  // namespace

int main() {
  criterion(1, "pure-memory Fisher information equals pi^2/6", [] {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double d : {0.0, 0.2, 0.45})
      worst = std::max(worst, std::abs(gamma_matrix(SieveParamsd(d, Eigen::VectorXd(0)))(0, 0) - kPi * kPi / 6.0));
    const double secs = seconds_since(t0);
    return Outcome{worst < 1e-6 && secs < 1.0, fmt("max error %.2e, %.3f s", worst, secs)};
  });

  criterion(2, "analytic log-density gradient vs central differences", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> ul(0.01, kPi);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const SieveParamsd p = random_params(gen, trial % 4);
      const double l = ul(gen);
      const Eigen::VectorXd g = grad_log_density(p, l);
      const Eigen::VectorXd th = p.theta();
      for (Eigen::Index i = 0; i < th.size(); ++i) {
        Eigen::VectorXd up = th, dn = th;
        up(i) += 1e-6;
        dn(i) -= 1e-6;
        const double fd = (std::log(density_unchecked(SieveParamsd::from_theta(up), l)) -
                           std::log(density_unchecked(SieveParamsd::from_theta(dn), l))) / 2e-6;
        worst = std::max(worst, std::abs(fd - g(i)) / std::max(std::abs(g(i)), 1e-3));
      }
    }
    const double secs = seconds_since(t0);
    return Outcome{worst < 1e-5 && secs < 1.0, fmt("max relative error %.2e, %.3f s", worst, secs)};
  });

  criterion(3, "energy identity on 1000 random blocks", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 gen(3);
    std::normal_distribution<double> z;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Eigen::Index N = 2 * (4 + static_cast<Eigen::Index>(gen() % 125));
      const Eigen::Index M = 1 + static_cast<Eigen::Index>(gen() % 4);
      Eigen::VectorXd x(N * M);
      for (auto& v : x) v = 10.0 * z(gen) + 3.0;
      const Eigen::VectorXd mean = local_window_means(x, std::min(default_mean_window(N), x.size()), MeanEdge::truncate);
      const Eigen::Index j = 1 + static_cast<Eigen::Index>(gen() % M);
      const LocalPeriodogram pg = local_periodogram(x, mean, N, j);
      const Eigen::VectorXd r = block_residuals(x, mean, N, j, BlockLayout::contiguous);
      const double all = pg.zero_ordinate + 2.0 * pg.ordinates.head(N / 2 - 1).sum() + pg.ordinates(N / 2 - 1);
      const double lhs = 2.0 * kPi / static_cast<double>(N) * all;
      const double rhs = r.squaredNorm() / static_cast<double>(N);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    const double secs = seconds_since(t0);
    return Outcome{worst < 1e-8 && secs < 5.0, fmt("max relative error %.2e, %.3f s", worst, secs)};
  });

  criterion(4, "plant-and-recover (d, a1) = (0.2, 0.4)", [] {
    const auto t0 = std::chrono::steady_clock::now();
    Eigen::VectorXd a(1);
    a << 0.4;
    const SieveParamsd truth(0.2, a);
    const Eigen::ArrayXd l = fourier_frequencies(256);
    Eigen::ArrayXd I(l.size());
    for (Eigen::Index i = 0; i < l.size(); ++i) I(i) = eval_density(truth, l(i));
    const WhittleFit fit = fit_whittle(WhittleData(I, 256, 1), 1);
    const double err = std::max(std::abs(fit.params.d - 0.2), std::abs(fit.params.ar(0) - 0.4));
    const double secs = seconds_since(t0);
    return Outcome{fit.converged && err < 1e-4 && secs < 1.0,
                   fmt("d=%.7f a1=%.7f, max error %.2e, %.3f s", fit.params.d, fit.params.ar(0), err, secs)};
  });

  criterion(5, "level, tvAR(1) smooth mean, T=1024 M=4 (0.046 / 0.072 +- 0.02)", [] {
    const MonteCarloResult r = table_run("tvar1_smooth_mean", 1024);
    return Outcome{std::abs(r.rate_5 - 0.046) <= 0.02 && std::abs(r.rate_10 - 0.072) <= 0.02,
                   fmt("rate_5=%.3f rate_10=%.3f over %.0f reps", r.rate_5, r.rate_10,
                       static_cast<double>(r.reps - r.failures))};
  });

  criterion(6, "level, tvAR(1) jump mean, T=1024 M=4 (0.077 +- 0.025)", [] {
    const MonteCarloResult r = table_run("tvar1_jump_mean", 1024);
    return Outcome{std::abs(r.rate_5 - 0.077) <= 0.025,
                   fmt("rate_5=%.3f rate_10=%.3f", r.rate_5, r.rate_10)};
  });

  criterion(7, "power, tvFARIMA(1,d,0), T=1024 M=4 (0.746 +- 0.05), monotone in T", [] {
    const double r256 = table_run("tvfarima_1_d_0", 256).rate_5;
    const double r512 = table_run("tvfarima_1_d_0", 512).rate_5;
    const double r1024 = table_run("tvfarima_1_d_0", 1024).rate_5;
    const bool monotone = r256 <= r512 + 0.03 && r512 <= r1024 + 0.03;
    return Outcome{std::abs(r1024 - 0.746) <= 0.05 && monotone,
                   fmt("rate_5 at T=256/512/1024: %.3f / %.3f / %.3f", r256, r512, r1024)};
  });

  criterion(8, "power, stationary FARIMA(1,d,1), T=1024 M=4 (0.328 +- 0.05)", [] {
    const MonteCarloResult r = table_run("farima_1_d_1", 1024);
    return Outcome{std::abs(r.rate_5 - 0.328) <= 0.05, fmt("rate_5=%.3f rate_10=%.3f", r.rate_5, r.rate_10)};
  });

  criterion(9, "Nile flows, M=4: statistic in [-2.3, -1.5], no rejection", [] {
    const auto t0 = std::chrono::steady_clock::now();
    TestConfig cfg;
    cfg.M = 4;
    const TestReport rep = run_test(read_csv_column(data_file("nile.csv")), cfg);
    const double secs = seconds_since(t0);
    const bool ok = rep.statistic >= -2.3 && rep.statistic <= -1.5 && !rep.reject && secs < 1.0;
    return Outcome{ok, fmt("N=%.0f k=%.0f statistic=%.3f p=%.3f", static_cast<double>(rep.N),
                           static_cast<double>(rep.k), rep.statistic, rep.p_value) +
                           (rep.reject ? ", rejected" : ", not rejected") + fmt(", %.3f s", secs)};
  });

  criterion(10, "squared log returns, general variance: statistic > 3 for M=4 and M=8", [] {
    const std::vector<double> x = read_csv_column(data_file("sp500_sq_logret.csv"));
    bool ok = true;
    std::string detail;
    for (Eigen::Index M : {4, 8}) {
      TestConfig cfg;
      cfg.M = M;
      cfg.variance_mode = VarianceMode::general;
      const TestReport rep = run_test(x, cfg);
      ok = ok && rep.statistic > 3.0 && rep.reject;
      if (!detail.empty()) detail += "; ";
      detail += fmt("M=%.0f: k=%.0f statistic=%.3f p=%.2e", static_cast<double>(M),
                    static_cast<double>(rep.k), rep.statistic, rep.p_value);
    }
    return Outcome{ok, detail};
  });

  criterion(11, "scale invariance of F_hat, statistic and decision (c = 1e-3, 1e3)", [] {
    double worst = 0.0;
    bool same = true;
    const auto& names = model_names();
    for (std::uint64_t r = 0; r < 20; ++r) {
      const Eigen::VectorXd x = simulate_named_model(names[r % names.size()], 1024, 11, r);
      TestConfig cfg;
      cfg.M = 4;
      const TestReport base = run_test(x, cfg);
      for (double c : {1e-3, 1e3}) {
        const TestReport s = run_test(Eigen::VectorXd(c * x), cfg);
        worst = std::max({worst, std::abs(s.F_hat - base.F_hat), std::abs(s.statistic - base.statistic)});
        same = same && s.reject == base.reject;
      }
    }
    return Outcome{worst < 1e-8 && same, fmt("max change %.2e", worst) + (same ? ", decisions equal" : ", decision changed")};
  });

  criterion(12, "seeded simulate + test bit-identical across thread counts", [] {
    TestConfig cfg;
    cfg.N = 256;
    const unsigned many = std::max(4u, std::thread::hardware_concurrency());
    const MonteCarloResult a = monte_carlo("tvfarima_1_d_0", 1024, cfg, 64, 7, 1);
    const MonteCarloResult b = monte_carlo("tvfarima_1_d_0", 1024, cfg, 64, 7, many);
    bool same = a.p_values.size() == b.p_values.size();
    for (std::size_t r = 0; same && r < a.p_values.size(); ++r)
      same = std::memcmp(&a.p_values[r], &b.p_values[r], sizeof(double)) == 0;
    const Eigen::VectorXd x1 = simulate_named_model("farima_1_d_1", 1024, 7, 3);
    const Eigen::VectorXd x2 = simulate_named_model("farima_1_d_1", 1024, 7, 3);
    same = same && x1 == x2;
    return Outcome{same, fmt("64 replications, 1 vs %.0f threads", static_cast<double>(many)) +
                             (same ? ", identical" : ", differ")};
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
