#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <doctest.h>

#include "lrd/error.hpp"
#include "lrd/rng.hpp"
#include "lrd/simulate.hpp"
#include "support.hpp"

using namespace lrd;
using lrd::testing::gaussian_noise;

namespace {

// Log-log slope over lags 50..200 of the autocorrelation averaged over 20
// stationary FARIMA(0, 0.3, 0) paths of length 8192.
double acf_slope(bool centred, Eigen::Index burn_in) {
  TvProcessSpec spec;
  spec.d = [](double) { return 0.3; };
  spec.stationary = true;
  spec.burn_in = burn_in;
  const Eigen::Index T = 8192;
  const int paths = 20;
  Eigen::VectorXd acf = Eigen::VectorXd::Zero(201);
  for (int r = 0; r < paths; ++r) {
    const Eigen::VectorXd x = simulate_tvfarima(spec, T, 2718, static_cast<std::uint64_t>(r));
    Eigen::VectorXd g(201);
    if (centred) {
      g = sample_acvf(x, 200);
    } else {
      for (Eigen::Index h = 0; h <= 200; ++h) g(h) = x.head(T - h).dot(x.tail(T - h)) / static_cast<double>(T);
    }
    acf += g / g(0) / paths;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int h = 50; h <= 200; ++h) {
    if (!(acf(h) > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double lx = std::log(static_cast<double>(h)), ly = std::log(acf(h));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_SUITE("random numbers") {
  TEST_CASE("counter generator is a pure function of its key and counter") {
    const CounterRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    CHECK(a.normal(10, 0) == b.normal(10, 0));
    CHECK(a.normal(10, 0) != c.normal(10, 0));
    CHECK(a.normal(10, 0) != d.normal(10, 0));
    CHECK(a.normal(10, 0) != a.normal(11, 0));
    CHECK(a.normal(10, 0) != a.normal(10, 1));
  }

  TEST_CASE("uniform and normal moments") {
    const CounterRng rng(1, 0);
    const int n = 200000;
    double su = 0.0, sz = 0.0, sz2 = 0.0;
    double lo = 1.0, hi = 0.0;
    for (int t = 0; t < n; ++t) {
      const double u = rng.uniform(static_cast<std::uint64_t>(t), 0);
      lo = std::min(lo, u);
      hi = std::max(hi, u);
      su += u;
      const double z = rng.normal(static_cast<std::uint64_t>(t), 1);
      sz += z;
      sz2 += z * z;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(su / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(sz / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(sz2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  }

  TEST_CASE("Student-t innovations have unit variance") {
    for (double nu : {3.0, 5.0, 10.0}) {
      const CounterRng rng(2, 0);
      Innovation law;
      law.law = Innovation::Law::student_t;
      law.nu = nu;
      const int n = 200000;
      double s2 = 0.0;
      for (int t = 0; t < n; ++t) {
        const double z = draw_innovation(rng, law, static_cast<std::uint64_t>(t));
        s2 += z * z;
      }
      CHECK(std::abs(s2 / n - 1.0) < (nu < 4.0 ? 0.1 : 0.03));
    }
    Innovation bad;
    bad.law = Innovation::Law::student_t;
    bad.nu = 2.0;
    CHECK_THROWS_AS(draw_innovation(CounterRng(1, 0), bad, 0), ConfigError);
  }
}

TEST_SUITE("fractional coefficients") {
  TEST_CASE("closed forms") {
    const FracCoeffs zero = frac_coeffs(0.0, 5);
    CHECK(zero.coeffs(0) == 1.0);
    CHECK(zero.coeffs.tail(5).cwiseAbs().maxCoeff() == 0.0);
    for (double d : {-0.3, 0.1, 0.3, 0.45}) CHECK(frac_coeffs(d, 1).coeffs(1) == doctest::Approx(d));
    CHECK(frac_coeffs(0.3, 2).coeffs(2) == doctest::Approx(0.195).epsilon(1e-15));
    CHECK(frac_coeffs(0.2, 0).coeffs.size() == 1);
  }

  TEST_CASE("recursion matches gamma-function ratios") {
    const double d = 0.37;
    const FracCoeffs c = frac_coeffs(d, 60);
    for (int k = 1; k <= 60; ++k)
      CHECK(c.coeffs(k) == doctest::Approx(std::exp(std::lgamma(k + d) - std::lgamma(d) -
                                                    std::lgamma(k + 1.0)))
                               .epsilon(1e-12));
  }

  TEST_CASE("squared partial sums increase with d") {
    for (Eigen::Index n : {5, 50, 500}) {
      double prev = -1.0;
      for (double d = 0.0; d < 0.5; d += 0.05) {
        const double s = frac_coeffs(d, n).coeffs.squaredNorm();
        CHECK(s > prev);
        prev = s;
      }
    }
  }

  TEST_CASE("domain") {
    CHECK_THROWS_AS(frac_coeffs(0.5, 3), DomainError);
    CHECK_THROWS_AS(frac_coeffs(0.7, 3), DomainError);
  }
}

TEST_SUITE("simulator") {
  TEST_CASE("identity filter returns the innovation stream") {
    const Eigen::VectorXd x = simulate_tvfarima(TvProcessSpec{}, 300, 99, 5);
    const CounterRng rng(99, 5);
    for (Eigen::Index t = 0; t < 300; ++t)
      CHECK(x(t) == draw_innovation(rng, Innovation{}, static_cast<std::uint64_t>(t)));
  }

  TEST_CASE("AR(1) recursion and time-varying scale") {
    TvProcessSpec spec;
    spec.ar = {[](double u) { return -0.5 * u; }};
    spec.innovation.sigma = [](double u) { return 1.0 + u; };
    spec.mean = [](double u) { return 10.0 * u; };
    const Eigen::Index T = 200;
    const Eigen::VectorXd x = simulate_tvfarima(spec, T, 4, 0);
    const CounterRng rng(4, 0);
    double y = 0.0;
    for (Eigen::Index t = 1; t <= T; ++t) {
      const double u = static_cast<double>(t) / T;
      y = 0.5 * u * y + (1.0 + u) * draw_innovation(rng, Innovation{}, static_cast<std::uint64_t>(t - 1));
      CHECK(x(t - 1) == doctest::Approx(10.0 * u + y).epsilon(1e-13));
    }
  }

  TEST_CASE("intercept placement feeds the mean through the AR filter") {
    TvProcessSpec spec;
    spec.ar = {[](double) { return -0.5; }};
    spec.mean = [](double) { return 1.0; };
    spec.mean_placement = TvProcessSpec::MeanPlacement::intercept;
    const Eigen::VectorXd x = simulate_tvfarima(spec, 4096, 5, 0);
    CHECK(x.tail(2048).mean() == doctest::Approx(2.0).epsilon(0.1));
  }

  TEST_CASE("fractional filter uses the exact finite past") {
    TvProcessSpec spec;
    spec.d = [](double) { return 0.25; };
    const Eigen::Index T = 64;
    const Eigen::VectorXd x = simulate_tvfarima(spec, T, 6, 0);
    const FracCoeffs b = frac_coeffs(0.25, T);
    const CounterRng rng(6, 0);
    for (Eigen::Index t = 1; t <= T; ++t) {
      double w = 0.0;
      for (Eigen::Index l = 0; l < t; ++l)
        w += b.coeffs(l) * draw_innovation(rng, Innovation{}, static_cast<std::uint64_t>(t - 1 - l));
      CHECK(x(t - 1) == doctest::Approx(w).epsilon(1e-12));
    }
  }

  TEST_CASE("known-mean autocorrelation decays with slope 2d - 1") {
    // A burn-in as long as the sample makes the finite-past start negligible at lags <= 200.
    const double slope = acf_slope(/*centred=*/false, 8192);
    MESSAGE("fitted slope " << slope);
    CHECK(std::abs(slope - (2.0 * 0.3 - 1.0)) < 0.15);
  }

  TEST_CASE("centred sample autocorrelation decays with slope 2d - 1") {
    // Subtracting the sample mean lowers every long-lag autocorrelation by
    // roughly var(mean) / gamma(0), which for d = 0.3 and T = 8192 is a large
    // fraction of rho(200); the fitted slope comes out markedly steeper.
    const double slope = acf_slope(/*centred=*/true, -1);
    MESSAGE("fitted slope " << slope);
    CHECK(std::abs(slope - (2.0 * 0.3 - 1.0)) < 0.15);
  }

  TEST_CASE("invalid specifications name the offending time") {
    TvProcessSpec unstable;
    unstable.ar = {[](double u) { return 2.0 * u; }};
    try {
      simulate_tvfarima(unstable, 100, 1, 0);
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("u=") != std::string::npos);
    }
    TvProcessSpec strong;
    strong.d = [](double u) { return 0.3 + 0.3 * u; };
    CHECK_THROWS_AS(simulate_tvfarima(strong, 100, 1, 0), ConfigError);
    TvProcessSpec flat;
    flat.innovation.sigma = [](double) { return 0.0; };
    CHECK_THROWS_AS(simulate_tvfarima(flat, 100, 1, 0), ConfigError);
    CHECK_THROWS_AS(simulate_tvfarima(TvProcessSpec{}, 1, 1, 0), ConfigError);
  }

  TEST_CASE("burn-in only for stationary specifications") {
    TvProcessSpec s;
    CHECK(default_burn_in(s) == 0);
    s.stationary = true;
    CHECK(default_burn_in(s) == 512);
    s.truncation = 40000;
    CHECK(default_burn_in(s) == 800);
  }
}

TEST_SUITE("named models") {
  TEST_CASE("all names resolve and are deterministic") {
    for (const auto& name : model_names()) {
      const Eigen::VectorXd a = simulate_named_model(name, 512, 12, 0);
      const Eigen::VectorXd b = simulate_named_model(name, 512, 12, 0);
      CHECK(a.size() == 512);
      CHECK(a == b);
      CHECK(a.allFinite());
    }
    CHECK_THROWS_AS(named_model("arch1"), ConfigError);
  }

  TEST_CASE("coefficient functions at the end of the sample") {
    const TvProcessSpec s = named_model("tvfarima_1_d_0");
    CHECK(s.d(1.0) == doctest::Approx(0.4));
    REQUIRE(s.ar.size() == 1);
    CHECK(s.ar[0](1.0) == doctest::Approx(0.2));
    const TvProcessSpec m = named_model("tvma1");
    CHECK(m.ma[0](0.5) == doctest::Approx(0.55));
    const TvProcessSpec f = named_model("farima_1_d_1");
    CHECK(f.stationary);
    CHECK(f.d(0.3) == 0.1);
  }

  TEST_CASE("jump mean shifts the level at mid-sample") {
    const TvProcessSpec s = named_model("tvar1_jump_mean");
    CHECK(s.mean(0.5) == 0.65);
    CHECK(s.mean(0.5 + 1e-9) == 1.3);
    double first = 0.0, second = 0.0;
    for (std::uint64_t r = 0; r < 50; ++r) {
      const Eigen::VectorXd x = simulate_named_model("tvar1_jump_mean", 1024, 13, r);
      first += x.head(512).mean() / 50.0;
      second += x.tail(512).mean() / 50.0;
    }
    CHECK(first == doctest::Approx(0.65).epsilon(0.1));
    CHECK(second - first == doctest::Approx(0.65).epsilon(0.15));
  }
}

TEST_SUITE("monte carlo") {
  TEST_CASE("independent of the worker count") {
    TestConfig cfg;
    cfg.M = 4;
    const MonteCarloResult one = monte_carlo("tvma1", 512, cfg, 12, 77, 1);
    const MonteCarloResult many = monte_carlo("tvma1", 512, cfg, 12, 77, 4);
    REQUIRE(one.p_values.size() == 12);
    for (std::size_t r = 0; r < 12; ++r) CHECK(one.p_values[r] == many.p_values[r]);
    CHECK(one.rate_5 == many.rate_5);
    CHECK(one.failures == 0);
  }

  TEST_CASE("single replication has rate 0 or 1") {
    TestConfig cfg;
    cfg.N = 128;
    const MonteCarloResult r = monte_carlo("tvfarima_1_d_0", 512, cfg, 1, 3);
    CHECK((r.rate_5 == 0.0 || r.rate_5 == 1.0));
    CHECK((r.rate_10 == 0.0 || r.rate_10 == 1.0));
    CHECK_THROWS_AS(monte_carlo("tvma1", 512, cfg, 0, 3), ConfigError);
  }
}

TEST_SUITE("sample autocovariance") {
  TEST_CASE("constant series and lag zero") {
    CHECK(sample_acvf(Eigen::VectorXd(Eigen::VectorXd::Constant(50, 2.0)), 10).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd x = gaussian_noise(500, 3);
    const double var = (x.array() - x.mean()).square().mean();
    CHECK(sample_acvf(x, 0)(0) == doctest::Approx(var).epsilon(1e-14));
    CHECK_THROWS_AS(sample_acvf(x, 500), ConfigError);
  }

  TEST_CASE("white noise stays inside the Bartlett band") {
    const Eigen::Index T = 4096;
    const Eigen::VectorXd g = sample_acvf(simulate_tvfarima(TvProcessSpec{}, T, 1, 0), 50);
    int inside = 0;
    for (int h = 1; h <= 50; ++h) inside += std::abs(g(h)) < 4.0 / std::sqrt(static_cast<double>(T));
    CHECK(inside >= 48);
  }
}
