#include "lrd/periodogram.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "lrd/error.hpp"

namespace lrd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kParsevalTolerance = 1e-8;

void check_window(SeriesView series, Eigen::Index L) {
  if (L < 2 || L % 2 != 0) throw ConfigError("mean window L must be even and >= 2");
  if (L > series.size()) throw ConfigError("mean window L exceeds the sample length");
}

}  // namespace

namespace {

// Half-width of the centred window at t; the window is t-h+1..t+h (just X_T at t = T).
Eigen::Index shrunk_half_width(Eigen::Index L, Eigen::Index t, Eigen::Index T) {
  return std::min({L / 2, t, T - t});
}

// Least-squares line through (s, X_s), s = lo..hi, evaluated at t; sums are
// sum X and sum (s - t) X over the window.
double line_at(double sum_x, double sum_cx, Eigen::Index lo, Eigen::Index hi, Eigen::Index t) {
  const double n = static_cast<double>(hi - lo + 1);
  const double a = static_cast<double>(lo - t), b = static_cast<double>(hi - t);
  const double sc = (a + b) * n / 2.0;  // sum (s - t)
  const double scc = (b * (b + 1) * (2 * b + 1) - (a - 1) * a * (2 * a - 1)) / 6.0;
  const double det = n * scc - sc * sc;
  if (n < 2.0 || det <= 0.0) return sum_x / n;
  return (scc * sum_x - sc * sum_cx) / det;
}

}  // namespace

double local_window_mean(SeriesView series, Eigen::Index L, Eigen::Index t, MeanEdge edge) {
  check_window(series, L);
  if (t < 1 || t > series.size()) throw ConfigError("time index outside 1..T");
  if (edge == MeanEdge::shrink) {
    const Eigen::Index h = shrunk_half_width(L, t, series.size());
    if (h == 0) return series.at(t);
    double sum = 0.0;
    for (Eigen::Index s = t - h + 1; s <= t + h; ++s) sum += series.at(s);
    return sum / static_cast<double>(2 * h);
  }
  if (edge == MeanEdge::local_linear) {
    const Eigen::Index lo = std::max<Eigen::Index>(t - L / 2 + 1, 1);
    const Eigen::Index hi = std::min<Eigen::Index>(t + L / 2, series.size());
    double sx = 0.0, scx = 0.0;
    for (Eigen::Index s = lo; s <= hi; ++s) {
      sx += series.at(s);
      scx += static_cast<double>(s - t) * series.at(s);
    }
    if (hi - lo + 1 == L) return sx / static_cast<double>(L);
    return line_at(sx, scx, lo, hi, t);
  }
  double sum = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index s = t - L / 2 + 1; s <= t + L / 2; ++s) {
    sum += series.at(s);
    if (s >= 1 && s <= series.size()) ++count;
  }
  return edge == MeanEdge::zero_pad ? sum / static_cast<double>(L)
                                    : sum / static_cast<double>(count);
}

Eigen::VectorXd local_window_means(SeriesView series, Eigen::Index L, MeanEdge edge) {
  check_window(series, L);
  const Eigen::Index T = series.size();
  // prefix(i) = X_1 + ... + X_i, clamped at both ends.
  Eigen::VectorXd prefix(T + 1), prefix_s(T + 1);  // prefix_s(i) = sum_{s<=i} s X_s
  prefix(0) = 0.0;
  prefix_s(0) = 0.0;
  for (Eigen::Index i = 1; i <= T; ++i) {
    prefix(i) = prefix(i - 1) + series.at(i);
    prefix_s(i) = prefix_s(i - 1) + static_cast<double>(i) * series.at(i);
  }
  Eigen::VectorXd out(T);
  for (Eigen::Index t = 1; t <= T; ++t) {
    Eigen::Index lo = std::max<Eigen::Index>(t - L / 2 + 1, 1);
    Eigen::Index hi = std::min<Eigen::Index>(t + L / 2, T);
    if (edge == MeanEdge::shrink) {
      const Eigen::Index h = shrunk_half_width(L, t, T);
      lo = h == 0 ? t : t - h + 1;
      hi = h == 0 ? t : t + h;
    }
    const double sum = prefix(hi) - prefix(lo - 1);
    if (edge == MeanEdge::local_linear && hi - lo + 1 < L) {
      const double scx = prefix_s(hi) - prefix_s(lo - 1) - static_cast<double>(t) * sum;
      out(t - 1) = line_at(sum, scx, lo, hi, t);
      continue;
    }
    out(t - 1) = edge == MeanEdge::zero_pad ? sum / static_cast<double>(L)
                                            : sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

Eigen::Index default_mean_window(Eigen::Index N) {
  const double raw = std::pow(static_cast<double>(N), 1.05);
  Eigen::Index L = 2 * static_cast<Eigen::Index>(std::llround(raw / 2.0));
  return std::max(L, N + 2);
}

Eigen::Index block_midpoint(Eigen::Index N, Eigen::Index j, BlockLayout layout) {
  return layout == BlockLayout::literal ? (N - 1) * j + N / 2 : N * (j - 1) + N / 2;
}

Eigen::VectorXd block_residuals(SeriesView series, const Eigen::VectorXd& mean, Eigen::Index N,
                                Eigen::Index j, BlockLayout layout) {
  if (mean.size() != series.size()) throw ConfigError("mean estimate length differs from T");
  const Eigen::Index start = block_midpoint(N, j, layout) - N / 2 + 1;
  Eigen::VectorXd r(N);
  for (Eigen::Index p = 0; p < N; ++p) {
    const Eigen::Index t = start + p;
    r(p) = (t >= 1 && t <= series.size()) ? series.at(t) - mean(t - 1) : 0.0;
  }
  return r;
}

Eigen::ArrayXd LocalPeriodogram::frequencies() const { return fourier_frequencies(N); }

Eigen::ArrayXd fourier_frequencies(Eigen::Index n) {
  Eigen::ArrayXd out(n / 2);
  for (Eigen::Index p = 1; p <= n / 2; ++p) out(p - 1) = kTwoPi * p / static_cast<double>(n);
  return out;
}

Eigen::ArrayXd periodogram_all(const Eigen::VectorXd& residuals) {
  const Eigen::Index n = residuals.size();
  Eigen::FFT<double> fft;
  std::vector<double> in(residuals.data(), residuals.data() + n);
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  Eigen::ArrayXd I(n);
  const double scale = 1.0 / (kTwoPi * static_cast<double>(n));
  for (Eigen::Index p = 0; p < n; ++p) I(p) = std::norm(out[p]) * scale;
  return I;
}

LocalPeriodogram local_periodogram(SeriesView series, const Eigen::VectorXd& mean,
                                   Eigen::Index N, Eigen::Index j, BlockLayout layout) {
  if (N < 2 || N % 2 != 0) throw ConfigError("block length N must be even and >= 2");
  if (j < 1 || N * j > series.size()) throw ConfigError("block index outside 1..M");
  const Eigen::VectorXd r = block_residuals(series, mean, N, j, layout);
  const Eigen::ArrayXd all = periodogram_all(r);

  // Energy identity: (2 pi / N) sum_p I_p = (1/N) sum r^2.
  const double lhs = kTwoPi / static_cast<double>(N) * all.sum();
  const double rhs = r.squaredNorm() / static_cast<double>(N);
  if (std::abs(lhs - rhs) > kParsevalTolerance * std::max(rhs, 1e-300) && rhs > 0.0)
    throw NumericalError("periodogram violates the energy identity");

  LocalPeriodogram out;
  out.ordinates = all.segment(1, N / 2);
  out.zero_ordinate = all(0);
  out.block = j;
  out.midpoint = block_midpoint(N, j, layout);
  out.u = static_cast<double>(out.midpoint) / static_cast<double>(series.size());
  out.N = N;
  return out;
}

Eigen::ArrayXd full_periodogram(SeriesView series, const Eigen::VectorXd& mean) {
  const Eigen::Index T = series.size();
  if (T < 8) throw ConfigError("full periodogram needs T >= 8");
  if (mean.size() != T) throw ConfigError("mean estimate length differs from T");
  const Eigen::VectorXd r = series.values() - mean;
  return periodogram_all(r).segment(1, T / 2);
}

}  // namespace lrd
