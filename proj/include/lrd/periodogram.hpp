#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lrd {

/// Non-owning view of an observed series X_1, ..., X_T. Indices outside
/// 1..T read as 0.
class SeriesView {
public:
  SeriesView(const double* data, Eigen::Index size) : data_(data), size_(size) {}
  SeriesView(const Eigen::VectorXd& v) : data_(v.data()), size_(v.size()) {}  // NOLINT
  SeriesView(std::span<const double> s)  // NOLINT
      : data_(s.data()), size_(static_cast<Eigen::Index>(s.size())) {}
  SeriesView(const std::vector<double>& v)  // NOLINT
      : data_(v.data()), size_(static_cast<Eigen::Index>(v.size())) {}

  Eigen::Index size() const { return size_; }

  /// X_t with 1-based t; zero outside the sample.
  double at(Eigen::Index t) const { return (t >= 1 && t <= size_) ? data_[t - 1] : 0.0; }

  Eigen::Map<const Eigen::VectorXd> values() const { return {data_, size_}; }

  SeriesView head(Eigen::Index n) const { return {data_, std::min(n, size_)}; }

private:
  const double* data_;
  Eigen::Index size_;
};

/// How the local-window mean treats windows that extend past the sample.
enum class MeanEdge {
  zero_pad,   // out-of-range observations count as 0, divisor stays L
  truncate,   // average over the in-range observations only
  shrink,     // near the ends, shrink the window symmetrically so it stays centred
  local_linear,  // near the ends, evaluate a least-squares line over the in-range values
};

/// Block midpoint convention.
enum class BlockLayout {
  literal,     // t_j = (N - 1) j + N/2
  contiguous,  // t_j = N (j - 1) + N/2, blocks tile 1..T exactly
};

/// Mean of X_{t-L/2+1}, ..., X_{t+L/2}. L must be even with 2 <= L <= T.
double local_window_mean(SeriesView series, Eigen::Index L, Eigen::Index t,
                         MeanEdge edge = MeanEdge::zero_pad);

/// local_window_mean at every t = 1..T (entry t-1), in O(T).
Eigen::VectorXd local_window_means(SeriesView series, Eigen::Index L,
                                   MeanEdge edge = MeanEdge::zero_pad);

/// Window length rule L = N^1.05 rounded to the nearest even integer, at least N + 2.
Eigen::Index default_mean_window(Eigen::Index N);

/// Midpoint t_j of block j (1-based) of length N.
Eigen::Index block_midpoint(Eigen::Index N, Eigen::Index j, BlockLayout layout);

/// Mean-corrected residuals X_t - mu(t) over the N indices of block j; indices
/// outside 1..T contribute 0. `mean` holds mu(t) for t = 1..T.
Eigen::VectorXd block_residuals(SeriesView series, const Eigen::VectorXd& mean, Eigen::Index N,
                                Eigen::Index j, BlockLayout layout);

/// Mean-corrected periodogram of one block at lambda_p = 2 pi p / N, p = 1..N/2.
struct LocalPeriodogram {
  Eigen::ArrayXd ordinates;
  double zero_ordinate = 0.0;  // p = 0, excluded from likelihood sums
  Eigen::Index block = 0;      // j
  Eigen::Index midpoint = 0;   // t_j
  double u = 0.0;              // t_j / T
  Eigen::Index N = 0;

  Eigen::Index size() const { return ordinates.size(); }
  Eigen::ArrayXd frequencies() const;
};

/// Periodogram |(2 pi n)^{-1/2} sum_p r_p e^{-i p lambda}|^2 at all n Fourier
/// frequencies 2 pi p / n, p = 0..n-1.
Eigen::ArrayXd periodogram_all(const Eigen::VectorXd& residuals);

LocalPeriodogram local_periodogram(SeriesView series, const Eigen::VectorXd& mean,
                                   Eigen::Index N, Eigen::Index j,
                                   BlockLayout layout = BlockLayout::contiguous);

/// Full-sample mean-corrected periodogram at 2 pi j / T, j = 1..floor(T/2),
/// normalized by (2 pi T)^{-1}.
Eigen::ArrayXd full_periodogram(SeriesView series, const Eigen::VectorXd& mean);

/// Fourier frequencies 2 pi p / n for p = 1..floor(n/2).
Eigen::ArrayXd fourier_frequencies(Eigen::Index n);

}  // namespace lrd
