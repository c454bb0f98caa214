#include "lrd/spectral.hpp"

#include <Eigen/Eigenvalues>

#include "lrd/error.hpp"

namespace lrd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_frequency(const SieveParamsd& p, double lambda) {
  if (!std::isfinite(lambda)) throw DomainError("non-finite frequency");
  if (lambda == 0.0 && p.d != 0.0)
    throw DomainError("spectral density has a pole or zero at frequency 0 when d != 0");
}

}  // namespace

double eval_density(const SieveParamsd& params, double lambda) {
  validate(params);
  check_frequency(params, lambda);
  if (lambda == 0.0) return 1.0 / (kTwoPi * ar_transfer_abs2<double>(params.ar, 0.0));
  const double f = density_unchecked(params, lambda);
  if (!std::isfinite(f) || f <= 0.0) throw NumericalError("density is not finite and positive");
  return f;
}

Eigen::VectorXd grad_log_density(const SieveParamsd& params, double lambda) {
  validate(params);
  if (!std::isfinite(lambda) || lambda == 0.0)
    throw DomainError("log-density gradient is singular at frequency 0");
  const Eigen::Index k = params.k();
  Eigen::VectorXd g(k + 1);
  g(0) = -log_abs2_one_minus_exp(lambda);
  // A(e^{-i lambda}) = re - i im, re = 1 + sum a_m cos(m lambda), im = sum a_m sin(m lambda).
  double re = 1.0, im = 0.0;
  for (Eigen::Index m = 1; m <= k; ++m) {
    re += params.ar(m - 1) * std::cos(m * lambda);
    im += params.ar(m - 1) * std::sin(m * lambda);
  }
  const double abs2 = re * re + im * im;
  for (Eigen::Index j = 1; j <= k; ++j)
    g(j) = -2.0 * (re * std::cos(j * lambda) + im * std::sin(j * lambda)) / abs2;
  return g;
}

SpectralTable::SpectralTable(Eigen::ArrayXd lambda, Eigen::Index max_order)
    : lambda_(std::move(lambda)),
      log_abs2_(lambda_.size()),
      cos_(lambda_.size(), max_order),
      sin_(lambda_.size(), max_order) {
  for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
    if (lambda_(i) == 0.0) throw DomainError("spectral table must not contain frequency 0");
    log_abs2_(i) = log_abs2_one_minus_exp(lambda_(i));
    for (Eigen::Index j = 0; j < max_order; ++j) {
      cos_(i, j) = std::cos((j + 1) * lambda_(i));
      sin_(i, j) = std::sin((j + 1) * lambda_(i));
    }
  }
}

void SpectralTable::ar_parts(const Eigen::VectorXd& a, Eigen::ArrayXd& re,
                             Eigen::ArrayXd& im) const {
  const Eigen::Index k = a.size();
  if (k > max_order()) throw ConfigError("AR order exceeds spectral table order");
  if (k == 0) {
    re = Eigen::ArrayXd::Ones(size());
    im = Eigen::ArrayXd::Zero(size());
    return;
  }
  re = 1.0 + (cos_.leftCols(k) * a).array();
  im = (sin_.leftCols(k) * a).array();
}

Eigen::ArrayXd SpectralTable::log_density(const SieveParamsd& p) const {
  Eigen::ArrayXd re, im;
  ar_parts(p.ar, re, im);
  return -p.d * log_abs2_ - std::log(kTwoPi) - (re * re + im * im).log();
}

void SpectralTable::log_density_and_gradient(const SieveParamsd& p, Eigen::ArrayXd& log_f,
                                             Eigen::MatrixXd& grad) const {
  const Eigen::Index k = p.k();
  Eigen::ArrayXd re, im;
  ar_parts(p.ar, re, im);
  const Eigen::ArrayXd abs2 = re * re + im * im;
  log_f = -p.d * log_abs2_ - std::log(kTwoPi) - abs2.log();
  grad.resize(size(), k + 1);
  grad.col(0) = -log_abs2_.matrix();
  for (Eigen::Index j = 0; j < k; ++j)
    grad.col(j + 1) =
        (-2.0 * (re * cos_.col(j).array() + im * sin_.col(j).array()) / abs2).matrix();
}

namespace {

// Smooth part s(lambda) of -log(2 - 2 cos lambda) = -2 log(lambda) + s(lambda).
Eigen::ArrayXd smooth_memory_part(const Eigen::ArrayXd& lambda) {
  const Eigen::ArrayXd half = 0.5 * lambda;
  return -2.0 * (half.sin() / half).log();
}

// AR components of grad log f at the grid nodes, one column per coefficient.
Eigen::MatrixXd ar_gradient(const SieveParamsd& p, const QuadratureGrid& grid) {
  const SpectralTable table(grid.nodes(), p.k());
  Eigen::ArrayXd log_f;
  Eigen::MatrixXd grad;
  table.log_density_and_gradient(p, log_f, grad);
  return grad.rightCols(p.k());
}

}  // namespace

Eigen::MatrixXd gamma_matrix(const SieveParamsd& params, const QuadratureGrid& grid) {
  validate(params);
  const Eigen::Index k = params.k();
  const Eigen::ArrayXd s = smooth_memory_part(grid.nodes());
  const Eigen::MatrixXd g = ar_gradient(params, grid);
  const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(grid.size());
  const Eigen::ArrayXd zeros = Eigen::ArrayXd::Zero(grid.size());

  // (1/4pi) int_{-pi}^{pi} = (1/2pi) int_0^pi for even integrands.
  const double scale = 1.0 / kTwoPi;
  Eigen::MatrixXd gamma(k + 1, k + 1);
  gamma(0, 0) = scale * grid.integrate(s * s, -4.0 * s, 4.0 * ones);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::ArrayXd gj = g.col(j).array();
    gamma(0, j + 1) = gamma(j + 1, 0) = scale * grid.integrate(s * gj, -2.0 * gj, zeros);
    for (Eigen::Index i = 0; i <= j; ++i)
      gamma(i + 1, j + 1) = gamma(j + 1, i + 1) = scale * grid.integrate(g.col(i).array() * gj);
  }
  if (!gamma.allFinite()) throw NumericalError("Fisher information has a non-finite entry");

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0))
    throw ConditioningError("Fisher information is not positive definite",
                            lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
  return gamma;
}

GammaInverse gamma_inverse(const SieveParamsd& params, const QuadratureGrid& grid) {
  const Eigen::MatrixXd gamma = gamma_matrix(params, grid);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition = hi / lo;
  if (condition > kMaxGammaCondition)
    throw ConditioningError(
        "Fisher information condition number " + std::to_string(condition) + " exceeds 1e12",
        condition);

  GammaInverse out;
  out.inverse = gamma.llt().solve(Eigen::MatrixXd::Identity(gamma.rows(), gamma.cols()));
  out.inverse = 0.5 * (out.inverse + out.inverse.transpose()).eval();
  out.w11 = out.inverse(0, 0);
  out.condition = condition;
  if (!(out.w11 > 0.0)) throw NumericalError("[Gamma^{-1}]_11 is not positive");
  return out;
}

Eigen::VectorXd integrated_log_density_gradient(const SieveParamsd& params,
                                                const QuadratureGrid& grid) {
  validate(params);
  const Eigen::Index k = params.k();
  const Eigen::ArrayXd s = smooth_memory_part(grid.nodes());
  const Eigen::MatrixXd g = ar_gradient(params, grid);
  const Eigen::ArrayXd zeros = Eigen::ArrayXd::Zero(grid.size());
  Eigen::VectorXd out(k + 1);
  out(0) = grid.integrate(s, -2.0 * Eigen::ArrayXd::Ones(grid.size()), zeros);
  for (Eigen::Index j = 0; j < k; ++j) out(j + 1) = grid.integrate(g.col(j).array());
  return out;
}

}  // namespace lrd
