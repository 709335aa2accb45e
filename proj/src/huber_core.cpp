#include "adahuber/huber_core.hpp"

#include <cmath>
#include <string>

#include "adahuber/error.hpp"
#include "adahuber/kernels.hpp"

namespace adahuber {
namespace {

void check_scalar(double x, double tau) {
  if (!std::isfinite(x)) throw InvalidArgument("huber: non-finite argument");
  if (!std::isfinite(tau) || !(tau > 0)) throw InvalidArgument("huber: tau must be finite and > 0");
}

}  // namespace

Dataset::Dataset(Matrix x, Vector y, bool intercept) : intercept_(intercept) {
  if (x.rows() < 1 || x.cols() < 1) throw InvalidArgument("Dataset: need n >= 1 and d >= 1");
  if (y.size() != x.rows())
    throw InvalidArgument("Dataset: response length " + std::to_string(y.size()) +
                          " != row count " + std::to_string(x.rows()));
  if (!x.allFinite() || !y.allFinite()) throw InvalidArgument("Dataset: non-finite entry");
  if (intercept) {
    x_.resize(x.rows(), x.cols() + 1);
    x_.leftCols(x.cols()) = x;
    x_.col(x.cols()).setOnes();
  } else {
    x_ = std::move(x);
  }
  y_ = std::move(y);
}

Dataset::Dataset(Raw, Matrix design, Vector y, bool intercept)
    : x_(std::move(design)), y_(std::move(y)), intercept_(intercept) {}

Matrix Dataset::features() const { return x_.leftCols(d()); }

Dataset Dataset::with_response(Vector y) const {
  if (y.size() != n()) throw InvalidArgument("Dataset: response length mismatch");
  if (!y.allFinite()) throw InvalidArgument("Dataset: non-finite entry");
  return Dataset(Raw{}, x_, std::move(y), intercept_);
}

Dataset Dataset::with_features(Matrix x) const {
  if (x.rows() != n() || x.cols() != d()) throw InvalidArgument("Dataset: feature shape mismatch");
  return Dataset(std::move(x), y_, intercept_);
}

Dataset Dataset::rows(const std::vector<Index>& idx) const {
  if (idx.empty()) throw InvalidArgument("Dataset: empty row selection");
  Matrix x(static_cast<Index>(idx.size()), p());
  Vector y(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const Index i = idx[k];
    if (i < 0 || i >= n()) throw InvalidArgument("Dataset: row index out of range");
    x.row(static_cast<Index>(k)) = x_.row(i);
    y[static_cast<Index>(k)] = y_[i];
  }
  return Dataset(Raw{}, std::move(x), std::move(y), intercept_);
}

void HuberParams::validate() const {
  if (!std::isfinite(tau) || !(tau > 0)) throw InvalidArgument("HuberParams: tau must be > 0");
  if (!std::isfinite(lambda) || lambda < 0) throw InvalidArgument("HuberParams: lambda must be >= 0");
  if (varpi && (!std::isfinite(*varpi) || !(*varpi > 0)))
    throw InvalidArgument("HuberParams: varpi must be > 0");
}

void SolverConfig::validate() const {
  if (!(tol > 0)) throw InvalidArgument("SolverConfig: tol must be > 0");
  if (max_iter < 1) throw InvalidArgument("SolverConfig: max_iter must be >= 1");
  if (!(phi0 > 0)) throw InvalidArgument("SolverConfig: phi0 must be > 0");
  if (!(gamma_u > 1)) throw InvalidArgument("SolverConfig: gamma_u must be > 1");
  if (!(kkt_tol > 0)) throw InvalidArgument("SolverConfig: kkt_tol must be > 0");
}

double huber_loss(double x, double tau) {
  check_scalar(x, tau);
  return detail::loss(x, tau);
}

double huber_score(double x, double tau) {
  check_scalar(x, tau);
  return detail::score(x, tau);
}

double irls_weight(double r, double tau) {
  check_scalar(r, tau);
  return detail::weight(r, tau);
}

void check_coefficients(const Vector& beta, const Dataset& data) {
  if (beta.size() != data.p())
    throw InvalidArgument("coefficient length " + std::to_string(beta.size()) +
                          " does not match design width " + std::to_string(data.p()));
  if (!beta.allFinite()) throw InvalidArgument("non-finite coefficient");
}

double l1_penalty(const Vector& beta, const Dataset& data, double lambda) {
  double s = 0.0;
  for (Index j = 0; j < beta.size(); ++j)
    if (data.penalized(j)) s += std::abs(beta[j]);
  return lambda * s;
}

double objective(const Vector& beta, const Dataset& data, const HuberParams& params) {
  params.validate();
  check_coefficients(beta, data);
  Vector r;
  kernels::residuals(data.design(), data.y(), beta, r);
  return kernels::mean_loss(r, params.tau) + l1_penalty(beta, data, params.lambda);
}

Vector gradient(const Vector& beta, const Dataset& data, double tau) {
  check_scalar(0.0, tau);
  check_coefficients(beta, data);
  Vector r, g;
  kernels::residuals(data.design(), data.y(), beta, r);
  kernels::score_gradient(data.design(), r, tau, g);
  return g;
}

Vector soft_threshold(const Vector& v, double kappa) {
  if (!(kappa >= 0)) throw InvalidArgument("soft_threshold: kappa must be >= 0");
  Vector out(v.size());
  for (Index j = 0; j < v.size(); ++j) {
    const double a = std::abs(v[j]) - kappa;
    out[j] = a > 0 ? std::copysign(a, v[j]) : 0.0;
  }
  return out;
}

Matrix truncate_matrix(const Matrix& x, double varpi) {
  if (!std::isfinite(varpi) || !(varpi > 0)) throw InvalidArgument("truncate: varpi must be > 0");
  return x.cwiseMax(-varpi).cwiseMin(varpi);
}

Dataset truncate_design(const Dataset& data, double varpi) {
  return data.with_features(truncate_matrix(data.features(), varpi));
}

double mae(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size()) throw InvalidArgument("mae: length mismatch");
  if (y_true.empty()) throw InvalidArgument("mae: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) s += std::abs(y_true[i] - y_pred[i]);
  return s / static_cast<double>(y_true.size());
}

double mae(const Vector& y_true, const Vector& y_pred) {
  return mae(std::span<const double>(y_true.data(), static_cast<std::size_t>(y_true.size())),
             std::span<const double>(y_pred.data(), static_cast<std::size_t>(y_pred.size())));
}

}  // namespace adahuber
