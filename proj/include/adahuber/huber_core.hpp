#pragma once

#include <span>

#include "adahuber/types.hpp"

namespace adahuber {

// Scalar Huber pieces. All throw InvalidArgument on non-finite x or tau <= 0.

/// l_tau(x) = x^2/2 for |x| <= tau, tau|x| - tau^2/2 otherwise.
double huber_loss(double x, double tau);

/// psi_tau(x) = sign(x) min(|x|, tau), the derivative of huber_loss.
double huber_score(double x, double tau);

/// MM weight psi_tau(r)/r; 1 on the quadratic region including r = 0.
double irls_weight(double r, double tau);

// Unchecked variants for inner loops, arguments assumed valid.
namespace detail {
inline double loss(double x, double tau) noexcept {
  const double a = x < 0 ? -x : x;
  return a <= tau ? 0.5 * x * x : tau * a - 0.5 * tau * tau;
}
inline double score(double x, double tau) noexcept {
  return x > tau ? tau : (x < -tau ? -tau : x);
}
inline double weight(double r, double tau) noexcept {
  const double a = r < 0 ? -r : r;
  return a <= tau ? 1.0 : tau / a;
}
}  // namespace detail

/// n^{-1} sum_i l_tau(y_i - <x_i, beta>) + lambda ||beta||_1, intercept excluded
/// from the penalty. Ignores params.varpi (truncation is applied to the data).
double objective(const Vector& beta, const Dataset& data, const HuberParams& params);

/// -n^{-1} sum_i psi_tau(y_i - <x_i, beta>) x_i
Vector gradient(const Vector& beta, const Dataset& data, double tau);

/// lambda * ||beta||_1 over penalized coordinates.
double l1_penalty(const Vector& beta, const Dataset& data, double lambda);

/// sign(v_j) max(|v_j| - kappa, 0)
Vector soft_threshold(const Vector& v, double kappa);

/// Clamp every entry to [-varpi, varpi].
Matrix truncate_matrix(const Matrix& x, double varpi);

/// Dataset with its user features truncated; the intercept column is exempt.
Dataset truncate_design(const Dataset& data, double varpi);

/// n^{-1} sum |y_true - y_pred|
double mae(std::span<const double> y_true, std::span<const double> y_pred);
double mae(const Vector& y_true, const Vector& y_pred);

/// Throws InvalidArgument if beta does not match the design width.
void check_coefficients(const Vector& beta, const Dataset& data);

}  // namespace adahuber
