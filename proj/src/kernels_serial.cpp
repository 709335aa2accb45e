#include "adahuber/huber_core.hpp"
#include "adahuber/kernels.hpp"

namespace adahuber::kernels::serial {

void residuals(const Matrix& x, const Vector& y, const Vector& beta, Vector& r) {
  const Index n = x.rows();
  const Index p = x.cols();
  r.resize(n);
  for (Index i = 0; i < n; ++i) {
    double s = y[i];
    for (Index j = 0; j < p; ++j) s -= x(i, j) * beta[j];
    r[i] = s;
  }
}

double mean_loss(const Vector& r, double tau) {
  double s = 0.0;
  for (Index i = 0; i < r.size(); ++i) s += detail::loss(r[i], tau);
  return s / static_cast<double>(r.size());
}

void score_gradient(const Matrix& x, const Vector& r, double tau, Vector& grad) {
  const Index n = x.rows();
  const Index p = x.cols();
  grad.setZero(p);
  for (Index i = 0; i < n; ++i) {
    const double psi = detail::score(r[i], tau);
    for (Index j = 0; j < p; ++j) grad[j] -= psi * x(i, j);
  }
  grad /= static_cast<double>(n);
}

Matrix weighted_gram(const Matrix& x, const Vector& w) {
  const Index n = x.rows();
  const Index p = x.cols();
  Matrix g = Matrix::Zero(p, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j)
      for (Index k = 0; k <= j; ++k) g(j, k) += w[i] * x(i, j) * x(i, k);
  for (Index j = 0; j < p; ++j)
    for (Index k = 0; k < j; ++k) g(k, j) = g(j, k);
  return g;
}

Vector weighted_xty(const Matrix& x, const Vector& w, const Vector& y) {
  const Index n = x.rows();
  const Index p = x.cols();
  Vector out = Vector::Zero(p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) out[j] += w[i] * x(i, j) * y[i];
  return out;
}

}  // namespace adahuber::kernels::serial
