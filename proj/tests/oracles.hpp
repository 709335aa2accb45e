#pragma once

// Independent reference computations the library is checked against. None of
// them call into the solvers.

#include <cmath>
#include <cstdint>
#include <random>

#include "adahuber/types.hpp"

namespace oracle {

using adahuber::Dataset;
using adahuber::Index;
using adahuber::Matrix;
using adahuber::Vector;

inline double huber(double x, double tau) {
  return std::abs(x) <= tau ? 0.5 * x * x : tau * std::abs(x) - 0.5 * tau * tau;
}

inline double psi(double x, double tau) { return std::max(-tau, std::min(tau, x)); }

inline double loss(const Vector& beta, const Matrix& x, const Vector& y, double tau) {
  double s = 0;
  for (Index i = 0; i < x.rows(); ++i) s += huber(y[i] - x.row(i).dot(beta), tau);
  return s / static_cast<double>(x.rows());
}

inline Vector grad(const Vector& beta, const Matrix& x, const Vector& y, double tau) {
  Vector g = Vector::Zero(x.cols());
  for (Index i = 0; i < x.rows(); ++i) g -= psi(y[i] - x.row(i).dot(beta), tau) * x.row(i).transpose();
  return g / static_cast<double>(x.rows());
}

/// Central differences of f along each coordinate.
template <class F>
Vector finite_difference(F&& f, const Vector& at, double h) {
  Vector g(at.size());
  for (Index j = 0; j < at.size(); ++j) {
    Vector up = at, dn = at;
    up[j] += h;
    dn[j] -= h;
    g[j] = (f(up) - f(dn)) / (2 * h);
  }
  return g;
}

/// Minimizer of the 1-D Huber objective of y - b x by a coarse grid scan
/// followed by golden-section refinement on the bracketing cell.
inline double grid_minimize_1d(const Vector& x, const Vector& y, double tau, double lo, double hi,
                               double step) {
  auto f = [&](double b) {
    double s = 0;
    for (Index i = 0; i < x.size(); ++i) s += huber(y[i] - b * x[i], tau);
    return s;
  };
  double best = lo, fbest = f(lo);
  for (double b = lo; b <= hi; b += step) {
    const double v = f(b);
    if (v < fbest) {
      fbest = v;
      best = b;
    }
  }
  double a = best - step, c = best + step;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    const double m1 = c - g * (c - a), m2 = a + g * (c - a);
    if (f(m1) < f(m2)) c = m2; else a = m1;
  }
  return 0.5 * (a + c);
}

inline double power_iteration(const Matrix& sym, int iters = 5000) {
  Vector v = Vector::Ones(sym.rows()).normalized();
  double lam = 0;
  for (int k = 0; k < iters; ++k) {
    const Vector w = sym * v;
    lam = v.dot(w);
    if (w.norm() == 0) return 0;
    v = w.normalized();
  }
  return lam;
}

/// Fixed-step proximal gradient for L_tau + lambda ||.||_1 (no intercept).
inline Vector proximal_gradient(const Matrix& x, const Vector& y, double tau, double lambda, int iters) {
  const double n = static_cast<double>(x.rows());
  const double step = 1.0 / power_iteration(x.transpose() * x / n);
  Vector b = Vector::Zero(x.cols());
  for (int k = 0; k < iters; ++k) {
    const Vector u = b - step * grad(b, x, y, tau);
    for (Index j = 0; j < b.size(); ++j) {
      const double m = std::abs(u[j]) - step * lambda;
      b[j] = m > 0 ? std::copysign(m, u[j]) : 0.0;
    }
  }
  return b;
}

inline Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> z;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = z(rng);
  return m;
}

inline Vector gaussian(std::mt19937_64& rng, Index n) { return gaussian(rng, n, 1).col(0); }

/// y = X beta + t_2 noise, beta with `s` leading nonzeros drawn from {+-1, +-2}.
inline Dataset sparse_instance(std::uint64_t seed, Index n, Index d, Index s, Vector* beta_out = nullptr) {
  std::mt19937_64 rng(seed);
  Matrix x = gaussian(rng, n, d);
  Vector beta = Vector::Zero(d);
  std::uniform_int_distribution<int> pick(0, 3);
  for (Index j = 0; j < std::min(s, d); ++j) beta[j] = std::vector<double>{-2, -1, 1, 2}[static_cast<std::size_t>(pick(rng))];
  std::student_t_distribution<double> t2(2.0);
  Vector y = x * beta;
  for (Index i = 0; i < n; ++i) y[i] += t2(rng);
  if (beta_out) *beta_out = beta;
  return Dataset(std::move(x), std::move(y));
}

}  // namespace oracle
