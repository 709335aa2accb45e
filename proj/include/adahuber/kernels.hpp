#pragma once

#include "adahuber/types.hpp"

// Row-blocked data-parallel kernels behind the Huber objective, its gradient
// and the IRLS normal equations.
//
// Rows are cut into fixed blocks of kBlockRows. Each block produces a partial
// result and partials are combined in block order, so the output is bitwise
// identical for every OpenMP thread count. The `serial` namespace holds
// straightforward loop implementations kept as the reference for tests and
// benchmarks.

namespace adahuber::kernels {

inline constexpr Index kBlockRows = 256;

/// Below this many multiply-adds a kernel stays on the calling thread.
inline constexpr Index kParallelWork = Index{1} << 16;

/// r = y - X beta
void residuals(const Matrix& x, const Vector& y, const Vector& beta, Vector& r);

/// n^{-1} sum_i l_tau(r_i)
double mean_loss(const Vector& r, double tau);

/// grad = -n^{-1} X^T psi_tau(r)
void score_gradient(const Matrix& x, const Vector& r, double tau, Vector& grad);

/// X^T diag(w) X
Matrix weighted_gram(const Matrix& x, const Vector& w);

/// X^T diag(w) y
Vector weighted_xty(const Matrix& x, const Vector& w, const Vector& y);

namespace serial {

void residuals(const Matrix& x, const Vector& y, const Vector& beta, Vector& r);
double mean_loss(const Vector& r, double tau);
void score_gradient(const Matrix& x, const Vector& r, double tau, Vector& grad);
Matrix weighted_gram(const Matrix& x, const Vector& w);
Vector weighted_xty(const Matrix& x, const Vector& w, const Vector& y);

}  // namespace serial

}  // namespace adahuber::kernels
