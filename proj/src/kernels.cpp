#include "adahuber/kernels.hpp"

#include <omp.h>

#include <vector>

#include "adahuber/huber_core.hpp"

namespace adahuber::kernels {
namespace {

Index block_count(Index n) { return (n + kBlockRows - 1) / kBlockRows; }

bool go_parallel(Index blocks, Index work) {
  return blocks > 1 && work >= kParallelWork && !omp_in_parallel();
}

}  // namespace

void residuals(const Matrix& x, const Vector& y, const Vector& beta, Vector& r) {
  const Index n = x.rows();
  const Index blocks = block_count(n);
  r.resize(n);
#pragma omp parallel for schedule(static) if (go_parallel(blocks, n * x.cols()))
  for (Index b = 0; b < blocks; ++b) {
    const Index lo = b * kBlockRows;
    const Index len = std::min(kBlockRows, n - lo);
    r.segment(lo, len).noalias() = y.segment(lo, len) - x.middleRows(lo, len) * beta;
  }
}

double mean_loss(const Vector& r, double tau) {
  const Index n = r.size();
  const Index blocks = block_count(n);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static) if (go_parallel(blocks, n * 8))
  for (Index b = 0; b < blocks; ++b) {
    const Index lo = b * kBlockRows;
    const Index hi = std::min(n, lo + kBlockRows);
    double s = 0.0;
    for (Index i = lo; i < hi; ++i) s += detail::loss(r[i], tau);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total / static_cast<double>(n);
}

void score_gradient(const Matrix& x, const Vector& r, double tau, Vector& grad) {
  const Index n = x.rows();
  const Index p = x.cols();
  const Index blocks = block_count(n);
  Matrix partial(p, blocks);
#pragma omp parallel for schedule(static) if (go_parallel(blocks, n * p))
  for (Index b = 0; b < blocks; ++b) {
    const Index lo = b * kBlockRows;
    const Index len = std::min(kBlockRows, n - lo);
    Vector psi(len);
    for (Index i = 0; i < len; ++i) psi[i] = detail::score(r[lo + i], tau);
    partial.col(b).noalias() = x.middleRows(lo, len).transpose() * psi;
  }
  grad.setZero(p);
  for (Index b = 0; b < blocks; ++b) grad += partial.col(b);
  grad *= -1.0 / static_cast<double>(n);
}

Matrix weighted_gram(const Matrix& x, const Vector& w) {
  const Index n = x.rows();
  const Index p = x.cols();
  const Index blocks = block_count(n);
  std::vector<Matrix> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static) if (go_parallel(blocks, n * p * p))
  for (Index b = 0; b < blocks; ++b) {
    const Index lo = b * kBlockRows;
    const Index len = std::min(kBlockRows, n - lo);
    const auto xb = x.middleRows(lo, len);
    partial[static_cast<std::size_t>(b)].noalias() =
        xb.transpose() * w.segment(lo, len).asDiagonal() * xb;
  }
  Matrix g = Matrix::Zero(p, p);
  for (const auto& m : partial) g += m;
  return g;
}

Vector weighted_xty(const Matrix& x, const Vector& w, const Vector& y) {
  const Index n = x.rows();
  const Index p = x.cols();
  const Index blocks = block_count(n);
  Matrix partial(p, blocks);
#pragma omp parallel for schedule(static) if (go_parallel(blocks, n * p))
  for (Index b = 0; b < blocks; ++b) {
    const Index lo = b * kBlockRows;
    const Index len = std::min(kBlockRows, n - lo);
    partial.col(b).noalias() =
        x.middleRows(lo, len).transpose() * w.segment(lo, len).cwiseProduct(y.segment(lo, len));
  }
  Vector out = Vector::Zero(p);
  for (Index b = 0; b < blocks; ++b) out += partial.col(b);
  return out;
}

}  // namespace adahuber::kernels
