#include "adahuber/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "adahuber/error.hpp"

namespace adahuber::linalg {
namespace {

[[noreturn]] void rank_error(std::string_view what, double cond) {
  std::ostringstream os;
  os << what << " is singular or ill-conditioned (condition number " << cond << ")";
  throw RankDeficiency(os.str(), cond);
}

}  // namespace

double condition_number(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  const double hi = es.eigenvalues().maxCoeff();
  const double lo = es.eigenvalues().minCoeff();
  if (!(hi > 0) || !(lo > 0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

Vector solve_spd(const Matrix& sym, const Vector& rhs, std::string_view what) {
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success || llt.rcond() < kRankTol) {
    const double cond = condition_number(sym);
    if (!(cond < 1.0 / kRankTol)) rank_error(what, cond);
    // rcond is only an estimate; accept when the exact spectrum is fine.
    if (llt.info() != Eigen::Success) rank_error(what, cond);
  }
  return llt.solve(rhs);
}

SymmetricRoots symmetric_roots(const Matrix& sym, std::string_view what) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) rank_error(what, std::numeric_limits<double>::infinity());
  const Vector& ev = es.eigenvalues();
  const double hi = ev.maxCoeff();
  const double lo = ev.minCoeff();
  if (!(hi > 0) || lo <= kRankTol * hi) rank_error(what, lo > 0 ? hi / lo : std::numeric_limits<double>::infinity());
  const Matrix& v = es.eigenvectors();
  SymmetricRoots out;
  out.sqrt = v * ev.cwiseSqrt().asDiagonal() * v.transpose();
  out.inv_sqrt = v * ev.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  return out;
}

double gram_spectral_norm(const Matrix& x) {
  // For wide designs the n x n Gram has the same nonzero spectrum.
  const double n = static_cast<double>(x.rows());
  Matrix g = x.rows() < x.cols() ? Matrix(x * x.transpose()) : Matrix(x.transpose() * x);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() / n;
}

}  // namespace adahuber::linalg
