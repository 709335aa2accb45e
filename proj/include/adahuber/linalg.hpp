#pragma once

#include <string_view>

#include "adahuber/types.hpp"

namespace adahuber::linalg {

/// Eigenvalues below this fraction of the largest are treated as zero.
inline constexpr double kRankTol = 1e-12;

/// lambda_max / lambda_min of a symmetric PSD matrix (inf when singular).
double condition_number(const Matrix& sym);

/// Solve sym * x = rhs for symmetric positive definite `sym`.
/// Throws RankDeficiency naming `what` and the condition number.
Vector solve_spd(const Matrix& sym, const Vector& rhs, std::string_view what);

struct SymmetricRoots {
  Matrix sqrt;
  Matrix inv_sqrt;
};

/// S^{1/2} and S^{-1/2} via symmetric eigendecomposition.
SymmetricRoots symmetric_roots(const Matrix& sym, std::string_view what);

/// Largest eigenvalue of n^{-1} X^T X.
double gram_spectral_norm(const Matrix& x);

}  // namespace adahuber::linalg
