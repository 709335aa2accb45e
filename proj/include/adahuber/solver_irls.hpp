#pragma once

#include "adahuber/types.hpp"

namespace adahuber {

/// Ordinary least squares via the normal equations.
/// Throws RankDeficiency when n^{-1} X^T X is singular.
FitResult fit_ols(const Dataset& data);

/// Unpenalized adaptive Huber regression by iteratively reweighted least
/// squares, warm-started at OLS (zero if OLS is rank-deficient).
///
/// Each step solves the weighted least-squares problem with weights
/// irls_weight(r_i, tau); this is a majorize-minimize step, so the Huber
/// objective never increases. Stops when ||b_{k+1} - b_k||_2 <= cfg.tol.
/// Hitting cfg.max_iter returns converged = false instead of throwing.
FitResult fit_huber(const Dataset& data, double tau,
                    const SolverConfig& cfg = SolverConfig::irls_defaults());

}  // namespace adahuber
