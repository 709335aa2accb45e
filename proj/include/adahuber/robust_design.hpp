#pragma once

#include "adahuber/types.hpp"

namespace adahuber {

/// l1-regularized Huber regression on the covariate-truncated design
/// x_ij -> min(max(-varpi, x_ij), varpi). The response is left alone. The
/// coefficients refer to the truncated design, so predictions must truncate
/// new covariates too (see predict_truncated).
FitResult fit_truncated(const Dataset& data, const HuberParams& params,
                        const SolverConfig& cfg = SolverConfig::lamm_defaults());

/// X^varpi beta for a feature matrix without intercept column; appends the
/// intercept contribution when `intercept` is set.
Vector predict_truncated(const Matrix& features, const Vector& beta, double varpi, bool intercept);

/// tau = c_tau s^{1/2} (n/log d)^{1/4}, varpi = c_varpi (n/log d)^{1/4},
/// lambda = c_lambda (s log d / n)^{1/2}.
HuberParams default_truncation_params(Index n, Index d, Index s_guess, double c_tau = 1.0,
                                      double c_varpi = 1.0, double c_lambda = 1.0);

/// Same scalings written in terms of the effective sample size n / log d,
/// which is all they depend on.
HuberParams truncation_params_from_ratio(double n_over_log_d, Index s_guess, double c_tau = 1.0,
                                         double c_varpi = 1.0, double c_lambda = 1.0);

/// max(1, ceil(sqrt(d)))
Index default_sparsity_guess(Index d);

}  // namespace adahuber
