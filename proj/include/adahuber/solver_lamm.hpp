#pragma once

#include "adahuber/types.hpp"

namespace adahuber {

/// Absolute slack of the local majorization test.
inline constexpr double kMajorizationSlack = 1e-12;

/// One proximal update S(beta - grad/phi, lambda/phi). The intercept
/// coordinate, when present, takes the plain gradient step.
Vector lamm_step(const Vector& beta, const Dataset& data, double tau, double lambda, double phi);

/// True iff the isotropic quadratic at beta_old with curvature phi lies above
/// L_tau at beta_new (up to kMajorizationSlack).
bool majorization_holds(const Vector& beta_new, const Vector& beta_old, const Dataset& data,
                        double tau, double phi);

/// Largest violation of the l1 KKT conditions, each scaled by its own
/// allowance so that the point is optimal to tolerance `tol` iff the return
/// value is <= tol:
///   beta_j == 0:  |g_j| - lambda
///   beta_j != 0:  |g_j + lambda sign(beta_j)| / (1 + lambda)
/// The intercept coordinate is checked as unpenalized.
double kkt_violation(const Vector& beta, const Vector& grad, const Dataset& data, double lambda);

/// l1-regularized adaptive Huber regression by local adaptive
/// majorize-minimization.
///
/// Outer iteration k starts from phi = max(phi0, phi_{k-1} / gamma_u) and
/// inflates phi by gamma_u until the isotropic quadratic majorizes L_tau at
/// the candidate. Stops once ||b_{k+1} - b_k||_2 <= tol and the KKT
/// violation is <= kkt_tol. Starts from zero unless `init` is given.
FitResult fit_l1_huber(const Dataset& data, const HuberParams& params,
                       const SolverConfig& cfg = SolverConfig::lamm_defaults(),
                       const Vector* init = nullptr);

}  // namespace adahuber
