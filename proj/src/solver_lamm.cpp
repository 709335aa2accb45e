#include "adahuber/solver_lamm.hpp"

#include <algorithm>
#include <cmath>

#include "adahuber/error.hpp"
#include "adahuber/huber_core.hpp"
#include "adahuber/kernels.hpp"

namespace adahuber {
namespace {

constexpr double kPhiCeiling = 1e300;

Vector prox_step(const Vector& beta, const Vector& grad, const Dataset& data, double lambda, double phi) {
  const double kappa = lambda / phi;
  Vector out(beta.size());
  for (Index j = 0; j < beta.size(); ++j) {
    const double v = beta[j] - grad[j] / phi;
    if (!data.penalized(j)) {
      out[j] = v;
      continue;
    }
    const double a = std::abs(v) - kappa;
    out[j] = a > 0 ? std::copysign(a, v) : 0.0;
  }
  return out;
}

bool majorizes(double loss_old, const Vector& grad, const Vector& delta, double phi, double loss_new) {
  const double surrogate = loss_old + grad.dot(delta) + 0.5 * phi * delta.squaredNorm();
  return surrogate >= loss_new - kMajorizationSlack;
}

}  // namespace

Vector lamm_step(const Vector& beta, const Dataset& data, double tau, double lambda, double phi) {
  if (!(phi > 0)) throw InvalidArgument("lamm_step: phi must be > 0");
  if (!(lambda >= 0)) throw InvalidArgument("lamm_step: lambda must be >= 0");
  return prox_step(beta, gradient(beta, data, tau), data, lambda, phi);
}

bool majorization_holds(const Vector& beta_new, const Vector& beta_old, const Dataset& data,
                        double tau, double phi) {
  if (!(phi > 0)) throw InvalidArgument("majorization_holds: phi must be > 0");
  check_coefficients(beta_new, data);
  const HuberParams unpenalized{tau, 0.0, {}};
  const double loss_old = objective(beta_old, data, unpenalized);
  const double loss_new = objective(beta_new, data, unpenalized);
  return majorizes(loss_old, gradient(beta_old, data, tau), beta_new - beta_old, phi, loss_new);
}

double kkt_violation(const Vector& beta, const Vector& grad, const Dataset& data, double lambda) {
  double worst = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    double v;
    if (!data.penalized(j)) {
      v = std::abs(grad[j]);
    } else if (beta[j] == 0.0) {
      v = std::abs(grad[j]) - lambda;
    } else {
      v = std::abs(grad[j] + std::copysign(lambda, beta[j])) / (1.0 + lambda);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

FitResult fit_l1_huber(const Dataset& data, const HuberParams& params, const SolverConfig& cfg,
                       const Vector* init) {
  params.validate();
  cfg.validate();
  const Matrix& x = data.design();
  const Vector& y = data.y();
  const double tau = params.tau;
  const double lambda = params.lambda;

  Vector beta = Vector::Zero(data.p());
  if (init) {
    check_coefficients(*init, data);
    beta = *init;
  }

  FitResult out;
  out.params = params;
  Vector r, r_cand, g;
  kernels::residuals(x, y, beta, r);
  double loss = kernels::mean_loss(r, tau);
  if (cfg.record_trajectory) out.trajectory.push_back(loss + l1_penalty(beta, data, lambda));

  double phi_prev = cfg.phi0;
  bool small_step = false;
  kernels::score_gradient(x, r, tau, g);

  for (int k = 0; k < cfg.max_iter; ++k) {
    if (small_step && kkt_violation(beta, g, data, lambda) <= cfg.kkt_tol) {
      out.converged = true;
      break;
    }
    double phi = std::max(cfg.phi0, phi_prev / cfg.gamma_u);
    Vector cand;
    Vector delta;
    double loss_cand = 0.0;
    int inner = 0;
    for (;;) {
      ++inner;
      cand = prox_step(beta, g, data, lambda, phi);
      kernels::residuals(x, y, cand, r_cand);
      loss_cand = kernels::mean_loss(r_cand, tau);
      delta = cand - beta;
      if (majorizes(loss, g, delta, phi, loss_cand)) break;
      phi *= cfg.gamma_u;
      if (!(phi <= kPhiCeiling)) throw NumericalFailure("LAMM: quadratic parameter overflow");
    }
    out.max_inner_iterations = std::max(out.max_inner_iterations, inner);
    small_step = delta.norm() <= cfg.tol;
    beta.swap(cand);
    r.swap(r_cand);
    loss = loss_cand;
    phi_prev = phi;
    out.iterations = k + 1;
    if (cfg.record_trajectory) out.trajectory.push_back(loss + l1_penalty(beta, data, lambda));
    kernels::score_gradient(x, r, tau, g);
  }
  if (!out.converged && small_step && kkt_violation(beta, g, data, lambda) <= cfg.kkt_tol)
    out.converged = true;

  out.objective = loss + l1_penalty(beta, data, lambda);
  out.gradient_norm = g.norm();
  out.beta = std::move(beta);
  return out;
}

}  // namespace adahuber
