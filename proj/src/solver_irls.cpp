#include "adahuber/solver_irls.hpp"

#include <cmath>
#include <limits>

#include "adahuber/error.hpp"
#include "adahuber/huber_core.hpp"
#include "adahuber/kernels.hpp"
#include "adahuber/linalg.hpp"

namespace adahuber {

FitResult fit_ols(const Dataset& data) {
  const Matrix& x = data.design();
  const double n = static_cast<double>(data.n());
  if (data.n() < data.p())
    throw RankDeficiency("OLS: fewer rows than coefficients", std::numeric_limits<double>::infinity());
  const Vector ones = Vector::Ones(data.n());
  const Matrix gram = kernels::weighted_gram(x, ones) / n;
  const Vector xty = kernels::weighted_xty(x, ones, data.y()) / n;

  FitResult out;
  out.beta = linalg::solve_spd(gram, xty, "OLS Gram matrix");
  Vector r;
  kernels::residuals(x, data.y(), out.beta, r);
  out.objective = 0.5 * r.squaredNorm() / n;
  out.gradient_norm = (x.transpose() * r / n).norm();
  out.iterations = 1;
  out.converged = true;
  out.params.tau = std::numeric_limits<double>::infinity();
  return out;
}

FitResult fit_huber(const Dataset& data, double tau, const SolverConfig& cfg) {
  if (!std::isfinite(tau) || !(tau > 0)) throw InvalidArgument("fit_huber: tau must be finite and > 0");
  cfg.validate();
  const Matrix& x = data.design();
  const Vector& y = data.y();

  Vector beta;
  try {
    beta = fit_ols(data).beta;
  } catch (const RankDeficiency&) {
    beta = Vector::Zero(data.p());
  }

  FitResult out;
  out.params.tau = tau;
  Vector r, w(data.n());
  kernels::residuals(x, y, beta, r);
  double loss = kernels::mean_loss(r, tau);
  if (cfg.record_trajectory) out.trajectory.push_back(loss);

  for (int k = 1; k <= cfg.max_iter; ++k) {
    for (Index i = 0; i < r.size(); ++i) w[i] = detail::weight(r[i], tau);
    const Vector next = linalg::solve_spd(kernels::weighted_gram(x, w), kernels::weighted_xty(x, w, y),
                                          "IRLS weighted Gram matrix");
    const double step = (next - beta).norm();
    beta = next;
    kernels::residuals(x, y, beta, r);
    loss = kernels::mean_loss(r, tau);
    if (cfg.record_trajectory) out.trajectory.push_back(loss);
    out.iterations = k;
    if (step <= cfg.tol) {
      out.converged = true;
      break;
    }
  }

  Vector g;
  kernels::score_gradient(x, r, tau, g);
  out.beta = std::move(beta);
  out.objective = loss;
  out.gradient_norm = g.norm();
  return out;
}

}  // namespace adahuber
