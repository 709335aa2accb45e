#include "adahuber/robust_design.hpp"

#include <cmath>

#include "adahuber/error.hpp"
#include "adahuber/huber_core.hpp"
#include "adahuber/solver_lamm.hpp"

namespace adahuber {

FitResult fit_truncated(const Dataset& data, const HuberParams& params, const SolverConfig& cfg) {
  params.validate();
  if (!params.varpi) throw InvalidArgument("fit_truncated: varpi is required");
  return fit_l1_huber(truncate_design(data, *params.varpi), params, cfg);
}

Vector predict_truncated(const Matrix& features, const Vector& beta, double varpi, bool intercept) {
  const Index d = features.cols();
  if (beta.size() != d + (intercept ? 1 : 0)) throw InvalidArgument("predict_truncated: coefficient length mismatch");
  Vector out = truncate_matrix(features, varpi) * beta.head(d);
  if (intercept) out.array() += beta[d];
  return out;
}

HuberParams default_truncation_params(Index n, Index d, Index s_guess, double c_tau, double c_varpi,
                                      double c_lambda) {
  if (n < 2 || d < 2) throw InvalidArgument("default_truncation_params: need n >= 2 and d >= 2");
  return truncation_params_from_ratio(static_cast<double>(n) / std::log(static_cast<double>(d)), s_guess, c_tau,
                                      c_varpi, c_lambda);
}

HuberParams truncation_params_from_ratio(double ratio, Index s_guess, double c_tau, double c_varpi,
                                         double c_lambda) {
  if (!(ratio > 0) || !std::isfinite(ratio)) throw InvalidArgument("truncation params: n/log d must be > 0");
  if (s_guess < 1) throw InvalidArgument("default_truncation_params: s_guess must be >= 1");
  for (double c : {c_tau, c_varpi, c_lambda})
    if (!(c > 0) || !std::isfinite(c)) throw InvalidArgument("default_truncation_params: constants must be > 0");
  const double s = static_cast<double>(s_guess);
  HuberParams p;
  p.tau = c_tau * std::sqrt(s) * std::pow(ratio, 0.25);
  p.varpi = c_varpi * std::pow(ratio, 0.25);
  p.lambda = c_lambda * std::sqrt(s / ratio);
  return p;
}

Index default_sparsity_guess(Index d) {
  return std::max<Index>(1, static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(d)))));
}

}  // namespace adahuber
