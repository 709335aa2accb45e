#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adahuber/types.hpp"

namespace adahuber {

/// sigma_hat with sigma_hat^2 = n^{-1} sum (y_i - ybar)^2.
/// Throws DegenerateSample for constant y, InvalidArgument for n < 2.
double estimate_sigma_crude(const Vector& y);

/// n in low dimensions, n / log d in high dimensions (d >= 2 required then).
double effective_sample_size(Index n, Index d, bool high_dim);

/// tau = c_tau sigma (n_eff/t)^{1/2}, lambda = c_lambda sigma (t/n_eff)^{1/2}.
///
/// The lambda rule shrinks with the sample size; the grid constants absorb
/// the rest.
HuberParams default_params(double sigma_hat, double n_eff, double t, double c_tau, double c_lambda);

/// (1+delta)-th absolute central sample moment n^{-1} sum |r_i - rbar|^{1+delta}.
double moment_estimate(const Vector& residuals, double delta);

/// Moment-aware robustification tau = c_tau v_hat (n_eff/t)^{e} with
/// e = 1/(1+delta) for delta < 1 and e = 1/2 otherwise.
double moment_tau(double v_hat, double n_eff, double t, double c_tau, double delta);

struct TuningGrid {
  std::vector<double> c_tau{0.5, 1.0, 1.5};
  std::vector<double> c_lambda{0.5, 1.0, 1.5};
  int folds = 3;
  /// Confidence parameter; log n when unset.
  std::optional<double> t;
  std::uint64_t seed = 12345;
  SolverConfig irls = SolverConfig::irls_defaults();
  SolverConfig lamm = SolverConfig::lamm_defaults();
};

struct CvCell {
  double c_tau = 0;
  double c_lambda = 0;
  double mean_mae = 0;
  bool failed = false;
  std::vector<double> fold_mae;
};

struct CvResult {
  double c_tau = 0;
  double c_lambda = 0;
  HuberParams params;
  FitResult fit;
  /// Row-major over (c_tau, c_lambda) in grid order.
  std::vector<CvCell> table;
  /// True when the grid had a single cell.
  bool forced = false;
};

/// k-fold cross-validation of (c_tau, c_lambda) scored by held-out MAE.
/// Rows are shuffled with grid.seed and cut into contiguous folds. Ties go to
/// the larger c_tau, then the larger c_lambda. The winner is refit on all rows.
/// Low-dimensional mode fits with IRLS and lambda = 0.
CvResult cross_validate(const Dataset& data, const TuningGrid& grid, bool high_dim);

/// Fit with the default tuning rule for given constants (what every CV cell
/// and the final refit run).
FitResult fit_with_constants(const Dataset& data, double c_tau, double c_lambda, double t,
                             bool high_dim, const TuningGrid& grid, HuberParams* resolved = nullptr);

struct LepskiGrid {
  double sigma_min = 1.0;
  double sigma_max = 1.0;
  double a = 1.5;
  double t = 1.0;

  /// sigma_j = sigma_min a^j for all j with sigma_j < a sigma_max.
  std::vector<double> sigmas() const;
  void validate() const;

  /// sigma_min = s/K, sigma_max = K s with s^2 the OLS residual variance
  /// (n - p divisor), t = log n.
  static LepskiGrid defaults(const Dataset& data, double K = 3.0, double a = 1.5);
};

struct LepskiResult {
  FitResult fit;
  int selected = 0;
  std::vector<double> sigmas;
  std::vector<double> taus;
  std::vector<double> thresholds;
  /// distances(k, j) = ||S_n^{1/2}(b_k - b_j)||_2
  Matrix distances;
  double l_tilde = 0;
  std::vector<FitResult> fits;
};

/// Smallest j with distances(k, j) <= threshold_j for all k > j. The last
/// index is always admissible.
int lepski_rule(const Matrix& distances, const std::vector<double>& thresholds);

/// 8 L~ sigma_j p^{1/2} (t/n)^{1/2} for every grid point.
std::vector<double> lepski_thresholds(const std::vector<double>& sigmas, double l_tilde, Index p,
                                      double t, Index n);

LepskiResult lepski_select(const Dataset& data, const LepskiGrid& grid,
                           const SolverConfig& cfg = SolverConfig::irls_defaults());

}  // namespace adahuber
