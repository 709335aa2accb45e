#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adahuber/rng.hpp"
#include "adahuber/types.hpp"

namespace adahuber {

/// Regression error distribution.
class NoiseSpec {
 public:
  enum class Family { normal, student_t, lognormal };

  static NoiseSpec normal(double variance);
  static NoiseSpec student_t(double df);
  /// log N(0, log_variance), shifted by its mean exp(log_variance/2) when centered.
  static NoiseSpec lognormal(double log_variance, bool centered = true);

  Family family() const noexcept { return family_; }
  double parameter() const noexcept { return param_; }
  bool centered() const noexcept { return centered_; }
  bool symmetric() const noexcept { return family_ != Family::lognormal; }

  /// Population variance (infinity when it does not exist).
  double variance() const;
  /// Short identifier, e.g. "normal(4)", "student_t(1.5)", "lognormal(4,centered)".
  std::string name() const;

  double sample(Engine& rng) const;
  Vector sample(Engine& rng, Index n) const;

 private:
  NoiseSpec(Family f, double p, bool c) : family_(f), param_(p), centered_(c) {}
  Family family_;
  double param_;
  bool centered_;
};

/// (5, -2, 0, 0, 3, 0, ..., 0) of length d (truncated when d < 5).
Vector default_beta_star(Index d);

struct ExperimentSpec {
  Index n = 100;
  Index d = 5;
  Vector beta_star = default_beta_star(5);
  NoiseSpec noise = NoiseSpec::normal(4.0);
  int replications = 1;
  std::uint64_t seed = 12345;
  /// Fit an intercept column (true intercept 0).
  bool intercept = false;

  void validate() const;
};

/// y = X beta* + eps with X rows i.i.d. N(0, I_d). Covariates and noise come
/// from separate streams derived from `stream_seed`, so the same seed gives
/// the same X under every noise family.
Dataset gen_linear_data(const ExperimentSpec& spec, std::uint64_t stream_seed);
inline Dataset gen_linear_data(const ExperimentSpec& spec) { return gen_linear_data(spec, spec.seed); }

struct ReplicationRecord {
  int replication = 0;
  std::string setting;
  std::string estimator;
  double l2_error = 0;
  /// Robustification used (NaN for OLS).
  double tau = 0;
  bool failed = false;
};

struct SummaryRow {
  std::string setting;
  std::string estimator;
  int count = 0;
  int failed = 0;
  double mean = 0;
  /// Sample standard deviation (n - 1 divisor).
  double std = 0;
};

struct ExperimentReport {
  std::string experiment;
  /// Sorted by (setting order, replication, estimator order).
  std::vector<ReplicationRecord> records;
  std::vector<SummaryRow> summary;
  /// Spec echo, seed, software version, generator id. Deterministic.
  nlohmann::json metadata;
  /// Not written to report files.
  double wall_seconds = 0;

  const SummaryRow& cell(const std::string& setting, const std::string& estimator) const;
};

/// Mean / sample std over non-failed records, grouped in first-seen order.
std::vector<SummaryRow> summarize(const std::vector<ReplicationRecord>& records);

struct Table1Options {
  int reps = 100;
  Index n = 100;
  Index d = 5;
  std::uint64_t seed = 12345;
  int folds = 3;
  std::vector<double> c_tau{0.5, 1.0, 1.5};
  bool lognormal_centered = true;
  /// Worker threads; 0 uses the OpenMP default.
  int threads = 0;
};

/// OLS vs cross-validated adaptive Huber under N(0,4), t_1.5 and log N(0,4).
ExperimentReport run_table1(const Table1Options& opt);

struct PhaseOptions {
  std::vector<double> df_grid;
  std::vector<Index> n_grid{500};
  Index d = 5;
  int reps = 200;
  bool high_dim = false;
  std::uint64_t seed = 12345;
  double c_tau = 0.5;
  double c_lambda = 1.0;
  /// Confidence parameter; log n when unset.
  std::optional<double> t;
  int threads = 0;
};

struct PhaseRow {
  double df = 0;
  double delta = 0;
  Index n = 0;
  Index d = 0;
  int count = 0;
  int failed = 0;
  double mean_error = 0;
  double neg_log_mean_error = 0;
  double mean_neg_log_error = 0;
};

struct PhaseReport {
  std::vector<PhaseRow> rows;
  ExperimentReport detail;
};

/// delta = df - 1 - 0.05
double phase_delta(double df);

/// For every (n, df): t_df noise, moment-aware tau from a pilot fit, adaptive
/// Huber fit (IRLS in low dimensions, LAMM in high dimensions).
PhaseReport run_phase_transition(const PhaseOptions& opt);

/// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

struct NeffOptions {
  std::vector<Index> d_grid{100, 500};
  /// Either explicit sample sizes (used for every d) ...
  std::vector<Index> n_grid;
  /// ... or target values of n / log d; n = round(ratio * log d) per d.
  std::vector<double> ratio_grid;
  int reps = 100;
  std::uint64_t seed = 12345;
  double delta = 0.45;
  double df = 1.5;
  double c_tau = 0.5;
  double c_lambda = 1.0;
  int threads = 0;
};

struct NeffRow {
  Index d = 0;
  Index n = 0;
  double n_eff = 0;
  /// Index into ratio_grid (or n_grid).
  int point = 0;
  int count = 0;
  int failed = 0;
  double mean_error = 0;
  double std_error = 0;
};

struct NeffReport {
  std::vector<NeffRow> rows;
  ExperimentReport detail;
};

/// l1 adaptive Huber under t_df noise with tau = c_tau v_delta (n/log d)^{1/(1+delta)}.
NeffReport run_neff_experiment(const NeffOptions& opt);

struct BiasRow {
  double tau = 0;
  double bias = 0;
  /// Plug-in standard error of the fitted coefficient vector's norm.
  double stderr_ = 0;
};

/// Approximates the population Huber coefficient at each tau by a fit on one
/// large sample (intercept included; the intercept absorbs the shift that
/// asymmetric noise induces) and reports ||b_tau - beta*||_2.
std::vector<BiasRow> check_bias_decay(const NoiseSpec& noise, const std::vector<double>& tau_grid,
                                      Index n_large = 100000, std::uint64_t seed = 12345, Index d = 5);

struct TruncatedMomentReport {
  double tau = 0;
  double kappa = 0;
  Index draws = 0;
  double mean_psi = 0, se_mean_psi = 0;
  double mean_psi2 = 0, se_mean_psi2 = 0;
  double sigma2 = 0;
  double abs_moment = 0;  // E|eps|^{2+kappa}
  double first_bound = 0;  // min(sigma^2/tau, tau^{-1-kappa} E|eps|^{2+kappa})
  double second_lower = 0;  // sigma^2 - 2 kappa^{-1} tau^{-kappa} E|eps|^{2+kappa}
  double second_lower_se = 0;
  bool first_holds = false;
  bool second_holds = false;
};

/// Monte Carlo estimates of E psi_tau(eps), E psi_tau^2(eps), sigma^2 and
/// E|eps|^{2+kappa}, with both truncated-moment inequalities checked at
/// 3 Monte Carlo standard errors. The second inequality is vacuous for kappa = 0.
TruncatedMomentReport check_truncated_moments(const NoiseSpec& noise, double tau, double kappa,
                                              Index n_mc = 1000000, std::uint64_t seed = 12345);

/// m4 / m2^2 (non-excess; about 3 for normal data).
double kurtosis(const Vector& v);

}  // namespace adahuber
