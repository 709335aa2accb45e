#include "adahuber/simlab.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "adahuber/error.hpp"
#include "adahuber/huber_core.hpp"
#include "adahuber/solver_irls.hpp"
#include "adahuber/solver_lamm.hpp"
#include "adahuber/tuning.hpp"
#include "adahuber/version.hpp"

namespace adahuber {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

nlohmann::json base_metadata(const std::string& experiment, std::uint64_t seed) {
  return {{"experiment", experiment},
          {"seed", seed},
          {"version", kVersion},
          {"generator", std::string(kGeneratorId)}};
}

std::string short_real(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double l2_error(const Vector& beta, const Vector& truth) { return (beta.head(truth.size()) - truth).norm(); }

}  // namespace

NoiseSpec NoiseSpec::normal(double variance) {
  if (!(variance > 0) || !std::isfinite(variance)) throw InvalidArgument("normal noise: variance must be > 0");
  return NoiseSpec(Family::normal, variance, false);
}

NoiseSpec NoiseSpec::student_t(double df) {
  if (!(df > 1) || !std::isfinite(df)) throw InvalidArgument("student_t noise: df must be > 1");
  return NoiseSpec(Family::student_t, df, false);
}

NoiseSpec NoiseSpec::lognormal(double log_variance, bool centered) {
  if (!(log_variance > 0) || !std::isfinite(log_variance))
    throw InvalidArgument("lognormal noise: log_variance must be > 0");
  return NoiseSpec(Family::lognormal, log_variance, centered);
}

double NoiseSpec::variance() const {
  switch (family_) {
    case Family::normal:
      return param_;
    case Family::student_t:
      return param_ > 2 ? param_ / (param_ - 2) : std::numeric_limits<double>::infinity();
    case Family::lognormal:
      return (std::exp(param_) - 1.0) * std::exp(param_);
  }
  return kNaN;
}

std::string NoiseSpec::name() const {
  switch (family_) {
    case Family::normal:
      return "normal(" + short_real(param_) + ")";
    case Family::student_t:
      return "student_t(" + short_real(param_) + ")";
    case Family::lognormal:
      return "lognormal(" + short_real(param_) + (centered_ ? ",centered)" : ",raw)");
  }
  return {};
}

double NoiseSpec::sample(Engine& rng) const {
  switch (family_) {
    case Family::normal: {
      std::normal_distribution<double> dist(0.0, std::sqrt(param_));
      return dist(rng);
    }
    case Family::student_t: {
      std::student_t_distribution<double> dist(param_);
      return dist(rng);
    }
    case Family::lognormal: {
      std::lognormal_distribution<double> dist(0.0, std::sqrt(param_));
      const double v = dist(rng);
      return centered_ ? v - std::exp(0.5 * param_) : v;
    }
  }
  return kNaN;
}

Vector NoiseSpec::sample(Engine& rng, Index n) const {
  Vector out(n);
  for (Index i = 0; i < n; ++i) out[i] = sample(rng);
  return out;
}

Vector default_beta_star(Index d) {
  Vector b = Vector::Zero(d);
  const double head[] = {5.0, -2.0, 0.0, 0.0, 3.0};
  for (Index j = 0; j < std::min<Index>(d, 5); ++j) b[j] = head[j];
  return b;
}

void ExperimentSpec::validate() const {
  if (n < 1 || d < 1) throw InvalidArgument("ExperimentSpec: n and d must be >= 1");
  if (beta_star.size() != d) throw InvalidArgument("ExperimentSpec: beta_star length must equal d");
  if (replications < 1) throw InvalidArgument("ExperimentSpec: replications must be >= 1");
}

Dataset gen_linear_data(const ExperimentSpec& spec, std::uint64_t stream_seed) {
  spec.validate();
  Engine xrng(derive_seed(stream_seed, 0));
  Engine erng(derive_seed(stream_seed, 1));
  std::normal_distribution<double> std_normal;
  Matrix x(spec.n, spec.d);
  for (Index i = 0; i < spec.n; ++i)
    for (Index j = 0; j < spec.d; ++j) x(i, j) = std_normal(xrng);
  Vector y = x * spec.beta_star + spec.noise.sample(erng, spec.n);
  return Dataset(std::move(x), std::move(y), spec.intercept);
}

const SummaryRow& ExperimentReport::cell(const std::string& setting, const std::string& estimator) const {
  for (const auto& s : summary)
    if (s.setting == setting && s.estimator == estimator) return s;
  throw InvalidArgument("ExperimentReport: no summary cell " + setting + "/" + estimator);
}

std::vector<SummaryRow> summarize(const std::vector<ReplicationRecord>& records) {
  std::vector<SummaryRow> rows;
  std::vector<std::vector<double>> values;
  for (const auto& r : records) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& s) {
      return s.setting == r.setting && s.estimator == r.estimator;
    });
    std::size_t k;
    if (it == rows.end()) {
      rows.push_back({r.setting, r.estimator, 0, 0, 0, 0});
      values.emplace_back();
      k = rows.size() - 1;
    } else {
      k = static_cast<std::size_t>(it - rows.begin());
    }
    if (r.failed) {
      ++rows[k].failed;
    } else {
      values[k].push_back(r.l2_error);
    }
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& v = values[k];
    rows[k].count = static_cast<int>(v.size());
    if (v.empty()) {
      rows[k].mean = rows[k].std = kNaN;
      continue;
    }
    double s = 0;
    for (double e : v) s += e;
    const double mean = s / static_cast<double>(v.size());
    double ss = 0;
    for (double e : v) ss += (e - mean) * (e - mean);
    rows[k].mean = mean;
    rows[k].std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  }
  return rows;
}

ExperimentReport run_table1(const Table1Options& opt) {
  if (opt.reps < 1) throw InvalidArgument("table1: reps must be >= 1");
  if (opt.n <= opt.d) throw InvalidArgument("table1: need n > d");
  const auto start = std::chrono::steady_clock::now();

  const std::vector<NoiseSpec> noises{NoiseSpec::normal(4.0), NoiseSpec::student_t(1.5),
                                      NoiseSpec::lognormal(4.0, opt.lognormal_centered)};
  const std::vector<std::string> settings{"normal", "student_t", "lognormal"};
  const std::size_t per_rep = noises.size() * 2;
  std::vector<ReplicationRecord> records(static_cast<std::size_t>(opt.reps) * per_rep);

  ExperimentSpec spec;
  spec.n = opt.n;
  spec.d = opt.d;
  spec.beta_star = default_beta_star(opt.d);
  spec.replications = opt.reps;
  spec.seed = opt.seed;

  TuningGrid grid;
  grid.c_tau = opt.c_tau;
  grid.c_lambda = {1.0};
  grid.folds = opt.folds;
  grid.t = std::log(static_cast<double>(opt.n));

#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(opt.threads))
  for (int rep = 0; rep < opt.reps; ++rep) {
    const std::uint64_t rep_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(rep));
    for (std::size_t s = 0; s < noises.size(); ++s) {
      ExperimentSpec local = spec;
      local.noise = noises[s];
      const std::size_t base = static_cast<std::size_t>(rep) * per_rep + 2 * s;
      ReplicationRecord ahr{rep, settings[s], "AHR", kNaN, kNaN, false};
      ReplicationRecord ols{rep, settings[s], "OLS", kNaN, kNaN, false};
      try {
        const Dataset data = gen_linear_data(local, rep_seed);
        try {
          ols.l2_error = l2_error(fit_ols(data).beta, spec.beta_star);
        } catch (const std::exception&) {
          ols.failed = true;
        }
        try {
          TuningGrid g = grid;
          g.seed = derive_seed(rep_seed, 7, s);
          const CvResult cv = cross_validate(data, g, false);
          ahr.l2_error = l2_error(cv.fit.beta, spec.beta_star);
          ahr.tau = cv.params.tau;
        } catch (const std::exception&) {
          ahr.failed = true;
        }
      } catch (const std::exception&) {
        ahr.failed = ols.failed = true;
      }
      records[base] = ahr;
      records[base + 1] = ols;
    }
  }

  // Regroup setting-major so each summary block is contiguous.
  ExperimentReport rep;
  rep.experiment = "table1";
  for (const auto& setting : settings)
    for (const auto& r : records)
      if (r.setting == setting) rep.records.push_back(r);
  rep.summary = summarize(rep.records);
  rep.metadata = base_metadata("table1", opt.seed);
  rep.metadata["spec"] = {{"reps", opt.reps},
                          {"n", opt.n},
                          {"d", opt.d},
                          {"folds", opt.folds},
                          {"c_tau_grid", opt.c_tau},
                          {"t", "log n"},
                          {"noise", {noises[0].name(), noises[1].name(), noises[2].name()}},
                          {"beta_star", std::vector<double>(spec.beta_star.data(), spec.beta_star.data() + spec.d)}};
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

double phase_delta(double df) { return df - 1.0 - 0.05; }

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("ls_slope: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0)) throw InvalidArgument("ls_slope: x has no spread");
  return sxy / sxx;
}

PhaseReport run_phase_transition(const PhaseOptions& opt) {
  if (opt.df_grid.empty() || opt.n_grid.empty()) throw InvalidArgument("phase: empty df or n grid");
  for (double df : opt.df_grid)
    if (!(df > 1.05)) throw InvalidArgument("phase: every df must exceed 1.05");
  if (opt.reps < 1) throw InvalidArgument("phase: reps must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  const std::size_t ndf = opt.df_grid.size();
  const std::size_t nn = opt.n_grid.size();
  const std::size_t reps = static_cast<std::size_t>(opt.reps);
  std::vector<ReplicationRecord> records(nn * ndf * reps);
  const Vector beta_star = default_beta_star(opt.d);

  const std::size_t tasks = nn * reps;
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(opt.threads))
  for (std::size_t task = 0; task < tasks; ++task) {
    const std::size_t ni = task / reps;
    const std::size_t rep = task % reps;
    const Index n = opt.n_grid[ni];
    const double t = opt.t.value_or(std::log(static_cast<double>(n)));
    for (std::size_t di = 0; di < ndf; ++di) {
      const double df = opt.df_grid[di];
      const double delta = phase_delta(df);
      ReplicationRecord rec{static_cast<int>(rep), "", "AHR", kNaN, kNaN, false};
      std::ostringstream setting;
      setting << "n=" << n << ",df=" << short_real(df);
      rec.setting = setting.str();
      try {
        ExperimentSpec spec;
        spec.n = n;
        spec.d = opt.d;
        spec.beta_star = beta_star;
        spec.noise = NoiseSpec::student_t(df);
        // Common random numbers across df: the stream depends on (n, rep) only.
        const Dataset data = gen_linear_data(spec, derive_seed(opt.seed, static_cast<std::uint64_t>(n), rep));
        const double n_eff = effective_sample_size(n, opt.d, opt.high_dim);
        Vector pilot;
        if (opt.high_dim) {
          pilot = data.y().array() - data.y().mean();
        } else {
          pilot = data.y() - data.design() * fit_ols(data).beta;
        }
        const double v_hat = moment_estimate(pilot, std::min(delta, 1.0));
        const double tau = moment_tau(v_hat, n_eff, t, opt.c_tau, delta);
        rec.tau = tau;
        if (opt.high_dim) {
          HuberParams params = default_params(estimate_sigma_crude(data.y()), n_eff, t, 1.0, opt.c_lambda);
          params.tau = tau;
          rec.l2_error = l2_error(fit_l1_huber(data, params).beta, beta_star);
        } else {
          rec.l2_error = l2_error(fit_huber(data, tau).beta, beta_star);
        }
      } catch (const std::exception&) {
        rec.failed = true;
      }
      records[(ni * ndf + di) * reps + rep] = rec;
    }
  }

  PhaseReport out;
  out.detail.experiment = "phase";
  out.detail.records = records;
  out.detail.summary = summarize(records);
  for (std::size_t ni = 0; ni < nn; ++ni) {
    for (std::size_t di = 0; di < ndf; ++di) {
      PhaseRow row;
      row.df = opt.df_grid[di];
      row.delta = phase_delta(row.df);
      row.n = opt.n_grid[ni];
      row.d = opt.d;
      double sum = 0, sum_nl = 0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const auto& r = records[(ni * ndf + di) * reps + rep];
        if (r.failed || !(r.l2_error > 0)) {
          ++row.failed;
          continue;
        }
        ++row.count;
        sum += r.l2_error;
        sum_nl += -std::log(r.l2_error);
      }
      row.mean_error = row.count ? sum / row.count : kNaN;
      row.neg_log_mean_error = -std::log(row.mean_error);
      row.mean_neg_log_error = row.count ? sum_nl / row.count : kNaN;
      out.rows.push_back(row);
    }
  }
  std::vector<long long> ns(opt.n_grid.begin(), opt.n_grid.end());
  out.detail.metadata = base_metadata("phase", opt.seed);
  out.detail.metadata["spec"] = {{"df_grid", opt.df_grid},
                                 {"n_grid", ns},
                                 {"d", opt.d},
                                 {"reps", opt.reps},
                                 {"high_dim", opt.high_dim},
                                 {"c_tau", opt.c_tau},
                                 {"c_lambda", opt.c_lambda},
                                 {"t", opt.t ? nlohmann::json(*opt.t) : nlohmann::json("log n")},
                                 {"delta_rule", "df - 1 - 0.05"}};
  out.detail.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

NeffReport run_neff_experiment(const NeffOptions& opt) {
  if (opt.d_grid.empty()) throw InvalidArgument("neff: empty d grid");
  for (Index d : opt.d_grid)
    if (d < 2) throw InvalidArgument("neff: every d must be >= 2");
  if (opt.n_grid.empty() == opt.ratio_grid.empty())
    throw InvalidArgument("neff: give exactly one of n_grid and ratio_grid");
  if (opt.reps < 1) throw InvalidArgument("neff: reps must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  struct Point {
    Index d, n;
    int point;
  };
  std::vector<Point> points;
  for (Index d : opt.d_grid) {
    const double logd = std::log(static_cast<double>(d));
    if (!opt.n_grid.empty()) {
      for (std::size_t k = 0; k < opt.n_grid.size(); ++k) points.push_back({d, opt.n_grid[k], static_cast<int>(k)});
    } else {
      for (std::size_t k = 0; k < opt.ratio_grid.size(); ++k)
        points.push_back({d, static_cast<Index>(std::llround(opt.ratio_grid[k] * logd)), static_cast<int>(k)});
    }
  }
  for (const auto& p : points)
    if (p.n < 3) throw InvalidArgument("neff: sample size below 3");

  const std::size_t reps = static_cast<std::size_t>(opt.reps);
  std::vector<ReplicationRecord> records(points.size() * reps);
  const std::size_t tasks = points.size() * reps;
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(opt.threads))
  for (std::size_t task = 0; task < tasks; ++task) {
    const Point& pt = points[task / reps];
    const std::size_t rep = task % reps;
    std::ostringstream setting;
    setting << "d=" << pt.d << ",n=" << pt.n;
    ReplicationRecord rec{static_cast<int>(rep), setting.str(), "AHR-L1", kNaN, kNaN, false};
    try {
      ExperimentSpec spec;
      spec.n = pt.n;
      spec.d = pt.d;
      spec.beta_star = default_beta_star(pt.d);
      spec.noise = NoiseSpec::student_t(opt.df);
      const std::uint64_t stream =
          derive_seed(opt.seed, static_cast<std::uint64_t>(pt.d) * 1000003ULL + static_cast<std::uint64_t>(pt.point), rep);
      const Dataset data = gen_linear_data(spec, stream);
      const double n_eff = effective_sample_size(pt.n, pt.d, true);
      const Vector centered = data.y().array() - data.y().mean();
      const double v_hat = moment_estimate(centered, std::min(opt.delta, 1.0));
      HuberParams params = default_params(estimate_sigma_crude(data.y()), n_eff,
                                          std::log(static_cast<double>(pt.n)), 1.0, opt.c_lambda);
      params.tau = moment_tau(v_hat, n_eff, 1.0, opt.c_tau, opt.delta);
      rec.tau = params.tau;
      rec.l2_error = l2_error(fit_l1_huber(data, params).beta, spec.beta_star);
    } catch (const std::exception&) {
      rec.failed = true;
    }
    records[task] = rec;
  }

  NeffReport out;
  out.detail.experiment = "neff";
  out.detail.records = records;
  out.detail.summary = summarize(records);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const SummaryRow& s = out.detail.summary[k];
    NeffRow row;
    row.d = points[k].d;
    row.n = points[k].n;
    row.n_eff = static_cast<double>(row.n) / std::log(static_cast<double>(row.d));
    row.point = points[k].point;
    row.count = s.count;
    row.failed = s.failed;
    row.mean_error = s.mean;
    row.std_error = s.std;
    out.rows.push_back(row);
  }
  std::vector<long long> ds(opt.d_grid.begin(), opt.d_grid.end());
  std::vector<long long> ns(opt.n_grid.begin(), opt.n_grid.end());
  out.detail.metadata = base_metadata("neff", opt.seed);
  out.detail.metadata["spec"] = {{"d_grid", ds},      {"n_grid", ns},         {"ratio_grid", opt.ratio_grid},
                                 {"reps", opt.reps},  {"df", opt.df},         {"delta", opt.delta},
                                 {"c_tau", opt.c_tau}, {"c_lambda", opt.c_lambda}};
  out.detail.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<BiasRow> check_bias_decay(const NoiseSpec& noise, const std::vector<double>& tau_grid, Index n_large,
                                      std::uint64_t seed, Index d) {
  if (tau_grid.empty()) throw InvalidArgument("check_bias_decay: empty tau grid");
  ExperimentSpec spec;
  spec.n = n_large;
  spec.d = d;
  spec.beta_star = default_beta_star(d);
  spec.noise = noise;
  spec.intercept = true;
  spec.seed = seed;
  const Dataset data = gen_linear_data(spec);
  Vector truth = Vector::Zero(data.p());
  truth.head(d) = spec.beta_star;

  const Matrix& x = data.design();
  const double n = static_cast<double>(data.n());
  const Matrix sn_inv = (x.transpose() * x / n).inverse();

  std::vector<BiasRow> rows(tau_grid.size());
  std::vector<FitResult> fits(tau_grid.size());
  std::vector<std::exception_ptr> errors(tau_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < tau_grid.size(); ++k) {
    try {
      fits[k] = fit_huber(data, tau_grid[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t k = 0; k < tau_grid.size(); ++k) {
    const double tau = tau_grid[k];
    const FitResult& fit = fits[k];
    const Vector r = data.y() - x * fit.beta;
    double psi2 = 0, inside = 0;
    for (Index i = 0; i < r.size(); ++i) {
      const double s = detail::score(r[i], tau);
      psi2 += s * s;
      inside += std::abs(r[i]) <= tau ? 1.0 : 0.0;
    }
    psi2 /= n;
    inside /= n;
    rows[k].tau = tau;
    rows[k].bias = (fit.beta - truth).norm();
    rows[k].stderr_ = inside > 0 ? std::sqrt(psi2 / (inside * inside) * sn_inv.trace() / n) : kNaN;
  }
  return rows;
}

TruncatedMomentReport check_truncated_moments(const NoiseSpec& noise, double tau, double kappa, Index n_mc,
                                              std::uint64_t seed) {
  if (!(tau > 0)) throw InvalidArgument("check_truncated_moments: tau must be > 0");
  if (!(kappa >= 0)) throw InvalidArgument("check_truncated_moments: kappa must be >= 0");
  if (n_mc < 2) throw InvalidArgument("check_truncated_moments: need at least 2 draws");
  Engine rng(derive_seed(seed, 0));
  const double m = static_cast<double>(n_mc);
  const double slack = kappa > 0 ? 2.0 / kappa * std::pow(tau, -kappa) : 0.0;

  // Running sums of each per-draw statistic and its square.
  double s_psi = 0, ss_psi = 0, s_psi2 = 0, ss_psi2 = 0, s_e2 = 0, s_abs = 0, s_d = 0, ss_d = 0;
  for (Index i = 0; i < n_mc; ++i) {
    const double e = noise.sample(rng);
    const double psi = detail::score(e, tau);
    const double psi2 = psi * psi;
    const double e2 = e * e;
    const double a = std::pow(std::abs(e), 2.0 + kappa);
    const double dlow = psi2 - e2 + slack * a;
    s_psi += psi;
    ss_psi += psi * psi;
    s_psi2 += psi2;
    ss_psi2 += psi2 * psi2;
    s_e2 += e2;
    s_abs += a;
    s_d += dlow;
    ss_d += dlow * dlow;
  }
  auto se = [m](double s, double ss) {
    const double mean = s / m;
    return std::sqrt(std::max(0.0, ss / m - mean * mean) / (m - 1.0));
  };

  TruncatedMomentReport rep;
  rep.tau = tau;
  rep.kappa = kappa;
  rep.draws = n_mc;
  rep.mean_psi = s_psi / m;
  rep.se_mean_psi = se(s_psi, ss_psi);
  rep.mean_psi2 = s_psi2 / m;
  rep.se_mean_psi2 = se(s_psi2, ss_psi2);
  rep.sigma2 = s_e2 / m;
  rep.abs_moment = s_abs / m;
  rep.first_bound = std::min(rep.sigma2 / tau, std::pow(tau, -1.0 - kappa) * rep.abs_moment);
  rep.first_holds = std::abs(rep.mean_psi) <= rep.first_bound + 3.0 * rep.se_mean_psi;
  rep.second_lower = rep.sigma2 - slack * rep.abs_moment;
  rep.second_lower_se = se(s_d, ss_d);
  const bool upper = rep.mean_psi2 <= rep.sigma2 + 3.0 * rep.se_mean_psi2;
  const bool lower = kappa == 0 || s_d / m + 3.0 * rep.second_lower_se >= 0;
  rep.second_holds = upper && lower;
  return rep;
}

double kurtosis(const Vector& v) {
  if (v.size() < 4) throw InvalidArgument("kurtosis: need at least 4 values");
  if (!v.allFinite()) throw InvalidArgument("kurtosis: non-finite value");
  if (v.minCoeff() == v.maxCoeff()) throw DegenerateSample("kurtosis: zero variance");
  const double mean = v.mean();
  const Eigen::ArrayXd c = v.array() - mean;
  const double m2 = c.square().mean();
  const double m4 = c.square().square().mean();
  if (!(m2 > 0)) throw DegenerateSample("kurtosis: zero variance");
  return m4 / (m2 * m2);
}

}  // namespace adahuber
