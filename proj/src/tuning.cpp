#include "adahuber/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>

#include "adahuber/error.hpp"
#include "adahuber/huber_core.hpp"
#include "adahuber/linalg.hpp"
#include "adahuber/solver_irls.hpp"
#include "adahuber/solver_lamm.hpp"

namespace adahuber {

double estimate_sigma_crude(const Vector& y) {
  if (y.size() < 2) throw InvalidArgument("estimate_sigma_crude: need at least 2 observations");
  const double mean = y.mean();
  const double var = (y.array() - mean).square().mean();
  if (!(var > 0)) throw DegenerateSample("estimate_sigma_crude: response has zero variance");
  return std::sqrt(var);
}

double effective_sample_size(Index n, Index d, bool high_dim) {
  if (n < 1) throw InvalidArgument("effective_sample_size: n must be >= 1");
  if (!high_dim) return static_cast<double>(n);
  if (d < 2) throw InvalidArgument("effective_sample_size: high-dimensional mode needs d >= 2");
  return static_cast<double>(n) / std::log(static_cast<double>(d));
}

HuberParams default_params(double sigma_hat, double n_eff, double t, double c_tau, double c_lambda) {
  for (double v : {sigma_hat, n_eff, t, c_tau, c_lambda})
    if (!std::isfinite(v) || !(v > 0)) throw InvalidArgument("default_params: arguments must be finite and > 0");
  HuberParams p;
  p.tau = c_tau * sigma_hat * std::sqrt(n_eff / t);
  p.lambda = c_lambda * sigma_hat * std::sqrt(t / n_eff);
  return p;
}

double moment_estimate(const Vector& residuals, double delta) {
  if (residuals.size() < 2) throw InvalidArgument("moment_estimate: need at least 2 residuals");
  if (!(delta > 0) || delta > 1) throw InvalidArgument("moment_estimate: delta must lie in (0, 1]");
  const double mean = residuals.mean();
  return (residuals.array() - mean).abs().pow(1.0 + delta).mean();
}

double moment_tau(double v_hat, double n_eff, double t, double c_tau, double delta) {
  for (double v : {v_hat, n_eff, t, c_tau, delta})
    if (!std::isfinite(v) || !(v > 0)) throw InvalidArgument("moment_tau: arguments must be finite and > 0");
  const double e = delta < 1.0 ? 1.0 / (1.0 + delta) : 0.5;
  return c_tau * v_hat * std::pow(n_eff / t, e);
}

FitResult fit_with_constants(const Dataset& data, double c_tau, double c_lambda, double t, bool high_dim,
                             const TuningGrid& grid, HuberParams* resolved) {
  const double sigma = estimate_sigma_crude(data.y());
  const double n_eff = effective_sample_size(data.n(), data.d(), high_dim);
  HuberParams params = default_params(sigma, n_eff, t, c_tau, c_lambda);
  if (!high_dim) params.lambda = 0.0;
  if (resolved) *resolved = params;
  return high_dim ? fit_l1_huber(data, params, grid.lamm) : fit_huber(data, params.tau, grid.irls);
}

CvResult cross_validate(const Dataset& data, const TuningGrid& grid, bool high_dim) {
  if (grid.c_tau.empty() || grid.c_lambda.empty()) throw InvalidArgument("cross_validate: empty grid");
  if (grid.folds < 2) throw InvalidArgument("cross_validate: need at least 2 folds");
  if (grid.folds > data.n()) throw InvalidArgument("cross_validate: more folds than rows");
  const double t = grid.t.value_or(std::log(static_cast<double>(data.n())));

  std::vector<Index> order(static_cast<std::size_t>(data.n()));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(grid.seed);
  std::shuffle(order.begin(), order.end(), rng);

  // Contiguous blocks of the shuffled order; sizes differ by at most one.
  const int k = grid.folds;
  std::vector<Dataset> train, test;
  train.reserve(static_cast<std::size_t>(k));
  test.reserve(static_cast<std::size_t>(k));
  for (int f = 0; f < k; ++f) {
    const std::size_t lo = order.size() * static_cast<std::size_t>(f) / static_cast<std::size_t>(k);
    const std::size_t hi = order.size() * static_cast<std::size_t>(f + 1) / static_cast<std::size_t>(k);
    std::vector<Index> in, out;
    for (std::size_t i = 0; i < order.size(); ++i) (i >= lo && i < hi ? out : in).push_back(order[i]);
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    train.push_back(data.rows(in));
    test.push_back(data.rows(out));
  }

  const std::size_t nl = grid.c_lambda.size();
  const std::size_t cells = grid.c_tau.size() * nl;
  CvResult res;
  res.table.resize(cells);
  const std::size_t tasks = cells * static_cast<std::size_t>(k);
  std::vector<double> fold_mae(tasks, 0.0);
  std::vector<char> fold_failed(tasks, 0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t task = 0; task < tasks; ++task) {
    const std::size_t cell = task / static_cast<std::size_t>(k);
    const std::size_t f = task % static_cast<std::size_t>(k);
    try {
      const FitResult fit = fit_with_constants(train[f], grid.c_tau[cell / nl], grid.c_lambda[cell % nl], t,
                                               high_dim, grid);
      const Vector pred = test[f].design() * fit.beta;
      fold_mae[task] = mae(test[f].y(), pred);
      if (!std::isfinite(fold_mae[task])) fold_failed[task] = 1;
    } catch (const std::exception&) {
      fold_failed[task] = 1;
    }
  }

  for (std::size_t cell = 0; cell < cells; ++cell) {
    CvCell& c = res.table[cell];
    c.c_tau = grid.c_tau[cell / nl];
    c.c_lambda = grid.c_lambda[cell % nl];
    double sum = 0.0;
    for (int f = 0; f < k; ++f) {
      const std::size_t task = cell * static_cast<std::size_t>(k) + static_cast<std::size_t>(f);
      c.failed = c.failed || fold_failed[task];
      c.fold_mae.push_back(fold_mae[task]);
      sum += fold_mae[task];
    }
    c.mean_mae = sum / k;
  }

  const CvCell* best = nullptr;
  for (const CvCell& c : res.table) {
    if (c.failed) continue;
    if (!best || c.mean_mae < best->mean_mae ||
        (c.mean_mae == best->mean_mae &&
         (c.c_tau > best->c_tau || (c.c_tau == best->c_tau && c.c_lambda > best->c_lambda))))
      best = &c;
  }
  if (!best) throw TuningError("cross_validate: every grid cell failed");

  res.c_tau = best->c_tau;
  res.c_lambda = best->c_lambda;
  res.forced = cells == 1;
  res.fit = fit_with_constants(data, res.c_tau, res.c_lambda, t, high_dim, grid, &res.params);
  return res;
}

std::vector<double> LepskiGrid::sigmas() const {
  validate();
  std::vector<double> out;
  for (int j = 0;; ++j) {
    const double s = sigma_min * std::pow(a, j);
    if (!(s < a * sigma_max)) break;
    out.push_back(s);
  }
  return out;
}

void LepskiGrid::validate() const {
  if (!(sigma_min > 0) || !(sigma_max >= sigma_min) || !std::isfinite(sigma_max))
    throw InvalidArgument("LepskiGrid: need 0 < sigma_min <= sigma_max < inf");
  if (!(a > 1) || !std::isfinite(a)) throw InvalidArgument("LepskiGrid: a must be > 1");
  if (!(t > 0)) throw InvalidArgument("LepskiGrid: t must be > 0");
}

LepskiGrid LepskiGrid::defaults(const Dataset& data, double K, double a) {
  if (!(K > 1)) throw InvalidArgument("LepskiGrid: K must be > 1");
  if (data.n() <= data.p()) throw InvalidArgument("LepskiGrid: need n > number of coefficients");
  const FitResult ols = fit_ols(data);
  const Vector r = data.y() - data.design() * ols.beta;
  const double s2 = r.squaredNorm() / static_cast<double>(data.n() - data.p());
  if (!(s2 > 0)) throw DegenerateSample("LepskiGrid: OLS residuals vanish; sigma_hat is zero");
  const double s = std::sqrt(s2);
  LepskiGrid g;
  g.sigma_min = s / K;
  g.sigma_max = K * s;
  g.a = a;
  g.t = std::log(static_cast<double>(data.n()));
  return g;
}

int lepski_rule(const Matrix& distances, const std::vector<double>& thresholds) {
  const int m = static_cast<int>(thresholds.size());
  if (distances.rows() != m || distances.cols() != m)
    throw InvalidArgument("lepski_rule: distance matrix does not match grid");
  for (int j = 0; j < m; ++j) {
    bool ok = true;
    for (int k = j + 1; k < m && ok; ++k) ok = distances(k, j) <= thresholds[static_cast<std::size_t>(j)];
    if (ok) return j;
  }
  return m - 1;
}

std::vector<double> lepski_thresholds(const std::vector<double>& sigmas, double l_tilde, Index p, double t,
                                      Index n) {
  std::vector<double> out;
  out.reserve(sigmas.size());
  const double scale = 8.0 * l_tilde * std::sqrt(static_cast<double>(p)) * std::sqrt(t / static_cast<double>(n));
  for (double s : sigmas) out.push_back(scale * s);
  return out;
}

LepskiResult lepski_select(const Dataset& data, const LepskiGrid& grid, const SolverConfig& cfg) {
  grid.validate();
  if (data.n() <= data.p()) throw InvalidArgument("lepski_select: need n > number of coefficients");
  const double n = static_cast<double>(data.n());
  const Matrix& x = data.design();
  const Matrix sn = x.transpose() * x / n;
  const linalg::SymmetricRoots roots = linalg::symmetric_roots(sn, "Gram matrix S_n");

  LepskiResult res;
  res.l_tilde = (x * roots.inv_sqrt).cwiseAbs().maxCoeff();
  res.sigmas = grid.sigmas();
  const std::size_t m = res.sigmas.size();
  for (double s : res.sigmas) res.taus.push_back(s * std::sqrt(n / grid.t));

  res.fits.resize(m);
  std::vector<std::exception_ptr> errors(m);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < m; ++j) {
    try {
      res.fits[j] = fit_huber(data, res.taus[j], cfg);
    } catch (...) {
      errors[j] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  res.distances = Matrix::Zero(static_cast<Index>(m), static_cast<Index>(m));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      res.distances(static_cast<Index>(k), static_cast<Index>(j)) =
          (roots.sqrt * (res.fits[k].beta - res.fits[j].beta)).norm();

  res.thresholds = lepski_thresholds(res.sigmas, res.l_tilde, data.p(), grid.t, data.n());
  res.selected = lepski_rule(res.distances, res.thresholds);
  res.fit = res.fits[static_cast<std::size_t>(res.selected)];
  return res;
}

}  // namespace adahuber
