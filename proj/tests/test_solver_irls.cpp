#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "adahuber/error.hpp"
#include "adahuber/huber_core.hpp"
#include "adahuber/solver_irls.hpp"
#include "oracles.hpp"

using namespace adahuber;

namespace {

Dataset mean_problem() {
  Vector y(4);
  y << -1, 0, 1, 10;
  return Dataset(Matrix::Ones(4, 1), y);
}

Dataset heavy(std::uint64_t seed, Index n, Index d) {
  std::mt19937_64 rng(seed);
  Matrix x = oracle::gaussian(rng, n, d);
  std::student_t_distribution<double> t(1.5);
  Vector y = x * Vector::LinSpaced(d, 1, -1);
  for (Index i = 0; i < n; ++i) y[i] += t(rng);
  return Dataset(x, y);
}

}  // namespace

TEST(FitOls, Examples) {
  std::mt19937_64 rng(1);
  const Matrix x = oracle::gaussian(rng, 30, 4);
  const Vector beta = Vector::LinSpaced(4, -2, 2);
  EXPECT_LE((fit_ols(Dataset(x, x * beta)).beta - beta).norm(), 1e-8);

  EXPECT_NEAR(fit_ols(mean_problem()).beta[0], 2.5, 1e-12);

  const Matrix x2 = oracle::gaussian(rng, 50, 5);
  const Vector y2 = oracle::gaussian(rng, 50);
  const Vector normal_eq = (x2.transpose() * x2).inverse() * x2.transpose() * y2;
  const FitResult ols = fit_ols(Dataset(x2, y2));
  EXPECT_LE((ols.beta - normal_eq).norm(), 1e-8);
  EXPECT_LE((x2.transpose() * (y2 - x2 * ols.beta)).norm() / 50.0, 1e-8 * (1 + y2.norm()));
}

TEST(FitOls, RankDeficient) {
  Matrix x(4, 2);
  x << 1, 2, 2, 4, 3, 6, 4, 8;
  try {
    fit_ols(Dataset(x, Vector::Ones(4)));
    FAIL() << "expected RankDeficiency";
  } catch (const RankDeficiency& e) {
    EXPECT_GT(e.condition_number(), 1e12);
  }
}

TEST(FitHuber, Examples) {
  std::mt19937_64 rng(2);
  const Matrix x = oracle::gaussian(rng, 40, 3);
  const Vector y = oracle::gaussian(rng, 40);
  const Dataset data(x, y);
  EXPECT_LE((fit_huber(data, 1e12).beta - fit_ols(data).beta).norm(), 1e-8);

  const FitResult m = fit_huber(mean_problem(), 1.0);
  EXPECT_TRUE(m.converged);
  EXPECT_NEAR(m.beta[0], 0.5, 1e-8);
  EXPECT_NEAR(m.beta[0], oracle::grid_minimize_1d(Vector::Ones(4), mean_problem().y(), 1.0, -5, 15, 1e-3), 1e-6);

  const Vector beta = Vector::LinSpaced(3, 1, 3);
  for (double tau : {0.01, 1.0, 100.0}) {
    const SolverConfig cfg = SolverConfig::irls_defaults();
    EXPECT_LE((fit_huber(Dataset(x, x * beta), tau, cfg).beta - beta).norm(), cfg.tol);
  }
}

TEST(FitHuber, StationaryAtReturn) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset data = heavy(seed, 120, 4);
    const FitResult f = fit_huber(data, 1.0);
    ASSERT_TRUE(f.converged);
    EXPECT_LE(gradient(f.beta, data, 1.0).norm(), 1e-6 * (1 + data.y().norm()));
    EXPECT_NEAR(f.gradient_norm, gradient(f.beta, data, 1.0).norm(), 1e-12);
  }
}

TEST(FitHuber, MonotoneDescent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FitResult f = fit_huber(heavy(seed, 80, 5), 0.5);
    ASSERT_GE(f.trajectory.size(), 1u);
    for (std::size_t k = 1; k < f.trajectory.size(); ++k)
      EXPECT_LE(f.trajectory[k], f.trajectory[k - 1] + 1e-10);
  }
}

TEST(FitHuber, MatchesGridOracleIn1D) {
  std::mt19937_64 rng(77);
  std::student_t_distribution<double> t(2.0);
  for (int k = 0; k < 25; ++k) {
    const Index n = 10 + 7 * k;
    Vector x = oracle::gaussian(rng, n), y(n);
    for (Index i = 0; i < n; ++i) y[i] = 1.5 * x[i] + t(rng);
    const double tau = 0.5 + 0.1 * k;
    const double b = fit_huber(Dataset(x, y), tau).beta[0];
    EXPECT_NEAR(b, oracle::grid_minimize_1d(x, y, tau, -10, 10, 1e-3), 1e-4) << "instance " << k;
  }
}

TEST(FitHuber, ScaleEquivariance) {
  const Dataset data = heavy(3, 100, 3);
  const Vector base = fit_huber(data, 0.8).beta;
  for (double c : {0.5, 3.0, 10.0}) {
    const Vector scaled = fit_huber(data.with_response(c * data.y()), c * 0.8).beta;
    EXPECT_LE((scaled - c * base).norm(), 1e-6 * c * base.norm());
  }
}

TEST(FitHuber, RowPermutationInvariance) {
  const Dataset data = heavy(4, 90, 3);
  std::vector<Index> idx(90);
  std::iota(idx.begin(), idx.end(), Index{0});
  std::shuffle(idx.begin(), idx.end(), std::mt19937_64(4));
  EXPECT_LE((fit_huber(data.rows(idx), 1.0).beta - fit_huber(data, 1.0).beta).norm(), 1e-10);
}

TEST(FitHuber, RobustToOneCorruptedResponse) {
  std::mt19937_64 rng(12);
  const Matrix x = oracle::gaussian(rng, 100, 3);
  const Vector y = x * Vector::Constant(3, 1.0) + oracle::gaussian(rng, 100);
  Vector bad = y;
  bad[17] += 1e6;
  const Vector h = fit_huber(Dataset(x, y), 1.0).beta, hb = fit_huber(Dataset(x, bad), 1.0).beta;
  const Vector o = fit_ols(Dataset(x, y)).beta, ob = fit_ols(Dataset(x, bad)).beta;
  EXPECT_LT((hb - h).norm(), 0.1 * h.norm());
  EXPECT_GT((ob - o).norm(), o.norm());
}

TEST(FitHuber, MaxIterIsSoftFailure) {
  SolverConfig cfg = SolverConfig::irls_defaults();
  cfg.max_iter = 1;
  const FitResult f = fit_huber(heavy(5, 100, 3), 0.1, cfg);
  EXPECT_FALSE(f.converged);
  EXPECT_EQ(f.iterations, 1);
}

TEST(FitHuber, RejectsBadTau) {
  EXPECT_THROW(fit_huber(mean_problem(), 0.0), InvalidArgument);
}

TEST(FitHuber, InterceptColumn) {
  std::mt19937_64 rng(6);
  const Matrix x = oracle::gaussian(rng, 200, 2);
  const Vector y = x * Vector::Constant(2, 2.0) + Vector::Constant(200, 7.0);
  const FitResult f = fit_huber(Dataset(x, y, true), 0.5);
  EXPECT_NEAR(f.beta[2], 7.0, 1e-6);
}
