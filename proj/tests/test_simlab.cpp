#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "adahuber/error.hpp"
#include "adahuber/rng.hpp"
#include "adahuber/simlab.hpp"

using namespace adahuber;

TEST(NoiseSpec, Validation) {
  EXPECT_THROW(NoiseSpec::normal(0.0), InvalidArgument);
  EXPECT_THROW(NoiseSpec::student_t(1.0), InvalidArgument);
  EXPECT_THROW(NoiseSpec::lognormal(-1.0), InvalidArgument);
  EXPECT_EQ(NoiseSpec::normal(4).name(), "normal(4)");
  EXPECT_EQ(NoiseSpec::student_t(1.5).name(), "student_t(1.5)");
  EXPECT_EQ(NoiseSpec::lognormal(4).name(), "lognormal(4,centered)");
  EXPECT_TRUE(std::isinf(NoiseSpec::student_t(1.5).variance()));
  EXPECT_FALSE(NoiseSpec::lognormal(1).symmetric());
}

TEST(NoiseSpec, NormalVarianceConverges) {
  Engine rng(derive_seed(1, 2));
  const Vector e = NoiseSpec::normal(4.0).sample(rng, 100000);
  const double var = (e.array() - e.mean()).square().sum() / (e.size() - 1);
  EXPECT_GE(var, 3.8);
  EXPECT_LE(var, 4.2);
}

TEST(NoiseSpec, LognormalCentering) {
  Engine a(7), b(7);
  const NoiseSpec c = NoiseSpec::lognormal(1.0, true), r = NoiseSpec::lognormal(1.0, false);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(c.sample(a), r.sample(b) - std::exp(0.5), 1e-12);
  Engine big(8);
  const Vector e = c.sample(big, 200000);
  EXPECT_NEAR(e.mean(), 0.0, 4 * std::sqrt(c.variance() / 200000));
}

TEST(GenLinearData, DeterministicAndSharedDesign) {
  ExperimentSpec spec;
  spec.n = 50;
  const Dataset a = gen_linear_data(spec, 99), b = gen_linear_data(spec, 99);
  EXPECT_EQ(a.design(), b.design());
  EXPECT_EQ(a.y(), b.y());
  spec.noise = NoiseSpec::student_t(2.5);
  const Dataset c = gen_linear_data(spec, 99);
  EXPECT_EQ(a.design(), c.design());
  EXPECT_NE(a.y(), c.y());
}

TEST(DeriveSeed, StatelessAndDistinct) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a)
    for (std::uint64_t b = 0; b < 50; ++b) seen.insert(derive_seed(12345, a, b));
  EXPECT_EQ(seen.size(), 2500u);
}

TEST(DefaultBeta, Layout) {
  const Vector b = default_beta_star(7);
  Vector want(7);
  want << 5, -2, 0, 0, 3, 0, 0;
  EXPECT_EQ(b, want);
  EXPECT_EQ(default_beta_star(2).size(), 2);
}

TEST(Summarize, SampleStdAndFailures) {
  std::vector<ReplicationRecord> recs{{0, "s", "A", 1.0, 0, false}, {1, "s", "A", 3.0, 0, false},
                                      {2, "s", "A", 100.0, 0, true}, {0, "s", "B", 2.0, 0, false}};
  const auto rows = summarize(recs);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].estimator, "A");
  EXPECT_EQ(rows[0].count, 2);
  EXPECT_EQ(rows[0].failed, 1);
  EXPECT_DOUBLE_EQ(rows[0].mean, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].std, std::sqrt(2.0));
}

TEST(Table1, SmokeShapeAndThreadInvariance) {
  Table1Options opt;
  opt.reps = 4;
  opt.threads = 1;
  const ExperimentReport a = run_table1(opt);
  EXPECT_EQ(a.records.size(), 4u * 3 * 2);
  EXPECT_EQ(a.summary.size(), 6u);
  opt.threads = 3;
  const ExperimentReport b = run_table1(opt);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].l2_error, b.records[i].l2_error);
    EXPECT_TRUE(a.records[i].tau == b.records[i].tau || (std::isnan(a.records[i].tau) && std::isnan(b.records[i].tau)));
  }
  EXPECT_EQ(a.metadata, b.metadata);
  EXPECT_EQ(a.cell("student_t", "AHR").count, 4);
}

TEST(Phase, RowsPerDfAndDeltaMap) {
  EXPECT_DOUBLE_EQ(phase_delta(1.5), 0.45);
  PhaseOptions opt;
  opt.df_grid = {1.5, 3.0};
  opt.n_grid = {100, 200};
  opt.reps = 3;
  const PhaseReport r = run_phase_transition(opt);
  EXPECT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) EXPECT_DOUBLE_EQ(row.delta, phase_delta(row.df));
  opt.df_grid = {1.0};
  EXPECT_THROW(run_phase_transition(opt), InvalidArgument);
}

TEST(LsSlope, Exact) {
  EXPECT_DOUBLE_EQ(ls_slope({1, 2, 3}, {2, 4, 6}), 2.0);
  EXPECT_THROW(ls_slope({1}, {1}), InvalidArgument);
}

TEST(Neff, ColumnsAndMonotoneInN) {
  NeffOptions opt;
  opt.d_grid = {50};
  opt.ratio_grid = {20, 40, 80};
  opt.reps = 100;
  const NeffReport r = run_neff_experiment(opt);
  ASSERT_EQ(r.rows.size(), 3u);
  int inversions = 0;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    EXPECT_NEAR(r.rows[k].n_eff, static_cast<double>(r.rows[k].n) / std::log(50.0), 1e-12);
    if (k > 0 && r.rows[k].mean_error > r.rows[k - 1].mean_error) ++inversions;
  }
  EXPECT_LE(inversions, 1);
}

TEST(BiasDecay, SymmetricNoiseIsUnbiased) {
  const auto rows = check_bias_decay(NoiseSpec::normal(1.0), {0.5, 2.0}, 20000, 3);
  // The fit error is pure sampling noise: with d + 1 = 6 coordinates its norm
  // stays within a few standard errors.
  for (const auto& r : rows) EXPECT_LE(r.bias, 4 * r.stderr_);
}

TEST(BiasDecay, OlsLimit) {
  const auto rows = check_bias_decay(NoiseSpec::lognormal(1.0), {1e12}, 20000, 4);
  EXPECT_LE(rows[0].bias, 4 * rows[0].stderr_);
}

TEST(TruncatedMoments, SymmetricAndLargeTau) {
  const auto sym = check_truncated_moments(NoiseSpec::student_t(5.0), 1.0, 1.0, 200000, 1);
  EXPECT_LE(std::abs(sym.mean_psi), 3 * sym.se_mean_psi);
  const auto big = check_truncated_moments(NoiseSpec::normal(2.0), 1e9, 1.0, 200000, 2);
  EXPECT_LE(std::abs(big.mean_psi2 - big.sigma2), 1e-12);
  const auto ln = check_truncated_moments(NoiseSpec::lognormal(1.0), 2.0, 1.0, 1000000, 3);
  EXPECT_TRUE(ln.first_holds);
  EXPECT_TRUE(ln.second_holds);
}

TEST(Kurtosis, Examples) {
  Vector a(4);
  a << -1, 1, -1, 1;
  EXPECT_DOUBLE_EQ(kurtosis(a), 1.0);
  Vector b = Vector::Zero(10);
  b[9] = 100;
  EXPECT_NEAR(kurtosis(b), 8.1, 0.05);
  EXPECT_GT(kurtosis(b), 3);
  EXPECT_THROW(kurtosis(Vector::Ones(5)), DegenerateSample);
  Engine rng(5);
  EXPECT_NEAR(kurtosis(NoiseSpec::normal(1).sample(rng, 100000)), 3.0, 0.1);
  EXPECT_GT(kurtosis(NoiseSpec::student_t(5).sample(rng, 1000000)), 5.0);
}
