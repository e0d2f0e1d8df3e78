#include <gtest/gtest.h>

#include <sstream>

#include "ietx/experiment.hpp"
#include "ietx/report.hpp"
#include "support.hpp"

namespace ietx {
namespace {

using testing::fixed_config;
using testing::Q;
using testing::rational_config;
using testing::reference_iet;

ExperimentConfig small_sweep(CompositionSpec spec, NumericsConfig numerics, std::size_t samples) {
  ExperimentConfig c{std::move(spec)};
  c.numerics = numerics;
  c.sampler.samples = samples;
  c.sampler.seed = 17;
  c.diagnostics.ladder = dyadic_ladder(6, 12);
  c.idoc_depth = 500;
  return c;
}

CompositionSpec reference_spec(const NumericsConfig& n) {
  return CompositionSpec({reference_iet(n)}, {Scalar::from_ratio(1, 1, n)});
}

TEST(Sampling, DerivedSeedsAreStableAndDistinct) {
  // SplitMix64 finaliser of 0 + 1 * 0x9e3779b97f4a7c15.
  EXPECT_EQ(derive_seed(0, 0), 0xe220a8397b1dcdafULL);
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Sampling, UnitSamplesAreDyadicInRange) {
  Rng rng(derive_seed(5, 0));
  for (int i = 0; i < 100; ++i) {
    const Scalar f = sample_unit(rng, fixed_config(100));
    EXPECT_GE(f.sign(), 0);
    EXPECT_LT(f, testing::F(1, 1, 100));
    const Scalar q = sample_unit(rng, rational_config());
    EXPECT_TRUE(q.is_rational());
    EXPECT_LT(q, Q(1));
    const mpz_class den = q.exact().get_den();
    EXPECT_EQ(mpz_popcount(den.get_mpz_t()), 1U);
  }
}

TEST(Sampling, SameStreamSameValues) {
  Rng a(derive_seed(9, 3)), b(derive_seed(9, 3));
  EXPECT_EQ(sample_unit(a, fixed_config()).mantissa(), sample_unit(b, fixed_config()).mantissa());
  const CompositionSpec s1 = random_spec(a, {}, rational_config());
  const CompositionSpec s2 = random_spec(b, {}, rational_config());
  ASSERT_EQ(s1.size(), s2.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    EXPECT_EQ(s1.coefficients()[i], s2.coefficients()[i]);
    EXPECT_EQ(s1.iets()[i].lengths(), s2.iets()[i].lengths());
  }
}

TEST(Sampling, RandomSpecsRespectOptions) {
  Rng rng(derive_seed(2, 2));
  RandomSpecOptions opt;
  opt.max_k = 3;
  opt.max_intervals = 5;
  for (int i = 0; i < 200; ++i) {
    const CompositionSpec s = random_spec(rng, opt, rational_config());
    EXPECT_LE(s.size(), 3U);
    EXPECT_TRUE(s.all_positive());
    for (const auto& t : s.iets()) EXPECT_LE(t.size(), 5U);
  }
}

TEST(Quantiles, NearestRank) {
  EXPECT_EQ(nearest_rank_quantile({3, 1, 2}, 0.5), 2);
  EXPECT_EQ(nearest_rank_quantile({4, 1, 3, 2}, 0.5), 2);
  EXPECT_EQ(nearest_rank_quantile({4, 1, 3, 2}, 0.95), 4);
  EXPECT_EQ(nearest_rank_quantile({7}, 0.0), 7);
  EXPECT_TRUE(std::isnan(nearest_rank_quantile({}, 0.5)));
}

TEST(ExperimentConfig, Validation) {
  const Iet id = Iet::identity(fixed_config());
  ExperimentConfig c = small_sweep(CompositionSpec({id, id}, {testing::F(1), testing::F(-1)}), fixed_config(), 3);
  c.mixed_sign = true;
  EXPECT_THROW(run_mixed_sign_sweep(c), std::invalid_argument);
  c.mixed_sign = false;
  EXPECT_THROW(run_alpha_sweep(c), std::invalid_argument);

  ExperimentConfig z = small_sweep(reference_spec(fixed_config()), fixed_config(), 0);
  EXPECT_THROW(run_alpha_sweep(z), std::invalid_argument);
  ExperimentConfig m = small_sweep(reference_spec(rational_config()), fixed_config(), 1);
  EXPECT_THROW(run_alpha_sweep(m), BackendMismatch);
}

TEST(ExperimentConfig, HashIgnoresWorkersButNotSeed) {
  ExperimentConfig a = small_sweep(reference_spec(fixed_config()), fixed_config(), 3);
  ExperimentConfig b = a;
  b.workers = 4;
  EXPECT_EQ(a.hash(), b.hash());
  b.sampler.seed = 18;
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16U);
}

TEST(Sweep, RowsAreIndependentOfWorkerCount) {
  ExperimentConfig c = small_sweep(reference_spec(fixed_config()), fixed_config(), 9);
  const SweepReport one = run_alpha_sweep(c);
  c.workers = 3;
  const SweepReport three = run_alpha_sweep(c);
  ASSERT_EQ(one.rows.size(), 9U);
  const RunMetadata meta = metadata_for("sweep", c);
  std::ostringstream a, b;
  write_sweep_csv(a, meta, one);
  write_sweep_csv(b, meta, three);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, EachRowUsesItsOwnStream) {
  ExperimentConfig c = small_sweep(reference_spec(fixed_config()), fixed_config(), 5);
  const SweepReport r = run_alpha_sweep(c);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    Rng rng(derive_seed(c.sampler.seed, i));
    EXPECT_EQ(r.rows[i].alpha, sample_unit(rng, c.numerics));
    EXPECT_EQ(r.rows[i].index, i);
  }
}

TEST(Sweep, AggregatesRecomputeFromRows) {
  ExperimentConfig c = small_sweep(reference_spec(fixed_config()), fixed_config(), 11);
  const SweepReport r = run_alpha_sweep(c);
  const SweepAggregates again = aggregate(r.rows);
  EXPECT_EQ(again.star_discrepancy.median, r.aggregates.star_discrepancy.median);
  EXPECT_EQ(again.spread.p95, r.aggregates.spread.p95);
  EXPECT_EQ(again.beta_hat.median, r.aggregates.beta_hat.median);
  std::size_t nonconvergent = 0;
  std::vector<double> d;
  for (const auto& row : r.rows) {
    nonconvergent += row.convergent ? 0 : 1;
    d.push_back(row.star_discrepancy);
  }
  EXPECT_EQ(nonconvergent, r.aggregates.nonconvergent);
  std::sort(d.begin(), d.end());
  EXPECT_EQ(r.aggregates.star_discrepancy.median, d[5]);
}

TEST(Sweep, IdentityWithForcedHalfIsNonConvergent) {
  ExperimentConfig c = small_sweep(CompositionSpec({Iet::identity(rational_config())}, {Q(1)}), rational_config(), 2);
  c.sampler.forced_alpha = Q(1, 2);
  c.diagnostics.starts = {Q(1, 4), Q(1, 3)};
  const SweepReport r = run_alpha_sweep(c);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.alpha, Q(1, 2));
    EXPECT_DOUBLE_EQ(row.star_discrepancy, 1.0 / 3.0);
    EXPECT_FALSE(row.convergent);
    EXPECT_FALSE(row.idoc_pass);
    EXPECT_EQ(row.idoc_step, 2U);
  }
  EXPECT_EQ(r.aggregates.nonconvergent, 2U);
}

TEST(Sweep, IdentityReducesToRotations) {
  ExperimentConfig c = small_sweep(CompositionSpec({Iet::identity(fixed_config())}, {testing::F(1)}), fixed_config(), 10);
  c.diagnostics.ladder = dyadic_ladder(10, 16);
  const SweepReport r = run_alpha_sweep(c);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.intervals, 2U);
    EXPECT_LT(row.star_discrepancy, 0.05);
  }
}

TEST(MixedSweep, IdentitiesWithNetCoefficientOneGiveRotation) {
  const Iet id = Iet::identity(fixed_config());
  ExperimentConfig c = small_sweep(CompositionSpec({id, id}, {testing::F(2), testing::F(-1)}), fixed_config(), 4);
  c.mixed_sign = true;
  const SweepReport r = run_mixed_sign_sweep(c);
  for (const auto& row : r.rows) EXPECT_EQ(row.intervals, 2U);
}

TEST(Report, CsvLayout) {
  ExperimentConfig c = small_sweep(reference_spec(rational_config()), rational_config(), 2);
  c.sampler.forced_alpha = Q(1, 2);
  const SweepReport r = run_alpha_sweep(c);
  RunMetadata meta = metadata_for("sweep", c);
  std::ostringstream os;
  write_sweep_csv(os, meta, r);
  std::istringstream is(os.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 8U);
  EXPECT_EQ(lines[1], "# config_hash: " + c.hash());
  EXPECT_EQ(lines[2], "# seed: 17");
  EXPECT_EQ(lines[3], "# backend: rational");
  EXPECT_EQ(lines[4], "# precision: 256");
  EXPECT_EQ(lines[5], "alpha,N,Dstar,max_birkhoff_dev,spread,beta_hat,idoc,occupancy");
  EXPECT_EQ(lines[6].substr(0, 9), "1/2,4096,");

  meta.timestamp = "2026-01-01T00:00:00Z";
  std::ostringstream stamped;
  write_sweep_csv(stamped, meta, r);
  EXPECT_NE(stamped.str().find("# timestamp: 2026-01-01T00:00:00Z\n"), std::string::npos);
}

TEST(Report, JsonMirrorsSweepReport) {
  ExperimentConfig c = small_sweep(reference_spec(fixed_config()), fixed_config(), 3);
  const SweepReport r = run_alpha_sweep(c);
  const auto j = sweep_report_to_json(metadata_for("sweep", c), c, r);
  EXPECT_EQ(j["rows"].size(), 3U);
  EXPECT_EQ(j["meta"]["seed"], 17);
  EXPECT_EQ(j["meta"]["backend"], "fixed");
  EXPECT_EQ(j["meta"]["config_hash"], c.hash());
  EXPECT_EQ(j["aggregates"]["Dstar"]["median"].get<double>(), r.aggregates.star_discrepancy.median);
}

TEST(Oracle, TorusIsExact) {
  OracleConfig c;
  c.configs = 5;
  c.starts = 50;
  c.numerics = rational_config();
  c.spec = CompositionSpec({Iet::identity(rational_config())}, {Q(1)});
  const OracleReport r = run_oracle_check(c);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_deviation, 0);
  EXPECT_EQ(r.compared + r.singular_skipped, 250U);
}

TEST(Oracle, RejectsNegativeCoefficients) {
  const Iet id = Iet::identity(rational_config());
  OracleConfig c;
  c.numerics = rational_config();
  c.spec = CompositionSpec({id, id}, {Q(2), Q(-1)});
  EXPECT_THROW(run_oracle_check(c), std::invalid_argument);
}

}  // namespace
}  // namespace ietx
