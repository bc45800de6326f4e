#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "sygr/bootstrap.hpp"
#include "sygr/error.hpp"
#include "support.hpp"

using namespace sygr;
using sygr::testing::add_students;
using sygr::testing::panel_spec;
using sygr::testing::reference_matrix;

namespace {

std::vector<StudentRecord> reference_panel(std::size_t per_cohort, std::uint64_t seed) {
  auto spec = panel_spec(reference_matrix(), per_cohort, seed);
  spec.la_rate = 0.5;
  spec.aalana_rate = 0.3;
  return generate_panel(spec).records;
}

}  // namespace

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Stream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  EXPECT_NE(x, d.next());
  std::set<std::uint64_t> keys;
  for (std::uint64_t i = 0; i < 10000; ++i) keys.insert(stream_key(1, i));
  EXPECT_EQ(keys.size(), 10000u);
}

TEST(Rng, BelowIsInRangeAndRoughlyUniform) {
  Stream s(1, 0);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = s.below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 450);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Percentile, Examples) {
  const std::vector<double> five{0.1, 0.2, 0.3, 0.4, 0.5};
  EXPECT_DOUBLE_EQ(percentile_ci(five, 0.95).median, 0.3);
  const std::vector<double> two{0.4, 0.2};
  EXPECT_DOUBLE_EQ(percentile_ci(two, 0.5).median, 0.3);
  std::vector<double> grid;
  for (int i = 1; i <= 1000; ++i) grid.push_back(i / 1000.0);
  const auto ci = percentile_ci(grid, 0.95);
  EXPECT_NEAR(ci.lo, 0.025975, 1e-12);
  EXPECT_NEAR(ci.hi, 0.975025, 1e-12);
  EXPECT_THROW(percentile_ci(std::vector<double>{0.5}, 0.95), EnsembleTooSmall);
  EXPECT_EQ(percentile_sorted(std::vector<double>{0.1, 0.9}, 0.0), 0.1);
  EXPECT_EQ(percentile_sorted(std::vector<double>{0.1, 0.9}, 1.0), 0.9);
}

TEST(Percentile, MonotoneInLevelAndPermutationInvariant) {
  Stream rng(3, 0);
  std::mt19937 shuffle_rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs(2 + rng.below(300));
    for (double& x : xs) x = rng.uniform();
    double previous_lo = 2, previous_hi = -1;
    for (double level : {0.5, 0.8, 0.9, 0.95, 0.99}) {
      const auto ci = percentile_ci(xs, level);
      EXPECT_LE(ci.lo, ci.median);
      EXPECT_LE(ci.median, ci.hi);
      if (previous_hi >= 0) {
        EXPECT_LE(ci.lo, previous_lo);
        EXPECT_GE(ci.hi, previous_hi);
      }
      previous_lo = ci.lo;
      previous_hi = ci.hi;
    }
    const auto before = percentile_ci(xs, 0.9);
    std::shuffle(xs.begin(), xs.end(), shuffle_rng);
    const auto after = percentile_ci(xs, 0.9);
    EXPECT_EQ(before.lo, after.lo);
    EXPECT_EQ(before.median, after.median);
    EXPECT_EQ(before.hi, after.hi);
  }
}

TEST(Summarize, DropsFailedSlotsUnderTheCeiling) {
  std::vector<std::optional<double>> slots(20);
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = 0.01 * static_cast<double>(i);
  slots[3].reset();
  slots[11].reset();
  const auto s = summarize(slots, 0.95);
  EXPECT_EQ(s.failed, 2u);
  EXPECT_EQ(s.ensemble.size(), 18u);
  EXPECT_EQ(s.replicate_index[3], 4u);
  EXPECT_DOUBLE_EQ(s.width, s.hi - s.lo);
  slots[5].reset();
  EXPECT_THROW(summarize(slots, 0.95), TooManyFailedReplicates);
}

TEST(BootstrapConfig, Validation) {
  EXPECT_THROW((BootstrapConfig{1, 0, 0.95}.validate()), std::invalid_argument);
  EXPECT_THROW((BootstrapConfig{10, 0, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((BootstrapConfig{10, 0, 0.0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((BootstrapConfig{2, 0, 0.5}.validate()));
}

TEST(Bootstrap, IdenticalRecordsGiveZeroWidth) {
  std::vector<StudentRecord> rs;
  add_students(rs, "g", 50, 2013, Outcome::Graduated, 4);
  for (auto kind : {EstimatorKind::Traditional, EstimatorKind::MarkovReduced, EstimatorKind::MarkovFull}) {
    const auto s = bootstrap(rs, {kind, {2013}, 2019, false}, {200, 9, 0.95});
    EXPECT_EQ(s.ensemble.size(), 200u);
    for (double v : s.ensemble) EXPECT_EQ(v, 1.0);
    EXPECT_EQ(s.width, 0.0);
    EXPECT_EQ(s.median, 1.0);
  }
}

TEST(Bootstrap, DeterministicAndParallelMatchesReference) {
  const auto rs = reference_panel(150, 17);
  const std::vector<EstimatorSpec> specs{{EstimatorKind::Traditional, {2013}, 2019, false},
                                         {EstimatorKind::MarkovReduced, {2013}, 2019, false},
                                         {EstimatorKind::MarkovFull, {}, 2019, false},
                                         {EstimatorKind::MarkovFull, {}, 2019, true},
                                         {EstimatorKind::MarkovFull, {}, 2016, false},
                                         {EstimatorKind::Traditional, {2013}, 2022, false}};
  SubgroupSpec exposed;
  exposed.la_group = LaGroup::Exposed;
  const auto la = filter_subgroup(rs, exposed);
  for (const auto& spec : specs) {
    const auto& data = spec.la_truncate ? la : rs;
    const BootstrapConfig cfg{300, 123, 0.95};
    const auto fast = bootstrap_replicates(data, spec, cfg);
    EXPECT_EQ(fast, bootstrap_replicates(data, spec, cfg));
    EXPECT_EQ(fast, bootstrap_replicates_reference(data, spec, cfg)) << estimator_name(spec.kind);
    const auto s = bootstrap(data, spec, cfg);
    const auto r = bootstrap_reference(data, spec, cfg);
    EXPECT_EQ(s.ensemble, r.ensemble);
    EXPECT_EQ(s.lo, r.lo);
    EXPECT_EQ(s.hi, r.hi);
    EXPECT_EQ(s.median, r.median);
  }
}

TEST(Bootstrap, FailuresMatchReferenceSlotForSlot) {
  // A tiny cohort inside a larger file, so many resamples miss it entirely.
  std::vector<StudentRecord> rs;
  add_students(rs, "a", 1, 2013, Outcome::Graduated, 4);
  add_students(rs, "c", 60, 2014, Outcome::Graduated, 3);
  const EstimatorSpec trad{EstimatorKind::Traditional, {2013}, 2020, false};
  const EstimatorSpec reduced{EstimatorKind::MarkovReduced, {2013}, 2020, false};
  for (const auto& spec : {trad, reduced}) {
    const BootstrapConfig cfg{400, 5, 0.95};
    const auto fast = bootstrap_replicates(rs, spec, cfg);
    EXPECT_EQ(fast, bootstrap_replicates_reference(rs, spec, cfg));
    const auto failed = std::count(fast.begin(), fast.end(), std::nullopt);
    EXPECT_GT(failed, 100);
    EXPECT_THROW(bootstrap(rs, spec, cfg), TooManyFailedReplicates);
  }
}

TEST(Bootstrap, ReplicatesUseTheirOwnStreams) {
  const auto rs = reference_panel(100, 3);
  const EstimatorSpec spec{EstimatorKind::MarkovFull, {}, 2019, false};
  const auto small = bootstrap_replicates(rs, spec, {100, 77, 0.95});
  const auto large = bootstrap_replicates(rs, spec, {250, 77, 0.95});
  EXPECT_TRUE(std::equal(small.begin(), small.end(), large.begin()));
  EXPECT_NE(small, bootstrap_replicates(rs, spec, {100, 78, 0.95}));
}

TEST(Bootstrap, FailsOnOriginal) {
  std::vector<StudentRecord> rs;
  add_students(rs, "p", 10, 2018, Outcome::Enrolled, 1);
  EXPECT_THROW(bootstrap(rs, {EstimatorKind::MarkovFull, {}, 2019, false}, {100, 1, 0.95}),
               EstimatorFailedOnOriginal);
  EXPECT_THROW(bootstrap({}, {EstimatorKind::MarkovFull, {}, 2019, false}, {100, 1, 0.95}), NoRecords);
}

TEST(Bootstrap, EnsembleSizeInsensitive) {
  auto spec = panel_spec(reference_matrix(), 800, 8, 2013, 1);
  const auto rs = generate_panel(spec).records;
  const EstimatorSpec est{EstimatorKind::MarkovReduced, {2013}, 2019, false};
  const double m1 = bootstrap(rs, est, {1000, 4, 0.95}).median;
  const double m8 = bootstrap(rs, est, {8000, 4, 0.95}).median;
  EXPECT_LT(std::abs(m1 - m8), 0.005);
}

TEST(Bootstrap, SummaryInvariants) {
  const auto rs = reference_panel(80, 29);
  const auto s = bootstrap(rs, {EstimatorKind::MarkovFull, {}, 2019, false}, {500, 2, 0.9});
  EXPECT_LE(s.lo, s.median);
  EXPECT_LE(s.median, s.hi);
  EXPECT_EQ(s.width, s.hi - s.lo);
  EXPECT_EQ(s.ensemble.size() + s.failed, 500u);
  for (double v : s.ensemble) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}
