#include <gtest/gtest.h>

#include <vector>

#include "sygr/error.hpp"
#include "sygr/markov.hpp"
#include "support.hpp"

using namespace sygr;
using S = AcademicState;
using sygr::testing::chain;
using sygr::testing::random_matrix;

namespace {

TransitionCounts deterministic_counts() {
  TransitionCounts c;
  c.add(S::Y1, S::Y2, 5);
  c.add(S::Y2, S::Y3, 5);
  c.add(S::Y3, S::Graduated, 5);
  c.add(S::Y4, S::DropOut, 2);
  c.add(S::Y5, S::Graduated, 1);
  c.add(S::Y6, S::DropOut, 4);
  return c;
}

}  // namespace

TEST(States, OrderingAndNames) {
  ASSERT_EQ(kAllStates.size(), 8u);
  for (std::size_t i = 0; i < kAllStates.size(); ++i) EXPECT_EQ(index_of(kAllStates[i]), i);
  EXPECT_EQ(state_name(S::Y3), "Y3");
  EXPECT_EQ(state_name(S::DropOut), "D");
  EXPECT_EQ(parse_state("G"), S::Graduated);
  EXPECT_FALSE(parse_state("Y7").has_value());
  EXPECT_TRUE(is_absorbing(S::DropOut));
  EXPECT_TRUE(is_transient(S::Y6));
}

TEST(States, AllowedPattern) {
  int allowed = 0;
  for (auto from : kAllStates) {
    for (auto to : kAllStates) allowed += is_allowed_transition(from, to);
  }
  EXPECT_EQ(allowed, 5 * 3 + 2);
  EXPECT_TRUE(is_allowed_transition(S::Y5, S::Y6));
  EXPECT_FALSE(is_allowed_transition(S::Y1, S::Y3));
  EXPECT_FALSE(is_allowed_transition(S::Y6, S::Y1));
  EXPECT_FALSE(is_allowed_transition(S::DropOut, S::DropOut));
}

TEST(TransitionCounts, RejectsForbiddenCellsAndNegatives) {
  TransitionCounts c;
  EXPECT_THROW(c.add(S::Y1, S::Y3), std::invalid_argument);
  EXPECT_THROW(c.add(S::Graduated, S::Graduated), std::invalid_argument);
  EXPECT_THROW(c.add(S::Y1, S::Y2, -1), std::invalid_argument);
  c.add(S::Y1, S::Y2, 4);
  c.add(S::Y1, S::DropOut);
  EXPECT_EQ(c.row_total(S::Y1), 5);
  EXPECT_EQ(c.total(), 5);
}

TEST(BuildMatrix, HandCount) {
  TransitionCounts c = deterministic_counts();
  c.add(S::Y1, S::Y2, 2);
  c.add(S::Y1, S::DropOut, 3);
  const auto p = build_matrix(c);
  EXPECT_DOUBLE_EQ(p(S::Y1, S::Y2), 0.7);
  EXPECT_DOUBLE_EQ(p(S::Y1, S::DropOut), 0.3);
  EXPECT_EQ(p(S::Y1, S::Graduated), 0.0);
  EXPECT_EQ(p(S::DropOut, S::DropOut), 1.0);
  EXPECT_EQ(p(S::Graduated, S::Graduated), 1.0);
  EXPECT_TRUE(validate_structure(p).empty());
}

TEST(BuildMatrix, DeterministicChainHasOneUnitPerRow) {
  const auto p = build_matrix(deterministic_counts());
  for (auto from : kAllStates) {
    int ones = 0, zeros = 0;
    for (auto to : kAllStates) {
      ones += p(from, to) == 1.0;
      zeros += p(from, to) == 0.0;
    }
    EXPECT_EQ(ones, 1);
    EXPECT_EQ(zeros, 7);
  }
}

TEST(BuildMatrix, EmptyRowIsInsufficientData) {
  TransitionCounts c = deterministic_counts();
  TransitionCounts missing;
  for (auto from : {S::Y1, S::Y2, S::Y4, S::Y5, S::Y6}) {
    for (auto to : kAllStates) {
      if (is_allowed_transition(from, to)) missing.add(from, to, c.at(from, to));
    }
  }
  try {
    build_matrix(missing);
    FAIL() << "expected InsufficientData";
  } catch (const InsufficientData& e) {
    EXPECT_EQ(e.state(), S::Y3);
  }
}

TEST(BuildMatrix, AbsorbUnreachablePolicy) {
  TransitionCounts c;
  c.add(S::Y1, S::DropOut, 10);
  EXPECT_THROW(build_matrix(c), InsufficientData);
  const auto p = build_matrix(c, EmptyRows::kAbsorbUnreachable);
  EXPECT_TRUE(validate_structure(p).empty());
  EXPECT_EQ(sygr_markov(p), 0.0);

  TransitionCounts reachable_gap;
  reachable_gap.add(S::Y1, S::Y2, 3);
  try {
    build_matrix(reachable_gap, EmptyRows::kAbsorbUnreachable);
    FAIL() << "expected InsufficientData";
  } catch (const InsufficientData& e) {
    EXPECT_EQ(e.state(), S::Y2);
  }
}

TEST(BuildMatrix, ScaleInvariant) {
  Stream rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    TransitionCounts c, scaled;
    for (auto from : kAllStates) {
      const auto factor = static_cast<TransitionCounts::Count>(1 + rng.below(9));
      for (auto to : kAllStates) {
        if (!is_allowed_transition(from, to)) continue;
        const auto n = static_cast<TransitionCounts::Count>(1 + rng.below(50));
        c.add(from, to, n);
        scaled.add(from, to, n * factor);
      }
    }
    EXPECT_EQ(build_matrix(c), build_matrix(scaled));
  }
}

TEST(PoolCounts, HandCountAndAlgebra) {
  TransitionCounts a, b;
  a.add(S::Y1, S::Y2, 8);
  a.add(S::Y1, S::DropOut, 2);
  b.add(S::Y1, S::Y2, 3);
  b.add(S::Y1, S::DropOut, 2);
  const std::vector<TransitionCounts> ab{a, b}, ba{b, a};
  const auto pooled = pool_counts(ab);
  EXPECT_EQ(pooled.at(S::Y1, S::Y2), 11);
  EXPECT_EQ(pooled.at(S::Y1, S::DropOut), 4);
  EXPECT_EQ(pooled, pool_counts(ba));
  const std::vector<TransitionCounts> single{a};
  EXPECT_EQ(pool_counts(single), a);
  const std::vector<TransitionCounts> with_zero{a, TransitionCounts{}};
  EXPECT_EQ(pool_counts(with_zero), a);
  EXPECT_EQ((a + b) + pooled, a + (b + pooled));
  EXPECT_THROW(pool_counts(std::span<const TransitionCounts>{}), std::invalid_argument);

  TransitionCounts full = deterministic_counts() + pooled;
  EXPECT_DOUBLE_EQ(build_matrix(full)(S::Y1, S::Y2), 16.0 / 20.0);
}

TEST(MatrixPower, ZerothPowerIsIdentity) {
  Stream rng(3, 0);
  const auto g = matrix_power(random_matrix(rng), 0);
  for (std::size_t i = 0; i < kStateCount; ++i) {
    for (std::size_t j = 0; j < kStateCount; ++j) EXPECT_EQ(g[i][j], i == j ? 1.0 : 0.0);
  }
}

TEST(MatrixPower, Examples) {
  const auto drop = chain({{0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {1, 0}});
  EXPECT_EQ(matrix_power(drop, 6)[0][index_of(S::Graduated)], 0.0);
  const auto p = chain({{0.9, 0.1, 0}, {0.9, 0.1, 0}, {0.9, 0.1, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0}});
  EXPECT_NEAR(matrix_power(p, 6)[0][index_of(S::Graduated)], 0.729, 1e-15);
}

TEST(MatrixPower, StochasticAndReachability) {
  Stream rng(5, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_matrix(rng);
    for (int n = 0; n <= 6; ++n) {
      const auto g = matrix_power(p, n);
      for (const auto& row : g) {
        double sum = 0.0;
        for (double v : row) {
          EXPECT_GE(v, 0.0);
          sum += v;
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);
      }
      for (int j = 1; j <= kMaxYear; ++j) {
        if (j - 1 != n) {
          EXPECT_EQ(g[0][index_of(year_state(j))], 0.0) << "n=" << n << " j=" << j;
        }
      }
    }
  }
}

TEST(SygrMarkov, Examples) {
  EXPECT_DOUBLE_EQ(sygr_markov(chain({{1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 1}})),
                   1.0);
  EXPECT_DOUBLE_EQ(sygr_markov(chain({{0, 0, 1}, {0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {1, 0}})),
                   1.0);
  EXPECT_DOUBLE_EQ(
      sygr_markov(chain({{0.5, 0.25, 0.25}, {0, 0, 1}, {0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {1, 0}})),
      0.75);
}

TEST(SygrMarkov, MatchesPathOracle) {
  Stream rng(7, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto p = random_matrix(rng);
    EXPECT_NEAR(sygr_markov(p), brute_force_sygr(p), 1e-12);
  }
}

TEST(SygrMarkov, FirstYearPersistenceDirection) {
  // SYGR = x * S2 + (1 - x) * g with x = P12, S2 the graduation chance from
  // Y2 and g the graduating share of the rest of the Y1 row.
  Stream rng(13, 0);
  int rising = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_matrix(rng);
    const double a = rng.uniform(), b = rng.uniform();
    const auto lo = with_first_year_persistence(p, std::min(a, b));
    const auto hi = with_first_year_persistence(p, std::max(a, b));
    const double from_y2 = matrix_power(p, 5)[index_of(S::Y2)][index_of(S::Graduated)];
    const double rest = p(S::Y1, S::DropOut) + p(S::Y1, S::Graduated);
    const double g = rest > 0 ? p(S::Y1, S::Graduated) / rest : 0.0;
    const double change = brute_force_sygr(hi) - brute_force_sygr(lo);
    if (from_y2 >= g) {
      EXPECT_GE(change, -1e-15);
      ++rising;
    } else {
      EXPECT_LE(change, 1e-15);
    }
  }
  EXPECT_GT(rising, 0);
}

TEST(ValidateStructure, Violations) {
  const auto valid = sygr::testing::reference_matrix();
  EXPECT_TRUE(validate_structure(valid).empty());

  auto forbidden = valid;
  forbidden(S::Y1, S::Y3) = 0.1;
  forbidden(S::Y1, S::Y2) -= 0.1;
  const auto v1 = validate_structure(forbidden);
  ASSERT_EQ(v1.size(), 1u);
  EXPECT_EQ(v1[0], (StructureViolation{StructureViolation::Kind::ForbiddenTransition, S::Y1, S::Y3, ""}));

  auto short_row = valid;
  short_row(S::Y2, S::DropOut) -= 0.02;
  const auto v2 = validate_structure(short_row);
  ASSERT_EQ(v2.size(), 1u);
  EXPECT_EQ(v2[0], (StructureViolation{StructureViolation::Kind::RowSumViolation, S::Y2, std::nullopt, ""}));
  EXPECT_FALSE(v2[0].message.empty());

  auto negative = valid;
  negative(S::Y4, S::DropOut) = -0.03;
  negative(S::Y4, S::Graduated) = 0.68;
  const auto v3 = validate_structure(negative);
  ASSERT_FALSE(v3.empty());
  EXPECT_EQ(v3[0].kind, StructureViolation::Kind::ProbabilityOutOfRange);

  EXPECT_THROW(TransitionMatrix::checked(short_row.grid()), std::invalid_argument);
  EXPECT_NO_THROW(TransitionMatrix::checked(valid.grid()));
}
