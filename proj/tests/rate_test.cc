#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "graphon_ldp/error.h"
#include "graphon_ldp/families.h"
#include "graphon_ldp/rate.h"
#include "graphon_ldp/sampler.h"
#include "test_support.h"

namespace graphon_ldp {
namespace {

using testing::FromRows;
using testing::RandomGraphon;
using testing::RandomPermutation;

TEST(RelEntropyTest, Examples) {
  EXPECT_EQ(RelEntropy(0.37, 0.37), 0.0);
  EXPECT_NEAR(RelEntropy(1.0, 0.5), std::log(2.0), 1e-15);
  EXPECT_NEAR(RelEntropy(0.0, 0.5), std::log(2.0), 1e-15);
  // mpmath, 40 digits.
  EXPECT_NEAR(RelEntropy(0.5, 0.25), 0.14384103622589045, 1e-15);
  EXPECT_NEAR(RelEntropy(0.75, 0.5), 0.13081203594113694, 1e-15);
}

TEST(RelEntropyTest, AccurateNearDiagonal) {
  // mpmath at 50 digits for the double nearest 0.500001.
  EXPECT_NEAR(RelEntropy(0.500001, 0.5) / 2.0000000001163559914e-12, 1.0, 1e-9);
}

TEST(RelEntropyTest, DomainErrors) {
  EXPECT_THROW(RelEntropy(0.5, 0.0), Error);
  EXPECT_THROW(RelEntropy(0.5, 1.0), Error);
  EXPECT_THROW(RelEntropy(-0.1, 0.5), Error);
  EXPECT_THROW(RelEntropy(1.1, 0.5), Error);
}

TEST(RelEntropyTest, NonnegativeOnGrid) {
  for (int i = 0; i <= 100; ++i) {
    for (int j = 1; j < 100; ++j) EXPECT_GE(RelEntropy(i / 100.0, j / 100.0), 0.0);
  }
}

TEST(ReferenceCheckTest, Examples) {
  const ReferenceCheck half = CheckReference(Graphon::Constant(4, 0.5));
  EXPECT_TRUE(half.ok);
  EXPECT_NEAR(half.l1_log_r, std::log(2.0), 1e-15);
  EXPECT_NEAR(half.l1_log_1mr, std::log(2.0), 1e-15);
  EXPECT_FALSE(CheckReference(FromRows({{0.5, 0.0}, {0.0, 0.5}})).ok);
  EXPECT_FALSE(CheckReference(FromRows({{1.0, 0.5}, {0.5, 0.5}})).ok);
  const Graphon xy = RankOneFamily(8, {0.0, 1.0});
  EXPECT_TRUE(CheckReference(xy).ok);
  EXPECT_NEAR(xy(0, 0), 1.0 / 256.0, 1e-18);
}

TEST(RateITest, Examples) {
  const Graphon r = RandomGraphon(5, 1, 0.1, 0.9);
  EXPECT_EQ(RateI(r, r).value, 0.0);
  EXPECT_NEAR(RateI(Graphon::Constant(3, 1.0), Graphon::Constant(3, 0.5)).value, std::log(2.0),
              1e-15);
  for (std::size_t m : {1u, 4u, 7u}) {
    EXPECT_NEAR(RateI(Graphon::Constant(m, 0.75), Graphon::Constant(m, 0.5)).value,
                0.13081203594113694, 1e-15);
  }
}

TEST(RateITest, PerCellConsistency) {
  const Graphon r = RandomGraphon(6, 2, 0.05, 0.95);
  const Graphon h = RandomGraphon(6, 3);
  const RateResult res = RateI(h, r);
  double sum = 0.0;
  for (double v : res.per_cell.data()) {
    EXPECT_GE(v, 0.0);
    sum += v;
  }
  EXPECT_NEAR(res.value, sum / 36.0, 1e-12);
}

TEST(RateITest, ZeroOnlyAtReference) {
  const Graphon r = RandomGraphon(4, 4, 0.1, 0.9);
  SquareMatrix v = r.values();
  v(1, 2) += 1e-3;
  v(2, 1) += 1e-3;
  EXPECT_GT(RateI(Graphon(v), r).value, 0.0);
}

TEST(RateITest, Errors) {
  try {
    RateI(Graphon::Constant(2, 0.5), FromRows({{0.5, 0.0}, {0.0, 0.5}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidReference);
  }
  try {
    RateI(Graphon::Constant(2, 0.5), Graphon::Constant(3, 0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResolutionMismatch);
  }
}

TEST(RateITest, L2Continuity) {
  const Graphon r = RandomGraphon(16, 10, 0.1, 0.9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graphon h = RandomGraphon(16, 100 + seed, 0.1, 0.9);
    // Symmetric perturbation scaled to L2 norm 1e-4.
    SquareMatrix d = RandomGraphon(16, 200 + seed).values() - Graphon::Constant(16, 0.5).values();
    d = (1e-4 / L2Norm(d)) * d;
    const Graphon h2(h.values() + d);
    EXPECT_LE(std::abs(RateI(h2, r).value - RateI(h, r).value), 1e-2);
  }
}

TEST(RateITest, ConvergesAlongShrinkingPerturbations) {
  const Graphon r = RandomGraphon(16, 11, 0.1, 0.9);
  const Graphon h = RandomGraphon(16, 12, 0.1, 0.9);
  const SquareMatrix d = RandomGraphon(16, 13).values() - Graphon::Constant(16, 0.5).values();
  const double base = RateI(h, r).value;
  double previous = std::numeric_limits<double>::infinity();
  for (double t = 0.1; t > 1e-6; t /= 4.0) {
    const double gap = std::abs(RateI(Graphon(h.values() + t * d), r).value - base);
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  EXPECT_LT(previous, 1e-5);
}

TEST(RateJTest, ConstantReferenceGivesI) {
  const Graphon r = Graphon::Constant(6, 0.3);
  const Graphon h = RandomGraphon(6, 5);
  EXPECT_NEAR(RateJEstimate(h, r), RateI(h, r).value, 1e-15);
}

TEST(RateJTest, PermutedReferenceGivesZero) {
  const Graphon r = RandomGraphon(7, 6, 0.1, 0.9);
  EXPECT_EQ(RateJEstimate(ApplyPermutation(r, RandomPermutation(7, 2)), r), 0.0);
  const Graphon r2 = FromRows({{0.2, 0.4}, {0.4, 0.8}});
  const Graphon swapped = FromRows({{0.8, 0.4}, {0.4, 0.2}});
  EXPECT_EQ(RateJEstimate(swapped, r2), 0.0);
  EXPECT_GT(RateI(swapped, r2).value, 0.0);
}

TEST(RateJTest, LocalSearchFindsRelabelling) {
  const Graphon r = RandomGraphon(12, 7, 0.1, 0.9);
  std::vector<std::size_t> p(12);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::swap(p[1], p[9]);
  EXPECT_EQ(RateJEstimate(ApplyPermutation(r, GridPermutation(p)), r), 0.0);
}

TEST(RateJTest, ExactlyPermutationInvariantForSmallGrids) {
  for (std::size_t m = 2; m <= 6; ++m) {
    const Graphon r = RandomGraphon(m, 30 + m, 0.1, 0.9);
    const Graphon h = RandomGraphon(m, 40 + m);
    const double j = RateJEstimate(h, r);
    for (std::uint64_t s = 0; s < 10; ++s) {
      EXPECT_EQ(RateJEstimate(ApplyPermutation(h, RandomPermutation(m, s)), r), j);
    }
  }
}

TEST(RateJTest, NeverAboveI) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t m = 3 + seed % 10;
    const Graphon r = RandomGraphon(m, 2 * seed, 0.05, 0.95);
    const Graphon h = RandomGraphon(m, 2 * seed + 1);
    EXPECT_LE(RateJEstimate(h, r, {.restarts = 4, .seed = seed}), RateI(h, r).value);
  }
}

TEST(RateJTest, LowerSemicontinuousAlongL1Sequences) {
  // J is a minimum of finitely many continuous functions on small grids, so
  // along h_t -> h it satisfies liminf J(h_t) >= J(h).
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t m = 4 + seed % 3;
    const Graphon r = RandomGraphon(m, 60 + seed, 0.1, 0.9);
    const Graphon h = RandomGraphon(m, 70 + seed, 0.05, 0.95);
    const SquareMatrix d =
        RandomGraphon(m, 80 + seed).values() - Graphon::Constant(m, 0.5).values();
    const double limit = RateJEstimate(h, r);
    for (double t = 0.05; t > 1e-7; t /= 3.0) {
      EXPECT_GE(RateJEstimate(Graphon(h.values() + t * d), r) - limit, -1e-9 - 20 * t);
    }
    EXPECT_GE(RateJEstimate(Graphon(h.values() + 1e-9 * d), r) - limit, -1e-9);
  }
}

TEST(UniformRateBoundTest, Examples) {
  const Graphon r = RandomGraphon(4, 1, 0.1, 0.9);
  EXPECT_EQ(UniformRateBound(r, r), 0.0);
  EXPECT_NEAR(UniformRateBound(Graphon::Constant(3, 0.5), Graphon::Constant(3, 0.25)),
              1.0986122886681098, 1e-15);
  EXPECT_THROW(UniformRateBound(Graphon::Constant(2, 0.0), r), Error);
}

TEST(UniformRateBoundTest, HoldsOnRandomTriples) {
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Graphon f = RandomGraphon(16, 3 * seed);
    const Graphon r1 = RandomGraphon(16, 3 * seed + 1, 1e-3, 1 - 1e-3);
    const Graphon r2 = RandomGraphon(16, 3 * seed + 2, 1e-3, 1 - 1e-3);
    const double gap = std::abs(RateI(f, r1).value - RateI(f, r2).value);
    if (gap > UniformRateBound(r1, r2)) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(LogLikelihoodRatioTest, Examples) {
  Graph g(2);
  g.AddEdge(0, 1);
  const Graphon a = Graphon::Constant(2, 0.5);
  EXPECT_NEAR(LogLikelihoodRatio(g, a, Graphon::Constant(2, 0.25)), 0.17328679513998632, 1e-15);
  EXPECT_EQ(LogLikelihoodRatio(g, a, a), 0.0);
  EXPECT_EQ(LogLikelihoodRatio(Graph(2), a, a), 0.0);
}

TEST(LogLikelihoodRatioTest, Errors) {
  Graph g(2);
  EXPECT_THROW(LogLikelihoodRatio(g, Graphon::Constant(3, 0.5), Graphon::Constant(3, 0.5)),
               Error);
  EXPECT_THROW(LogLikelihoodRatio(g, Graphon::Constant(2, 1.0), Graphon::Constant(2, 0.5)),
               Error);
}

// Oracle: refine both graphons to lcm(n, k) and classify every fine cell.
BlockApproxBudget FineGridBudget(const Graphon& r_n, const Graphon& block) {
  const std::size_t n = r_n.m();
  const std::size_t k = block.m();
  const std::size_t l = std::lcm(n, k);
  const std::size_t fn = l / n;
  const std::size_t fk = l / k;
  auto grid_block = [&](std::size_t u) { return (u * k) / n; };
  auto cell_inside = [&](std::size_t u) {
    for (std::size_t a = u * fn; a < (u + 1) * fn; ++a) {
      if (a / fk != grid_block(u)) return false;
    }
    return true;
  };
  BlockApproxBudget out;
  out.n = n;
  out.k = k;
  const double area = 1.0 / static_cast<double>(l * l);
  for (std::size_t a = 0; a < l; ++a) {
    for (std::size_t b = 0; b < l; ++b) {
      const std::size_t u = a / fn;
      const std::size_t v = b / fn;
      if (a / fk != grid_block(u) || b / fk != grid_block(v)) continue;
      const double x = r_n(u, v);
      const double y = block(grid_block(u), grid_block(v));
      const double dr = std::abs(std::log(x) - std::log(y)) * area;
      const double d1 = std::abs(std::log(1 - x) - std::log(1 - y)) * area;
      if (cell_inside(u) && cell_inside(v)) {
        out.interior_log_r += dr;
        out.interior_log_1mr += d1;
      } else {
        out.overcount_log_r += dr;
        out.overcount_log_1mr += d1;
        out.overcount_area += area;
      }
    }
  }
  return out;
}

TEST(BlockApproxBudgetTest, MatchesFineGridOracle) {
  const Graphon r = RankOneFamily(12, {0.05, 0.9});
  for (std::size_t k : {3u, 4u, 5u, 7u, 12u}) {
    const BlockApproxBudget got = ComputeBlockApproxBudget(r, LevelKApproximant(r, k));
    const BlockApproxBudget want = FineGridBudget(r, LevelKApproximant(r, k));
    EXPECT_NEAR(got.interior_log_r, want.interior_log_r, 1e-13) << "k=" << k;
    EXPECT_NEAR(got.interior_log_1mr, want.interior_log_1mr, 1e-13) << "k=" << k;
    EXPECT_NEAR(got.overcount_log_r, want.overcount_log_r, 1e-13) << "k=" << k;
    EXPECT_NEAR(got.overcount_log_1mr, want.overcount_log_1mr, 1e-13) << "k=" << k;
    EXPECT_NEAR(got.overcount_area, want.overcount_area, 1e-13) << "k=" << k;
  }
}

TEST(BlockApproxBudgetTest, DividingLevelHasNoOvercount) {
  const Graphon r = RankOneFamily(32, {0.0, 1.0});
  const BlockApproxBudget b = ComputeBlockApproxBudget(r, LevelKApproximant(r, 8));
  EXPECT_EQ(b.overcount_area, 0.0);
  EXPECT_EQ(b.Budget(), b.interior_log_r + b.interior_log_1mr);
}

TEST(BlockApproxBudgetTest, BoundsSampledLikelihoodRatios) {
  for (std::size_t k : {5u, 8u}) {
    const Graphon r = RankOneFamily(32, {0.0, 1.0});
    const Graphon block = LevelKApproximant(r, k);
    const double budget = ComputeBlockApproxBudget(r, block).Budget();
    const SquareMatrix rb = EvaluateAtGridPoints(block, 32);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Graph g = Sample(32, r, seed);
      EXPECT_LE(std::abs(LogLikelihoodRatio(g, r.values(), rb)), budget);
    }
  }
}

}  // namespace
}  // namespace graphon_ldp
