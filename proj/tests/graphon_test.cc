#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "graphon_ldp/error.h"
#include "graphon_ldp/families.h"
#include "graphon_ldp/graphon.h"
#include "graphon_ldp/io.h"
#include "test_support.h"

namespace graphon_ldp {
namespace {

using testing::FromRows;
using testing::RandomGraphon;
using testing::RandomPermutation;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

TEST(GraphonTest, ConstructorRejectsAsymmetryAndRange) {
  SquareMatrix v(2, 0.5);
  v(0, 1) = 0.4;
  EXPECT_EQ(CodeOf([&] { Graphon g(v); }), ErrorCode::kInvalidArgument);
  SquareMatrix w(2, 0.5);
  w(1, 1) = 1.5;
  EXPECT_EQ(CodeOf([&] { Graphon g(w); }), ErrorCode::kDomain);
  EXPECT_EQ(CodeOf([&] { Graphon g(SquareMatrix(0)); }), ErrorCode::kInvalidArgument);
}

TEST(GraphonTest, AtLooksUpCells) {
  const Graphon h = FromRows({{0.1, 0.2}, {0.2, 0.3}});
  EXPECT_EQ(h.At(0.0, 0.0), 0.1);
  EXPECT_EQ(h.At(0.49, 0.5), 0.2);
  EXPECT_EQ(h.At(1.0, 1.0), 0.3);
  EXPECT_THROW(h.At(-0.1, 0.0), Error);
}

TEST(GraphTest, RejectsSelfLoops) {
  Graph g(3);
  EXPECT_THROW(g.AddEdge(1, 1), Error);
  EXPECT_THROW(g.AddEdge(0, 3), Error);
  g.AddEdge(0, 2);
  EXPECT_TRUE(g.HasEdge(2, 0));
  EXPECT_EQ(g.EdgeCount(), 1u);
}

TEST(EmpiricalGraphonTest, CompleteGraphOnTwoVertices) {
  Graph g(2);
  g.AddEdge(0, 1);
  EXPECT_EQ(EmpiricalGraphon(g), FromRows({{0, 1}, {1, 0}}));
}

TEST(EmpiricalGraphonTest, EmptyGraphIsZero) {
  EXPECT_EQ(EmpiricalGraphon(Graph(3)), Graphon::Constant(3, 0.0));
}

TEST(EmpiricalGraphonTest, PathOnThreeVertices) {
  Graph g(3);
  g.AddEdge(0, 1);
  g.AddEdge(1, 2);
  EXPECT_EQ(EmpiricalGraphon(g), FromRows({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
}

TEST(LevelKApproximantTest, ConstantStaysConstant) {
  for (std::size_t k : {1u, 3u, 5u, 12u}) {
    const Graphon a = LevelKApproximant(Graphon::Constant(12, 0.3), k);
    ASSERT_EQ(a.m(), k);
    for (double v : a.values().data()) EXPECT_NEAR(v, 0.3, 1e-15);
  }
}

TEST(LevelKApproximantTest, MidpointProductGrid) {
  // Midpoint grid of xy at m = 4; the top-left 2x2 block averages to 1/16.
  SquareMatrix v(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) v(i, j) = (i + 0.5) * (j + 0.5) / 16.0;
  }
  const Graphon a = LevelKApproximant(Graphon(v), 2);
  EXPECT_DOUBLE_EQ(a(0, 0), 1.0 / 16.0);
}

TEST(LevelKApproximantTest, IdentityAtOwnResolution) {
  const Graphon h = RandomGraphon(7, 11);
  EXPECT_EQ(LevelKApproximant(h, 7), h);
}

TEST(LevelKApproximantTest, NonDividingLevelMatchesFineGridAverage) {
  // Oracle: refine to lcm(m, k) and average equal-size blocks.
  const Graphon h = RandomGraphon(6, 5);
  for (std::size_t k : {4u, 5u, 9u}) {
    const Graphon a = LevelKApproximant(h, k);
    const std::size_t l = std::lcm(h.m(), k);
    const Graphon fine = Refine(h, l);
    const std::size_t b = l / k;
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = 0; q < k; ++q) {
        double sum = 0.0;
        for (std::size_t i = p * b; i < (p + 1) * b; ++i) {
          for (std::size_t j = q * b; j < (q + 1) * b; ++j) sum += fine(i, j);
        }
        EXPECT_NEAR(a(p, q), sum / static_cast<double>(b * b), 1e-14);
      }
    }
  }
}

TEST(LevelKApproximantTest, ContractsL1AlongDyadicLevels) {
  const Graphon r = RandomGraphon(32, 3);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t k : {4u, 8u, 16u, 32u}) {
    const double d = L1Norm(Refine(LevelKApproximant(r, k), 32).values() - r.values());
    EXPECT_LE(d, previous);
    previous = d;
  }
  EXPECT_EQ(previous, 0.0);
}

TEST(LevelKApproximantTest, LogNormsConvergeForProductReference) {
  const Graphon r = RankOneFamily(64, {0.0, 1.0});
  double prev_log = std::numeric_limits<double>::infinity();
  double prev_log1m = std::numeric_limits<double>::infinity();
  for (std::size_t k : {4u, 8u, 16u, 32u}) {
    const Graphon rk = Refine(LevelKApproximant(r, k), 64);
    double log_term = 0.0;
    double log1m_term = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
      for (std::size_t j = 0; j < 64; ++j) {
        log_term += std::abs(std::log(rk(i, j)) - std::log(r(i, j)));
        log1m_term += std::abs(std::log1p(-rk(i, j)) - std::log1p(-r(i, j)));
      }
    }
    EXPECT_LT(log_term, prev_log) << "k=" << k;
    EXPECT_LT(log1m_term, prev_log1m) << "k=" << k;
    prev_log = log_term;
    prev_log1m = log1m_term;
  }
}

TEST(RefineTest, CommonRefinementUsesLcm) {
  const auto [a, b] = CommonRefinement(Graphon::Constant(4, 0.2), Graphon::Constant(6, 0.7));
  EXPECT_EQ(a.m(), 12u);
  EXPECT_EQ(b.m(), 12u);
  EXPECT_THROW(Refine(Graphon::Constant(4, 0.2), 6), Error);
}

TEST(EvaluateAtGridPointsTest, UsesLeftEndpoints) {
  const Graphon h = FromRows({{0.1, 0.2}, {0.2, 0.3}});
  const SquareMatrix e = EvaluateAtGridPoints(h, 3);
  // Points 0, 1/3, 2/3 fall in cells 0, 0, 1.
  EXPECT_EQ(e(0, 1), 0.1);
  EXPECT_EQ(e(1, 2), 0.2);
  EXPECT_EQ(e(2, 2), 0.3);
}

TEST(GridPermutationTest, ValidatesBijection) {
  EXPECT_THROW(GridPermutation({0, 0, 1}), Error);
  EXPECT_THROW(GridPermutation({0, 3, 1}), Error);
  const GridPermutation p({2, 0, 1});
  const GridPermutation q = p.Inverse();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(q[p[i]], i);
}

TEST(ApplyPermutationTest, IdentityLeavesGraphonUnchanged) {
  const Graphon h = RandomGraphon(5, 1);
  EXPECT_EQ(ApplyPermutation(h, GridPermutation::Identity(5)), h);
}

TEST(ApplyPermutationTest, SwapFixesDiagonalBlocks) {
  const Graphon h = FromRows({{1, 0}, {0, 1}});
  EXPECT_EQ(ApplyPermutation(h, GridPermutation({1, 0})), h);
}

TEST(ApplyPermutationTest, RelabelsCells) {
  const Graphon h = FromRows({{0.1, 0.2, 0.3}, {0.2, 0.4, 0.5}, {0.3, 0.5, 0.6}});
  const GridPermutation phi({2, 0, 1});
  const Graphon g = ApplyPermutation(h, phi);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(g(i, j), h(phi[i], phi[j]));
  }
}

TEST(ApplyPermutationTest, PreservesNorms) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graphon h = RandomGraphon(9, seed);
    const Graphon g = ApplyPermutation(h, RandomPermutation(9, seed + 100));
    EXPECT_NEAR(L2Norm(g.values()), L2Norm(h.values()), 1e-15);
    EXPECT_NEAR(L1Norm(g.values()), L1Norm(h.values()), 1e-15);
  }
}

TEST(ApplyPermutationTest, SizeMismatchThrows) {
  EXPECT_THROW(ApplyPermutation(Graphon::Constant(3, 0.5), GridPermutation::Identity(2)),
               Error);
}

TEST(FamiliesTest, ConstantAndRankOne) {
  EXPECT_EQ(ResolveReference("builtin:const:0.25", 4), Graphon::Constant(4, 0.25));
  EXPECT_EQ(ResolveReference("const:0.25", 4), Graphon::Constant(4, 0.25));
  // nu(x) = x: cell averages of xy are the midpoint products.
  const Graphon r = ResolveReference("builtin:rank1:0,1", 8);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      EXPECT_NEAR(r(i, j), (i + 0.5) * (j + 0.5) / 64.0, 1e-15);
    }
  }
}

TEST(FamiliesTest, QuadratureIsExactForQuadraticNu) {
  // nu(x) = (1 + x^2)/2: cell average of nu on [a, b] is closed form.
  const std::size_t m = 5;
  const Graphon r = RankOneFamily(m, {0.5, 0.0, 0.5});
  auto avg = [&](std::size_t i) {
    const double a = static_cast<double>(i) / m;
    const double b = static_cast<double>(i + 1) / m;
    return 0.5 + (b * b * b - a * a * a) / (6.0 * (b - a));
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) EXPECT_NEAR(r(i, j), avg(i) * avg(j), 1e-15);
  }
}

TEST(FamiliesTest, RejectsBadSpecs) {
  EXPECT_THROW(ResolveReference("builtin:const:1.5", 4), Error);
  EXPECT_THROW(ResolveReference("builtin:rank1:0,2", 4), Error);
  EXPECT_THROW(ResolveReference("builtin:nothing:1", 4), Error);
  EXPECT_THROW(ResolveReference("/nonexistent/graphon.txt", 4), Error);
}

TEST(IoTest, GraphonRoundTripIsExact) {
  const Graphon h = RandomGraphon(6, 9);
  std::stringstream ss;
  WriteGraphon(ss, h);
  EXPECT_EQ(ReadGraphon(ss), h);
}

TEST(IoTest, SmallAsymmetryIsRepaired) {
  std::stringstream ss("2\n0.5 0.3\n0.3000000000000005 0.5\n");
  const Graphon h = ReadGraphon(ss);
  EXPECT_EQ(h(0, 1), h(1, 0));
  EXPECT_NEAR(h(0, 1), 0.3, 1e-15);
}

TEST(IoTest, LargeAsymmetryIsRejected) {
  std::stringstream ss("2\n0.5 0.3\n0.4 0.5\n");
  try {
    ReadGraphon(ss);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(IoTest, TruncatedInputIsRejected) {
  std::stringstream ss("3\n0.5 0.3 0.1\n0.3 0.5\n");
  EXPECT_THROW(ReadGraphon(ss), Error);
}

TEST(IoTest, GraphRoundTrip) {
  Graph g(5);
  g.AddEdge(0, 4);
  g.AddEdge(1, 2);
  std::stringstream ss;
  WriteGraph(ss, g);
  EXPECT_EQ(ss.str(), "5\n1 5\n2 3\n");
  EXPECT_EQ(ReadGraph(ss), g);
}

}  // namespace
}  // namespace graphon_ldp
