#ifndef GRAPHON_LDP_CUT_NORM_H_
#define GRAPHON_LDP_CUT_NORM_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "graphon_ldp/graphon.h"
#include "graphon_ldp/square_matrix.h"

namespace graphon_ldp {

// Largest resolution for which the cut norm is computed exhaustively.
inline constexpr std::size_t kExactCutNormMaxResolution = 16;
// Largest resolution for which permutation searches enumerate all m!.
inline constexpr std::size_t kExhaustivePermutationMaxResolution = 8;

struct CutNormResult {
  double value = 0.0;
  // 0-based, sorted ascending.
  std::vector<std::size_t> argmax_s;
  std::vector<std::size_t> argmax_t;
  bool exact = false;
};

// |(1/m^2) sum_{i in s, j in t} d(i, j)|.
double CutValue(const SquareMatrix& d, const std::vector<std::size_t>& s,
                const std::vector<std::size_t>& t);

// Exhaustive over S (Gray-code order) with the sign-optimal response T.
// Ties resolve to the lexicographically smallest S, then T.
// Throws kResolutionTooLarge if m > 16.
CutNormResult CutNormExact(const SquareMatrix& d);

// Alternating maximisation from random initial sets, best over restarts.
// Restart r uses the seed DeriveSeed(seed, r) so results do not depend on
// thread scheduling.
CutNormResult CutNormHeuristic(const SquareMatrix& d, int restarts,
                               std::uint64_t seed = 0);

// Exact when m <= 16, heuristic (32 restarts) otherwise.
CutNormResult CutNorm(const SquareMatrix& d, std::uint64_t seed = 0);

// d_box(h1, h2). Resolutions must match (see CommonRefinement).
double CutDistance(const Graphon& h1, const Graphon& h2);

struct CutMetricOptions {
  int restarts = 4;
  std::uint64_t seed = 0;
};

struct CutMetricResult {
  double value = 0.0;
  GridPermutation best = GridPermutation::Identity(0);
  bool exhaustive = false;
};

// min over grid-block permutations phi of d_box(h1^phi, h2): an upper bound on
// the cut metric. All m! permutations when m <= 8, otherwise first-improvement
// local search over transpositions.
CutMetricResult CutMetricEstimate(const Graphon& h1, const Graphon& h2,
                                  const CutMetricOptions& options = {});

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_CUT_NORM_H_
