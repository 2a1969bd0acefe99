#ifndef GRAPHON_LDP_RATE_H_
#define GRAPHON_LDP_RATE_H_

#include <cstddef>
#include <cstdint>

#include "graphon_ldp/graphon.h"
#include "graphon_ldp/square_matrix.h"

namespace graphon_ldp {

// Bernoulli relative entropy a log(a/b) + (1-a) log((1-a)/(1-b)) in nats,
// with 0 log 0 = 0. Requires a in [0,1] and b in (0,1); kDomain otherwise.
double RelEntropy(double a, double b);

struct RateResult {
  double value = 0.0;
  // Nonnegative cell contributions; value = mean of per_cell.
  SquareMatrix per_cell;
};

struct ReferenceCheck {
  bool ok = false;
  double l1_log_r = 0.0;
  double l1_log_1mr = 0.0;
};

// ok iff every cell lies strictly inside (0, 1). The two norms are
// ||log r||_1 and ||log(1-r)||_1 (infinite when ok is false).
ReferenceCheck CheckReference(const Graphon& r);

// Throws kInvalidReference unless CheckReference(r).ok.
void RequireReference(const Graphon& r);

// I_r(h) = integral of R(h | r).
RateResult RateI(const Graphon& h, const Graphon& r);

struct PermutationSearchOptions {
  int restarts = 20;
  std::uint64_t seed = 0;
};

// min over grid permutations phi of I_r(h^phi): exhaustive when m <= 8,
// otherwise first-improvement transposition search (restart 0 starts at the
// identity, so the result never exceeds I_r(h)).
double RateJEstimate(const Graphon& h, const Graphon& r,
                     const PermutationSearchOptions& options = {});

// ||log r1 - log r2||_1 + ||log(1-r1) - log(1-r2)||_1, a uniform bound on
// |I_{r1}(f) - I_{r2}(f)| over all graphons f.
double UniformRateBound(const Graphon& r1, const Graphon& r2);

// (1/n^2) sum_{u<v} [ g_uv log(a_uv/b_uv) + (1-g_uv) log((1-a_uv)/(1-b_uv)) ]
// for probability matrices a, b of size n = g.n() with off-diagonal entries
// in (0, 1). Diagonal entries are ignored.
double LogLikelihoodRatio(const Graph& g, const SquareMatrix& a, const SquareMatrix& b);
double LogLikelihoodRatio(const Graph& g, const Graphon& a, const Graphon& b);

// Cell bookkeeping for the likelihood-ratio bound between an edge-probability
// graphon r_n at resolution n and a block graphon at resolution k evaluated at
// the grid points (u/n, v/n).
//
// Cells B(u,v,n) fully inside the k-block holding their grid point contribute
// their exact L1 mass to the interior terms; straddling cells (the over-count
// set A_n) contribute the L1 mass of their overlap with that block, which is
// multiplied by k^2 in Budget().
struct BlockApproxBudget {
  std::size_t n = 0;
  std::size_t k = 0;
  double interior_log_r = 0.0;
  double overcount_log_r = 0.0;
  double interior_log_1mr = 0.0;
  double overcount_log_1mr = 0.0;
  // Lebesgue measure of A_n.
  double overcount_area = 0.0;

  double Budget() const {
    const double k2 = static_cast<double>(k * k);
    return interior_log_r + k2 * overcount_log_r + interior_log_1mr +
           k2 * overcount_log_1mr;
  }
};

BlockApproxBudget ComputeBlockApproxBudget(const Graphon& r_n, const Graphon& block);

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_RATE_H_
