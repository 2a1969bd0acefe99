#include "graphon_ldp/rate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "graphon_ldp/cut_norm.h"
#include "graphon_ldp/error.h"
#include "graphon_ldp/parallel.h"
#include "graphon_ldp/random.h"

namespace graphon_ldp {
namespace {

constexpr double kLogFloor = 1e-300;

// log(x / y) for x >= 0, y > 0; log1p near 1 keeps R(a|b) accurate for a ~ b.
double LogRatio(double x, double y) {
  const double diff = x - y;
  if (std::abs(diff) < 0.5 * y) return std::log1p(diff / y);
  return std::log(std::max(x / y, kLogFloor));
}

void RequireSameResolution(const Graphon& a, const Graphon& b, const char* what) {
  if (a.m() != b.m()) {
    throw Error(ErrorCode::kResolutionMismatch,
                std::string(what) + ": resolutions differ (" + std::to_string(a.m()) + " vs " +
                    std::to_string(b.m()) + ")");
  }
}

// Sum of R(h[p_i][p_j] | r[i][j]) in row-major order. The fixed order makes
// the value depend only on the composed relabelling.
double PermutedRateSum(const SquareMatrix& h, const std::vector<std::size_t>& perm,
                       const SquareMatrix& r) {
  const std::size_t m = r.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) sum += RelEntropy(h(perm[i], perm[j]), r(i, j));
  }
  return sum / static_cast<double>(m * m);
}

double LocalSearch(const SquareMatrix& h, const SquareMatrix& r, std::vector<std::size_t> p) {
  const std::size_t m = p.size();
  double value = PermutedRateSum(h, p, r);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t a = 0; a < m && !improved; ++a) {
      for (std::size_t b = a + 1; b < m && !improved; ++b) {
        std::swap(p[a], p[b]);
        const double v = PermutedRateSum(h, p, r);
        if (v < value) {
          value = v;
          improved = true;
        } else {
          std::swap(p[a], p[b]);
        }
      }
    }
  }
  return value;
}

}  // namespace

double RelEntropy(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw Error(ErrorCode::kDomain, "relative entropy: a = " + std::to_string(a) +
                                        " outside [0,1]");
  }
  if (!(b > 0.0 && b < 1.0)) {
    throw Error(ErrorCode::kDomain, "relative entropy: b = " + std::to_string(b) +
                                        " outside (0,1)");
  }
  const double first = a == 0.0 ? 0.0 : a * LogRatio(a, b);
  const double second = a == 1.0 ? 0.0 : (1.0 - a) * LogRatio(1.0 - a, 1.0 - b);
  return std::max(0.0, first + second);
}

ReferenceCheck CheckReference(const Graphon& r) {
  ReferenceCheck check;
  check.ok = true;
  double sum_r = 0.0;
  double sum_1mr = 0.0;
  for (double v : r.values().data()) {
    if (!(v > 0.0 && v < 1.0)) {
      check.ok = false;
      continue;
    }
    sum_r += -std::log(v);
    sum_1mr += -std::log1p(-v);
  }
  const double cells = static_cast<double>(r.m() * r.m());
  if (check.ok) {
    check.l1_log_r = sum_r / cells;
    check.l1_log_1mr = sum_1mr / cells;
  } else {
    check.l1_log_r = std::numeric_limits<double>::infinity();
    check.l1_log_1mr = std::numeric_limits<double>::infinity();
  }
  return check;
}

void RequireReference(const Graphon& r) {
  if (!CheckReference(r).ok) {
    throw Error(ErrorCode::kInvalidReference,
                "reference graphon has a cell equal to 0 or 1 (log r or log(1-r) not "
                "integrable)");
  }
}

RateResult RateI(const Graphon& h, const Graphon& r) {
  RequireSameResolution(h, r, "rate_I");
  RequireReference(r);
  const std::size_t m = r.m();
  RateResult result;
  result.per_cell = SquareMatrix(m);
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double c = RelEntropy(h(i, j), r(i, j));
      result.per_cell(i, j) = c;
      sum += c;
    }
  }
  result.value = sum / static_cast<double>(m * m);
  return result;
}

double RateJEstimate(const Graphon& h, const Graphon& r,
                     const PermutationSearchOptions& options) {
  RequireSameResolution(h, r, "rate_J");
  RequireReference(r);
  const std::size_t m = r.m();
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  if (m <= kExhaustivePermutationMaxResolution) {
    double best = PermutedRateSum(h.values(), perm, r.values());
    while (std::next_permutation(perm.begin(), perm.end())) {
      best = std::min(best, PermutedRateSum(h.values(), perm, r.values()));
    }
    return best;
  }

  const std::size_t restarts = static_cast<std::size_t>(std::max(1, options.restarts));
  std::vector<double> found(restarts);
  ParallelFor(restarts, [&](std::size_t k) {
    std::vector<std::size_t> p = perm;
    if (k > 0) {
      CounterRng rng(DeriveSeed(options.seed, k));
      for (std::size_t i = m - 1; i > 0; --i) std::swap(p[i], p[rng.Index(i + 1)]);
    }
    found[k] = LocalSearch(h.values(), r.values(), std::move(p));
  });
  return *std::min_element(found.begin(), found.end());
}

double UniformRateBound(const Graphon& r1, const Graphon& r2) {
  RequireSameResolution(r1, r2, "uniform_rate_bound");
  RequireReference(r1);
  RequireReference(r2);
  double sum = 0.0;
  for (std::size_t i = 0; i < r1.m(); ++i) {
    for (std::size_t j = 0; j < r1.m(); ++j) {
      const double a = r1(i, j);
      const double b = r2(i, j);
      sum += std::abs(std::log(a) - std::log(b)) + std::abs(std::log1p(-a) - std::log1p(-b));
    }
  }
  return sum / static_cast<double>(r1.m() * r1.m());
}

double LogLikelihoodRatio(const Graph& g, const SquareMatrix& a, const SquareMatrix& b) {
  const std::size_t n = g.n();
  if (a.size() != n || b.size() != n) {
    throw Error(ErrorCode::kResolutionMismatch,
                "likelihood ratio: probability matrices must have size n = " +
                    std::to_string(n));
  }
  double sum = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double pa = a(u, v);
      const double pb = b(u, v);
      if (!(pa > 0.0 && pa < 1.0 && pb > 0.0 && pb < 1.0)) {
        throw Error(ErrorCode::kDomain, "likelihood ratio: probability 0 or 1 at pair (" +
                                            std::to_string(u) + "," + std::to_string(v) + ")");
      }
      sum += g.HasEdge(u, v) ? std::log(pa / pb) : std::log((1.0 - pa) / (1.0 - pb));
    }
  }
  return sum / static_cast<double>(n * n);
}

double LogLikelihoodRatio(const Graph& g, const Graphon& a, const Graphon& b) {
  return LogLikelihoodRatio(g, a.values(), b.values());
}

BlockApproxBudget ComputeBlockApproxBudget(const Graphon& r_n, const Graphon& block) {
  RequireReference(r_n);
  RequireReference(block);
  const std::size_t n = r_n.m();
  const std::size_t k = block.m();
  BlockApproxBudget out;
  out.n = n;
  out.k = k;
  const double nk = static_cast<double>(n * k);

  // Per axis: the k-block holding the grid point u/n, whether [u/n, (u+1)/n)
  // stays inside it, and the overlap length.
  std::vector<std::size_t> block_of(n);
  std::vector<bool> inside(n);
  std::vector<double> overlap(n);
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t i = (u * k) / n;
    block_of[u] = i;
    inside[u] = (u + 1) * k <= (i + 1) * n;
    overlap[u] = static_cast<double>(std::min((u + 1) * k, (i + 1) * n) - u * k) / nk;
  }

  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      const double a = r_n(u, v);
      const double b = block(block_of[u], block_of[v]);
      const double diff_r = std::abs(std::log(a) - std::log(b));
      const double diff_1mr = std::abs(std::log1p(-a) - std::log1p(-b));
      const double area = overlap[u] * overlap[v];
      if (inside[u] && inside[v]) {
        out.interior_log_r += area * diff_r;
        out.interior_log_1mr += area * diff_1mr;
      } else {
        out.overcount_log_r += area * diff_r;
        out.overcount_log_1mr += area * diff_1mr;
        out.overcount_area += area;
      }
    }
  }
  return out;
}

}  // namespace graphon_ldp
