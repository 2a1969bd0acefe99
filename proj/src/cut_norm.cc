#include "graphon_ldp/cut_norm.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "graphon_ldp/error.h"
#include "graphon_ldp/parallel.h"
#include "graphon_ldp/random.h"

namespace graphon_ldp {
namespace {

using Mask = std::uint32_t;

std::vector<std::size_t> MaskToSet(Mask mask, std::size_t m) {
  std::vector<std::size_t> set;
  for (std::size_t i = 0; i < m; ++i) {
    if (mask & (Mask{1} << i)) set.push_back(i);
  }
  return set;
}

// Sign-optimal response to a vector of partial sums: the positive or the
// negative support, whichever has the larger absolute total.
struct Response {
  double total = 0.0;
  std::vector<std::size_t> set;
};

Response BestResponse(const std::vector<double>& sums) {
  double pos = 0.0;
  double neg = 0.0;
  for (double s : sums) {
    if (s > 0.0) pos += s;
    if (s < 0.0) neg -= s;
  }
  // Ties keep the lexicographically smaller support.
  bool use_pos = pos > neg;
  if (pos == neg) {
    std::vector<std::size_t> p;
    std::vector<std::size_t> n;
    for (std::size_t j = 0; j < sums.size(); ++j) {
      if (sums[j] > 0.0) p.push_back(j);
      if (sums[j] < 0.0) n.push_back(j);
    }
    use_pos = !std::lexicographical_compare(n.begin(), n.end(), p.begin(), p.end());
  }
  Response r;
  r.total = use_pos ? pos : neg;
  for (std::size_t j = 0; j < sums.size(); ++j) {
    if (use_pos ? sums[j] > 0.0 : sums[j] < 0.0) r.set.push_back(j);
  }
  return r;
}

std::vector<double> ColumnSums(const SquareMatrix& d, const std::vector<std::size_t>& rows) {
  std::vector<double> col(d.size(), 0.0);
  for (std::size_t i : rows) {
    const auto row = d.row(i);
    for (std::size_t j = 0; j < d.size(); ++j) col[j] += row[j];
  }
  return col;
}

std::vector<double> RowSums(const SquareMatrix& d, const std::vector<std::size_t>& cols) {
  std::vector<double> out(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto row = d.row(i);
    for (std::size_t j : cols) out[i] += row[j];
  }
  return out;
}

CutNormResult Finalize(const SquareMatrix& d, std::vector<std::size_t> s,
                       std::vector<std::size_t> t, bool exact) {
  CutNormResult result;
  result.value = CutValue(d, s, t);
  result.argmax_s = std::move(s);
  result.argmax_t = std::move(t);
  result.exact = exact;
  return result;
}

}  // namespace

double CutValue(const SquareMatrix& d, const std::vector<std::size_t>& s,
                const std::vector<std::size_t>& t) {
  double sum = 0.0;
  for (std::size_t i : s) {
    for (std::size_t j : t) sum += d(i, j);
  }
  const double m = static_cast<double>(d.size());
  return std::abs(sum) / (m * m);
}

CutNormResult CutNormExact(const SquareMatrix& d) {
  const std::size_t m = d.size();
  if (m > kExactCutNormMaxResolution) {
    throw Error(ErrorCode::kResolutionTooLarge,
                "exact cut norm supports m <= 16, got " + std::to_string(m));
  }
  if (m == 0) return {};

  double scale = 0.0;
  for (double v : d.data()) scale += std::abs(v);
  const double tie_tol = 1e-14 * std::max(scale, 1e-300);

  std::vector<double> col(m, 0.0);
  double best = -1.0;
  Mask best_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << m;
  Mask gray = 0;
  for (std::uint64_t step = 0; step < total; ++step) {
    if (step > 0) {
      // Gray code: flip the lowest set bit of step.
      const int bit = std::countr_zero(step);
      const Mask flip = Mask{1} << bit;
      const double sign = (gray & flip) ? -1.0 : 1.0;
      gray ^= flip;
      const auto row = d.row(static_cast<std::size_t>(bit));
      for (std::size_t j = 0; j < m; ++j) col[j] += sign * row[j];
    }
    double pos = 0.0;
    double neg = 0.0;
    for (double c : col) {
      if (c > 0.0) pos += c;
      if (c < 0.0) neg -= c;
    }
    const double value = std::max(pos, neg);
    if (value > best + tie_tol) {
      best = value;
      best_mask = gray;
    } else if (value >= best - tie_tol) {
      const auto cand = MaskToSet(gray, m);
      const auto cur = MaskToSet(best_mask, m);
      if (std::lexicographical_compare(cand.begin(), cand.end(), cur.begin(), cur.end())) {
        best = std::max(best, value);
        best_mask = gray;
      }
    }
  }

  auto s = MaskToSet(best_mask, m);
  auto t = BestResponse(ColumnSums(d, s)).set;
  return Finalize(d, std::move(s), std::move(t), true);
}

CutNormResult CutNormHeuristic(const SquareMatrix& d, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw Error(ErrorCode::kInvalidArgument, "restarts must be >= 1");
  const std::size_t m = d.size();
  if (m == 0) return {};

  std::vector<CutNormResult> per_restart(static_cast<std::size_t>(restarts));
  ParallelFor(per_restart.size(), [&](std::size_t r) {
    CounterRng rng(DeriveSeed(seed, r));
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m; ++i) {
      if (rng() & 1) s.push_back(i);
    }
    std::vector<std::size_t> t;
    double value = -1.0;
    for (int sweep = 0; sweep < 1000; ++sweep) {
      t = BestResponse(ColumnSums(d, s)).set;
      Response next = BestResponse(RowSums(d, t));
      if (next.total <= value * (1.0 + 1e-15)) break;
      value = next.total;
      s = std::move(next.set);
    }
    t = BestResponse(ColumnSums(d, s)).set;
    per_restart[r] = Finalize(d, s, t, false);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < per_restart.size(); ++r) {
    if (per_restart[r].value > per_restart[best].value) best = r;
  }
  return per_restart[best];
}

CutNormResult CutNorm(const SquareMatrix& d, std::uint64_t seed) {
  if (d.size() <= kExactCutNormMaxResolution) return CutNormExact(d);
  return CutNormHeuristic(d, 32, seed);
}

double CutDistance(const Graphon& h1, const Graphon& h2) {
  if (h1.m() != h2.m()) {
    throw Error(ErrorCode::kResolutionMismatch,
                "cut distance needs equal resolutions (" + std::to_string(h1.m()) + " vs " +
                    std::to_string(h2.m()) + "); refine to a common multiple first");
  }
  return CutNorm(h1.values() - h2.values()).value;
}

CutMetricResult CutMetricEstimate(const Graphon& h1, const Graphon& h2,
                                  const CutMetricOptions& options) {
  if (h1.m() != h2.m()) {
    throw Error(ErrorCode::kResolutionMismatch, "cut metric needs equal resolutions");
  }
  const std::size_t m = h1.m();
  auto distance = [&](const std::vector<std::size_t>& perm) {
    return CutNorm(ApplyPermutation(h1.values(), GridPermutation(perm)) - h2.values(),
                   options.seed)
        .value;
  };

  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  CutMetricResult result;
  if (m <= kExhaustivePermutationMaxResolution) {
    result.exhaustive = true;
    double best = distance(perm);
    std::vector<std::size_t> best_perm = perm;
    while (best > 0.0 && std::next_permutation(perm.begin(), perm.end())) {
      const double v = distance(perm);
      if (v < best) {
        best = v;
        best_perm = perm;
      }
    }
    result.value = best;
    result.best = GridPermutation(best_perm);
    return result;
  }

  const int restarts = std::max(1, options.restarts);
  std::vector<std::pair<double, std::vector<std::size_t>>> found(
      static_cast<std::size_t>(restarts));
  ParallelFor(found.size(), [&](std::size_t r) {
    std::vector<std::size_t> p(m);
    std::iota(p.begin(), p.end(), std::size_t{0});
    if (r > 0) {
      CounterRng rng(DeriveSeed(options.seed, r));
      for (std::size_t i = m - 1; i > 0; --i) std::swap(p[i], p[rng.Index(i + 1)]);
    }
    double value = distance(p);
    bool improved = true;
    while (improved && value > 0.0) {
      improved = false;
      for (std::size_t a = 0; a < m && !improved; ++a) {
        for (std::size_t b = a + 1; b < m && !improved; ++b) {
          std::swap(p[a], p[b]);
          const double v = distance(p);
          if (v < value) {
            value = v;
            improved = true;
          } else {
            std::swap(p[a], p[b]);
          }
        }
      }
    }
    found[r] = {value, std::move(p)};
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < found.size(); ++r) {
    if (found[r].first < found[best].first) best = r;
  }
  result.value = found[best].first;
  result.best = GridPermutation(found[best].second);
  return result;
}

}  // namespace graphon_ldp
