#include "graphon_ldp/sampler.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphon_ldp/error.h"
#include "graphon_ldp/parallel.h"
#include "graphon_ldp/random.h"
#include "graphon_ldp/spectral.h"

namespace graphon_ldp {

std::uint64_t PairIndex(std::size_t n, std::size_t i, std::size_t j) {
  // Pairs in rows 0..i-1 number i*n - i*(i+1)/2.
  const std::uint64_t row_start =
      static_cast<std::uint64_t>(i) * n - static_cast<std::uint64_t>(i) * (i + 1) / 2;
  return row_start + (j - i - 1);
}

Graph Sample(std::size_t n, const Graphon& r, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "sample needs n >= 1");
  const SquareMatrix p = EvaluateAtGridPoints(r, n);
  Graph g(n);
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++index) {
      if (ToUnitInterval(CounterHash(seed, index)) < p(i, j)) g.AddEdge(i, j);
    }
  }
  return g;
}

Graph Sample(const SampleSpec& spec) { return Sample(spec.n, spec.r, spec.seed); }

EnsembleStats RunEnsemble(const SampleSpec& spec, const std::vector<double>& thresholds) {
  if (spec.count == 0) throw Error(ErrorCode::kInvalidArgument, "ensemble needs count >= 1");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw Error(ErrorCode::kInvalidArgument, "ensemble thresholds must be sorted");
  }
  EnsembleStats stats;
  stats.samples.resize(spec.count);
  stats.seeds.resize(spec.count);
  ParallelFor(spec.count, [&](std::size_t i) {
    const std::uint64_t seed = spec.seed + i;
    stats.seeds[i] = seed;
    stats.samples[i] = LambdaOverN(Sample(spec.n, spec.r, seed));
  });

  const double count = static_cast<double>(spec.count);
  stats.mean = std::accumulate(stats.samples.begin(), stats.samples.end(), 0.0) / count;
  double ss = 0.0;
  for (double x : stats.samples) ss += (x - stats.mean) * (x - stats.mean);
  stats.stddev = spec.count > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  const auto [lo, hi] = std::minmax_element(stats.samples.begin(), stats.samples.end());
  stats.min = *lo;
  stats.max = *hi;
  for (double t : thresholds) {
    stats.tail_counts[t] = static_cast<std::size_t>(
        std::count_if(stats.samples.begin(), stats.samples.end(), [t](double x) { return x >= t; }));
  }
  return stats;
}

}  // namespace graphon_ldp
