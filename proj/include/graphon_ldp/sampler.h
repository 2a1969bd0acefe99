#ifndef GRAPHON_LDP_SAMPLER_H_
#define GRAPHON_LDP_SAMPLER_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "graphon_ldp/graphon.h"

namespace graphon_ldp {

struct SampleSpec {
  std::size_t n = 1;
  Graphon r = Graphon::Constant(1, 0.0);
  std::uint64_t seed = 0;
  std::size_t count = 1;
};

// Lexicographic index of the pair (i, j), i < j, among all pairs of n vertices.
std::uint64_t PairIndex(std::size_t n, std::size_t i, std::size_t j);

// Pair {i, j} is an edge iff ToUnitInterval(CounterHash(seed, PairIndex)) <
// r(i/n, j/n). No self-loops.
Graph Sample(const SampleSpec& spec);
Graph Sample(std::size_t n, const Graphon& r, std::uint64_t seed);

struct EnsembleStats {
  std::vector<double> samples;
  std::vector<std::uint64_t> seeds;
  double mean = 0.0;
  // Sample standard deviation (n - 1 denominator); 0 for a single sample.
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  // threshold -> number of samples with lambda/n >= threshold.
  std::map<double, std::size_t> tail_counts;
};

// Member i uses seed spec.seed + i. Members run in parallel; results are
// stored by index.
EnsembleStats RunEnsemble(const SampleSpec& spec, const std::vector<double>& thresholds);

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_SAMPLER_H_
