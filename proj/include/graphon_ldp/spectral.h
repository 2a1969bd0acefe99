#ifndef GRAPHON_LDP_SPECTRAL_H_
#define GRAPHON_LDP_SPECTRAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "graphon_ldp/graphon.h"
#include "graphon_ldp/square_matrix.h"

namespace graphon_ldp {

struct KernelNorm {
  double value = 0.0;
  // Unit Euclidean norm, nonnegative entries sum >= 0.
  std::vector<double> eigvec;
  int iterations = 0;
};

struct PowerIterationOptions {
  // Stop when ||A v - lambda v|| <= relative_tolerance * lambda.
  double relative_tolerance = 1e-12;
  int max_iterations = 10000;
  // Seed for the random restart used if the start vector is annihilated.
  std::uint64_t seed = 0;
  // Optional start vector (e.g. the previous eigenvector in an optimiser).
  std::span<const double> warm_start = {};
};

// Perron eigenpair of a symmetric matrix with nonnegative entries, i.e. the
// largest eigenvalue, which equals the spectral radius. Uses the shifted
// iteration v <- (A + s I) v, s = lambda_0 / 4, so bipartite spectra do not
// oscillate. On hitting the iteration cap (near-repeated top eigenvalue) it
// falls back to a dense symmetric eigensolver; kNonConvergence only if that
// fails too.
KernelNorm PerronEigenpair(const SquareMatrix& a, const PowerIterationOptions& options = {});

// ||T_h|| on L^2[0,1]: top eigenvalue of values / m.
KernelNorm OperatorNorm(const Graphon& h);
KernelNorm OperatorNorm(const Graphon& h, const PowerIterationOptions& options);

// Estimate of |lambda_2| of the scaled kernel by power iteration deflated
// against `top`. Used to detect a numerically repeated top eigenvalue.
double SecondEigenvalueMagnitude(const SquareMatrix& a, const KernelNorm& top,
                                 int iterations = 60);

// Largest adjacency eigenvalue divided by n (relative tolerance 1e-10).
double LambdaOverN(const Graph& g);

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_SPECTRAL_H_
