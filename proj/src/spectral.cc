#include "graphon_ldp/spectral.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "graphon_ldp/error.h"
#include "graphon_ldp/random.h"

namespace graphon_ldp {
namespace {

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct IterationOutcome {
  KernelNorm pair;
  bool converged = false;
};

IterationOutcome Iterate(const SquareMatrix& a, std::vector<double> v, double tolerance,
                         int max_iterations, std::uint64_t seed) {
  const std::size_t n = a.size();
  std::vector<double> w(n);
  IterationOutcome out;

  MatVec(a, v, w);
  double lambda = Dot(v, w);
  if (Norm(w) == 0.0) {
    // Start vector annihilated: either A = 0 or a measure-zero stall.
    CounterRng rng(seed);
    for (double& x : v) x = rng.Uniform(0.5, 1.5);
    const double norm = Norm(v);
    for (double& x : v) x /= norm;
    MatVec(a, v, w);
    lambda = Dot(v, w);
    if (Norm(w) == 0.0) {
      out.pair = {0.0, v, 0};
      out.converged = true;
      return out;
    }
  }
  const double shift = 0.25 * std::abs(lambda);

  for (int it = 1; it <= max_iterations; ++it) {
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = w[i] - lambda * v[i];
      residual += d * d;
    }
    residual = std::sqrt(residual);
    if (residual <= tolerance * std::abs(lambda)) {
      out.pair = {lambda, v, it};
      out.converged = true;
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) w[i] += shift * v[i];
    const double norm = Norm(w);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    MatVec(a, v, w);
    lambda = Dot(v, w);
  }
  out.pair = {lambda, v, max_iterations};
  return out;
}

}  // namespace

KernelNorm PerronEigenpair(const SquareMatrix& a, const PowerIterationOptions& options) {
  const std::size_t n = a.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty matrix");

  std::vector<double> v(n, 1.0);
  if (options.warm_start.size() == n) {
    v.assign(options.warm_start.begin(), options.warm_start.end());
    for (double& x : v) x = std::abs(x);
  }
  double norm = Norm(v);
  if (norm == 0.0) {
    v.assign(n, 1.0);
    norm = Norm(v);
  }
  for (double& x : v) x /= norm;

  IterationOutcome first =
      Iterate(a, v, options.relative_tolerance, options.max_iterations, options.seed);
  KernelNorm result = first.pair;
  if (!first.converged) {
    // Tiny spectral gap: the vector barely moves. Dense solve instead.
    Eigen::MatrixXd dense(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) dense(i, j) = 0.5 * (a(i, j) + a(j, i));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::kNonConvergence,
                  "power iteration did not converge after " +
                      std::to_string(options.max_iterations) + " iterations");
    }
    // Eigenvalues ascend; the Perron root is the last one.
    const Eigen::VectorXd top = solver.eigenvectors().col(static_cast<Eigen::Index>(n - 1));
    result.value = solver.eigenvalues()(static_cast<Eigen::Index>(n - 1));
    for (std::size_t i = 0; i < n; ++i) result.eigvec[i] = top(static_cast<Eigen::Index>(i));
  }
  if (std::accumulate(result.eigvec.begin(), result.eigvec.end(), 0.0) < 0.0) {
    for (double& x : result.eigvec) x = -x;
  }
  // Final Rayleigh quotient on the max-scaled vector: flat eigenvectors become
  // exactly 1 and constant kernels give their value without rounding.
  double peak = 0.0;
  for (double x : result.eigvec) peak = std::max(peak, std::abs(x));
  if (peak > 0.0 && result.value != 0.0) {
    std::vector<double> u(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = result.eigvec[i] / peak;
    MatVec(a, u, w);
    result.value = Dot(u, w) / Dot(u, u);
  }
  return result;
}

KernelNorm OperatorNorm(const Graphon& h) { return OperatorNorm(h, PowerIterationOptions{}); }

KernelNorm OperatorNorm(const Graphon& h, const PowerIterationOptions& options) {
  return PerronEigenpair((1.0 / static_cast<double>(h.m())) * h.values(), options);
}

double SecondEigenvalueMagnitude(const SquareMatrix& a, const KernelNorm& top, int iterations) {
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  const auto& u = top.eigvec;
  auto deflate = [&](std::vector<double>& x) {
    const double c = Dot(x, u);
    for (std::size_t i = 0; i < n; ++i) x[i] -= c * u[i];
  };
  std::vector<double> v(n);
  // Alternating-sign start is generically not orthogonal to lambda_2's space.
  for (std::size_t i = 0; i < n; ++i) v[i] = (i % 2 ? -1.0 : 1.0) + 0.01 * static_cast<double>(i);
  deflate(v);
  double norm = Norm(v);
  if (norm == 0.0) return 0.0;
  for (double& x : v) x /= norm;
  std::vector<double> w(n);
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    MatVec(a, v, w);
    deflate(w);
    estimate = Norm(w);
    if (estimate == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / estimate;
  }
  return estimate;
}

double LambdaOverN(const Graph& g) {
  const std::size_t n = g.n();
  SquareMatrix adjacency(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) adjacency(u, v) = g.HasEdge(u, v) ? 1.0 : 0.0;
  }
  PowerIterationOptions options;
  options.relative_tolerance = 1e-10;
  return PerronEigenpair(adjacency, options).value / static_cast<double>(n);
}

}  // namespace graphon_ldp
