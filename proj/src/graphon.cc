#include "graphon_ldp/graphon.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graphon_ldp/error.h"

namespace graphon_ldp {
namespace {

// w[a][b] = k * |[a/k, (a+1)/k) ∩ [b/m, (b+1)/m)|, in integer units of
// 1/(k m) so that k == m gives the identity exactly.
std::vector<std::vector<double>> AveragingWeights(std::size_t k, std::size_t m) {
  std::vector<std::vector<double>> w(k, std::vector<double>(m, 0.0));
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t lo = a * m;
    const std::size_t hi = (a + 1) * m;
    const std::size_t first = lo / k;
    const std::size_t last = std::min(m, (hi + k - 1) / k);
    for (std::size_t b = first; b < last; ++b) {
      const std::size_t overlap = std::min(hi, (b + 1) * k) - std::max(lo, b * k);
      w[a][b] = static_cast<double>(overlap) / static_cast<double>(m);
    }
  }
  return w;
}

std::size_t CellOf(double x, std::size_t m) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kDomain, "point outside [0,1]: " + std::to_string(x));
  }
  return std::min(m - 1, static_cast<std::size_t>(x * static_cast<double>(m)));
}

}  // namespace

Graphon::Graphon(SquareMatrix values) : values_(std::move(values)) {
  const std::size_t m = values_.size();
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "graphon resolution must be >= 1");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = values_(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::kDomain, "graphon value outside [0,1] at (" +
                                            std::to_string(i) + "," + std::to_string(j) +
                                            "): " + std::to_string(v));
      }
      if (v != values_(j, i)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "graphon values not symmetric at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      }
    }
  }
}

Graphon Graphon::Constant(std::size_t m, double p) { return Graphon(SquareMatrix(m, p)); }

double Graphon::At(double x, double y) const {
  return values_(CellOf(x, m()), CellOf(y, m()));
}

Graph::Graph(std::size_t n) : n_(n), adj_(n * n, 0) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "graph needs n >= 1");
}

void Graph::AddEdge(std::size_t u, std::size_t v) {
  if (u >= n_ || v >= n_) {
    throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
  }
  if (u == v) throw Error(ErrorCode::kInvalidArgument, "self-loops are not allowed");
  adj_[u * n_ + v] = 1;
  adj_[v * n_ + u] = 1;
}

std::size_t Graph::EdgeCount() const {
  return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), 1)) / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::Edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < n_; ++u) {
    for (std::size_t v = u + 1; v < n_; ++v) {
      if (HasEdge(u, v)) edges.emplace_back(u, v);
    }
  }
  return edges;
}

GridPermutation::GridPermutation(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
  std::vector<bool> seen(perm_.size(), false);
  for (std::size_t p : perm_) {
    if (p >= perm_.size() || seen[p]) {
      throw Error(ErrorCode::kInvalidArgument, "grid permutation is not a bijection");
    }
    seen[p] = true;
  }
}

GridPermutation GridPermutation::Identity(std::size_t m) {
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  return GridPermutation(std::move(perm));
}

GridPermutation GridPermutation::Inverse() const {
  std::vector<std::size_t> inv(perm_.size());
  for (std::size_t i = 0; i < perm_.size(); ++i) inv[perm_[i]] = i;
  return GridPermutation(std::move(inv));
}

Graphon EmpiricalGraphon(const Graph& g) {
  SquareMatrix values(g.n());
  for (std::size_t u = 0; u < g.n(); ++u) {
    for (std::size_t v = 0; v < g.n(); ++v) values(u, v) = g.HasEdge(u, v) ? 1.0 : 0.0;
  }
  return Graphon(std::move(values));
}

SquareMatrix CellAverage(const SquareMatrix& a, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "approximant level must be >= 1");
  const std::size_t m = a.size();
  const auto w = AveragingWeights(k, m);
  // tmp = W A, then out = tmp W^T.
  std::vector<double> tmp(k * m, 0.0);
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t b = 0; b < m; ++b) {
      if (w[p][b] == 0.0) continue;
      for (std::size_t c = 0; c < m; ++c) tmp[p * m + c] += w[p][b] * a(b, c);
    }
  }
  SquareMatrix out(k);
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t q = 0; q < k; ++q) {
      double sum = 0.0;
      for (std::size_t c = 0; c < m; ++c) sum += tmp[p * m + c] * w[q][c];
      out(p, q) = sum;
    }
  }
  return out;
}

Graphon LevelKApproximant(const Graphon& h, std::size_t k) {
  SquareMatrix avg = CellAverage(h.values(), k);
  // Symmetrise and clamp away rounding so the checked constructor accepts it.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const double v = std::clamp(0.5 * (avg(i, j) + avg(j, i)), 0.0, 1.0);
      avg(i, j) = v;
      avg(j, i) = v;
    }
  }
  return Graphon(std::move(avg));
}

Graphon Refine(const Graphon& h, std::size_t resolution) {
  const std::size_t m = h.m();
  if (resolution == 0 || resolution % m != 0) {
    throw Error(ErrorCode::kResolutionMismatch,
                "refinement resolution " + std::to_string(resolution) +
                    " is not a multiple of " + std::to_string(m));
  }
  const std::size_t f = resolution / m;
  SquareMatrix values(resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; j < resolution; ++j) values(i, j) = h(i / f, j / f);
  }
  return Graphon(std::move(values));
}

std::pair<Graphon, Graphon> CommonRefinement(const Graphon& h1, const Graphon& h2) {
  const std::size_t l = std::lcm(h1.m(), h2.m());
  return {Refine(h1, l), Refine(h2, l)};
}

SquareMatrix EvaluateAtGridPoints(const Graphon& h, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "grid size must be >= 1");
  const std::size_t m = h.m();
  std::vector<std::size_t> cell(n);
  // Cell of the point u/n is floor(u m / n), computed in integers.
  for (std::size_t u = 0; u < n; ++u) cell[u] = (u * m) / n;
  SquareMatrix out(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) out(u, v) = h(cell[u], cell[v]);
  }
  return out;
}

SquareMatrix ApplyPermutation(const SquareMatrix& a, const GridPermutation& phi) {
  if (phi.m() != a.size()) {
    throw Error(ErrorCode::kResolutionMismatch, "permutation size differs from resolution");
  }
  SquareMatrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) out(i, j) = a(phi[i], phi[j]);
  }
  return out;
}

Graphon ApplyPermutation(const Graphon& h, const GridPermutation& phi) {
  return Graphon(ApplyPermutation(h.values(), phi));
}

}  // namespace graphon_ldp
