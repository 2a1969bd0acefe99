#ifndef GRAPHON_LDP_GRAPHON_H_
#define GRAPHON_LDP_GRAPHON_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "graphon_ldp/square_matrix.h"

namespace graphon_ldp {

// Symmetric step function on the uniform m x m grid of [0,1]^2 with values in
// [0,1]. Cell (i, j) (0-based) is [i/m, (i+1)/m) x [j/m, (j+1)/m).
//
// Construction validates exact symmetry and the [0,1] range; a Graphon that
// exists is always valid.
class Graphon {
 public:
  explicit Graphon(SquareMatrix values);

  static Graphon Constant(std::size_t m, double p);

  std::size_t m() const { return values_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const SquareMatrix& values() const { return values_; }

  // Value at the point (x, y) of the unit square; the right/top edge belongs
  // to the last cell.
  double At(double x, double y) const;

  bool operator==(const Graphon&) const = default;

 private:
  SquareMatrix values_;
};

// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  explicit Graph(std::size_t n);

  std::size_t n() const { return n_; }
  bool HasEdge(std::size_t u, std::size_t v) const { return adj_[u * n_ + v] != 0; }
  void AddEdge(std::size_t u, std::size_t v);
  std::size_t EdgeCount() const;
  std::vector<std::pair<std::size_t, std::size_t>> Edges() const;

  bool operator==(const Graph&) const = default;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> adj_;
};

// Bijection of {0..m-1}; acts on graphons by relabelling grid blocks.
class GridPermutation {
 public:
  explicit GridPermutation(std::vector<std::size_t> perm);
  static GridPermutation Identity(std::size_t m);

  std::size_t m() const { return perm_.size(); }
  std::size_t operator[](std::size_t i) const { return perm_[i]; }
  std::span<const std::size_t> map() const { return perm_; }
  GridPermutation Inverse() const;

  bool operator==(const GridPermutation&) const = default;

 private:
  std::vector<std::size_t> perm_;
};

Graphon EmpiricalGraphon(const Graph& g);

// Exact cell averages of h over the k x k grid (overlap-area weighted).
Graphon LevelKApproximant(const Graphon& h, std::size_t k);
// Same averaging for a signed field.
SquareMatrix CellAverage(const SquareMatrix& a, std::size_t k);

// Re-express h on a grid of resolution `resolution`, which must be a multiple
// of h.m(). Exact for step functions.
Graphon Refine(const Graphon& h, std::size_t resolution);

// Both graphons refined to lcm(m1, m2).
std::pair<Graphon, Graphon> CommonRefinement(const Graphon& h1, const Graphon& h2);

// values'[u][v] = h(u/n, v/n): the lower-left grid points used by the sampler.
SquareMatrix EvaluateAtGridPoints(const Graphon& h, std::size_t n);

// values'[i][j] = values[phi(i)][phi(j)].
Graphon ApplyPermutation(const Graphon& h, const GridPermutation& phi);
SquareMatrix ApplyPermutation(const SquareMatrix& a, const GridPermutation& phi);

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_GRAPHON_H_
