#ifndef GRAPHON_LDP_FAMILIES_H_
#define GRAPHON_LDP_FAMILIES_H_

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "graphon_ldp/graphon.h"

namespace graphon_ldp {

// Cell averages of a continuous kernel f(x, y) using tensor Gauss-Legendre
// quadrature of order 5 on every cell (exact for polynomials of degree <= 9
// in each variable).
Graphon Discretize(const std::function<double(double, double)>& f, std::size_t m);

// r(x, y) = p.
Graphon ConstantFamily(std::size_t m, double p);

// r(x, y) = nu(x) nu(y) with nu(x) = sum_k coefficients[k] x^k.
Graphon RankOneFamily(std::size_t m, const std::vector<double>& coefficients);

// Parses "builtin:const:<p>" or "builtin:rank1:<c0>,<c1>,..." (the "builtin:"
// prefix is optional). Anything else is read as a graphon matrix file. The
// result is brought to resolution m with LevelKApproximant when a file has a
// different resolution.
Graphon ResolveReference(std::string_view spec, std::size_t m);

bool IsBuiltinSpec(std::string_view spec);

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_FAMILIES_H_
