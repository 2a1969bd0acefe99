#include "graphon_ldp/families.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "graphon_ldp/error.h"
#include "graphon_ldp/io.h"

namespace graphon_ldp {
namespace {

// 5-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 5> kNodes = {
    -0.906179845938663992797626878299, -0.538469310105683091036314420700, 0.0,
    0.538469310105683091036314420700, 0.906179845938663992797626878299};
constexpr std::array<double, 5> kWeights = {
    0.236926885056189087514264040720, 0.478628670499366468041291514836,
    0.568888888888888888888888888889, 0.478628670499366468041291514836,
    0.236926885056189087514264040720};

constexpr std::string_view kBuiltinPrefix = "builtin:";

double ParseDouble(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::kConfig,
                "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

std::string_view StripBuiltin(std::string_view spec) {
  if (spec.starts_with(kBuiltinPrefix)) spec.remove_prefix(kBuiltinPrefix.size());
  return spec;
}

}  // namespace

Graphon Discretize(const std::function<double(double, double)>& f, std::size_t m) {
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 1");
  const double width = 1.0 / static_cast<double>(m);
  std::vector<std::array<double, 5>> points(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double center = (static_cast<double>(i) + 0.5) * width;
    for (std::size_t q = 0; q < 5; ++q) points[i][q] = center + 0.5 * width * kNodes[q];
  }
  SquareMatrix values(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double sum = 0.0;
      for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t b = 0; b < 5; ++b) {
          sum += kWeights[a] * kWeights[b] * f(points[i][a], points[j][b]);
        }
      }
      // Weights sum to 2 per axis.
      const double v = std::clamp(0.25 * sum, 0.0, 1.0);
      values(i, j) = v;
      values(j, i) = v;
    }
  }
  return Graphon(std::move(values));
}

Graphon ConstantFamily(std::size_t m, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kDomain, "constant graphon value must be in [0,1]");
  }
  return Graphon::Constant(m, p);
}

Graphon RankOneFamily(std::size_t m, const std::vector<double>& coefficients) {
  if (coefficients.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "rank-one family needs at least one coefficient");
  }
  auto nu = [&](double x) {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  for (int i = 0; i <= 1000; ++i) {
    const double v = nu(i / 1000.0);
    if (v < -1e-12 || v > 1.0 + 1e-12) {
      throw Error(ErrorCode::kDomain, "rank-one profile nu must map [0,1] into [0,1]");
    }
  }
  return Discretize([&](double x, double y) { return nu(x) * nu(y); }, m);
}

bool IsBuiltinSpec(std::string_view spec) {
  spec = StripBuiltin(spec);
  return spec.starts_with("const:") || spec.starts_with("rank1:");
}

Graphon ResolveReference(std::string_view spec, std::size_t m) {
  const std::string_view body = StripBuiltin(spec);
  if (body.starts_with("const:")) {
    return ConstantFamily(m, ParseDouble(body.substr(6), "constant value"));
  }
  if (body.starts_with("rank1:")) {
    std::vector<double> coefficients;
    std::string_view rest = body.substr(6);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      coefficients.push_back(ParseDouble(rest.substr(0, comma), "polynomial coefficient"));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return RankOneFamily(m, coefficients);
  }
  if (spec.starts_with(kBuiltinPrefix)) {
    throw Error(ErrorCode::kConfig, "unknown builtin family '" + std::string(spec) + "'");
  }
  Graphon h = ReadGraphonFile(std::string(spec));
  if (h.m() != m) h = LevelKApproximant(h, m);
  return h;
}

}  // namespace graphon_ldp
