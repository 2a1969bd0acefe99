#include "graphon_ldp/io.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "graphon_ldp/error.h"

namespace graphon_ldp {
namespace {

constexpr double kSymmetryTolerance = 1e-12;

std::ifstream OpenForReading(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return in;
}

}  // namespace

Graphon ReadGraphon(std::istream& in) {
  long long m_raw = 0;
  if (!(in >> m_raw) || m_raw < 1) {
    throw Error(ErrorCode::kParse, "graphon file: first line must be a positive resolution");
  }
  const auto m = static_cast<std::size_t>(m_raw);
  SquareMatrix values(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(in >> values(i, j))) {
        throw Error(ErrorCode::kParse, "graphon file: expected " + std::to_string(m * m) +
                                           " values, row " + std::to_string(i + 1) +
                                           " is short");
      }
    }
  }
  std::string trailing;
  if (in >> trailing) throw Error(ErrorCode::kParse, "graphon file: trailing data");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (std::abs(values(i, j) - values(j, i)) > kSymmetryTolerance) {
        throw Error(ErrorCode::kParse, "graphon file: asymmetric at (" + std::to_string(i + 1) +
                                           "," + std::to_string(j + 1) + ")");
      }
      const double avg = 0.5 * (values(i, j) + values(j, i));
      values(i, j) = avg;
      values(j, i) = avg;
    }
  }
  try {
    return Graphon(std::move(values));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("graphon file: ") + e.what());
  }
}

Graphon ReadGraphonFile(const std::string& path) {
  auto in = OpenForReading(path);
  return ReadGraphon(in);
}

void WriteGraphon(std::ostream& out, const Graphon& h) {
  out << h.m() << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < h.m(); ++i) {
    for (std::size_t j = 0; j < h.m(); ++j) out << (j ? " " : "") << h(i, j);
    out << '\n';
  }
}

void WriteGraph(std::ostream& out, const Graph& g) {
  out << g.n() << '\n';
  for (const auto& [u, v] : g.Edges()) out << u + 1 << ' ' << v + 1 << '\n';
}

Graph ReadGraph(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n < 1) {
    throw Error(ErrorCode::kParse, "graph file: first line must be a positive vertex count");
  }
  Graph g(static_cast<std::size_t>(n));
  long long u = 0;
  while (in >> u) {
    long long v = 0;
    if (!(in >> v)) throw Error(ErrorCode::kParse, "graph file: dangling endpoint");
    if (u < 1 || v < 1 || u > n || v > n || u == v) {
      throw Error(ErrorCode::kParse, "graph file: bad edge " + std::to_string(u) + " " +
                                         std::to_string(v));
    }
    g.AddEdge(static_cast<std::size_t>(u - 1), static_cast<std::size_t>(v - 1));
  }
  if (!in.eof()) throw Error(ErrorCode::kParse, "graph file: non-numeric content");
  return g;
}

Graph ReadGraphFile(const std::string& path) {
  auto in = OpenForReading(path);
  return ReadGraph(in);
}

}  // namespace graphon_ldp
