#include "graphon_ldp/square_matrix.h"

#include <cmath>

#include "graphon_ldp/error.h"

namespace graphon_ldp {
namespace {

void RequireSameSize(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kResolutionMismatch,
                "matrix sizes differ: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
}

}  // namespace

void MatVec(const SquareMatrix& a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = a.row(i);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += row[j] * x[j];
    y[i] = sum;
  }
}

SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
  RequireSameSize(a, b);
  SquareMatrix out(a.size());
  for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
  RequireSameSize(a, b);
  SquareMatrix out(a.size());
  for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

SquareMatrix operator*(double s, const SquareMatrix& a) {
  SquareMatrix out(a.size());
  for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] = s * a.data()[i];
  return out;
}

double L1Norm(const SquareMatrix& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += std::abs(v);
  return a.size() == 0 ? 0.0 : sum / static_cast<double>(a.size() * a.size());
}

double L2Norm(const SquareMatrix& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += v * v;
  return a.size() == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(a.size() * a.size()));
}

double MeanValue(const SquareMatrix& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += v;
  return a.size() == 0 ? 0.0 : sum / static_cast<double>(a.size() * a.size());
}

}  // namespace graphon_ldp
