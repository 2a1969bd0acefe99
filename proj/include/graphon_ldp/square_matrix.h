#ifndef GRAPHON_LDP_SQUARE_MATRIX_H_
#define GRAPHON_LDP_SQUARE_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace graphon_ldp {

// Dense row-major m x m matrix of doubles. Used for graphon values, signed
// kernel differences and per-cell decompositions.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t size, double fill = 0.0)
      : size_(size), data_(size * size, fill) {}

  std::size_t size() const { return size_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * size_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * size_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * size_, size_};
  }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<double> data_;
};

// y = A x
void MatVec(const SquareMatrix& a, std::span<const double> x, std::span<double> y);

SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b);
SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b);
SquareMatrix operator*(double s, const SquareMatrix& a);

// Grid norms of the step function with these cell values on [0,1]^2.
double L1Norm(const SquareMatrix& a);
double L2Norm(const SquareMatrix& a);
double MeanValue(const SquareMatrix& a);

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_SQUARE_MATRIX_H_
