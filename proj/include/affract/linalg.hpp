#pragma once

#include <cstddef>
#include <vector>

#include "affract/rational.hpp"

namespace affract {

using RatVec = std::vector<Rational>;

/// Dense rational matrix, row-major, 0-based. Sized for the (n+1)x(n+1)
/// transition matrices of small n; nothing here is tuned for large systems.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  /// Build from nested initializer data (rows of equal length).
  static Mat from_rows(const std::vector<RatVec>& rows);
  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  bool operator==(const Mat&) const = default;

  Mat operator*(const Mat& rhs) const;

  /// Nonnegative integer power (square matrices), binary exponentiation.
  Mat pow(unsigned long long e) const;

  Rational det() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> a_;
};

/// Rank of an arbitrary rational matrix by exact elimination.
std::size_t rank(Mat m);

/// Solve a.x = b for square nonsingular a; throws std::domain_error if
/// singular.
RatVec solve(Mat a, RatVec b);

}  // namespace affract
