#include "affract/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace affract {

Mat Mat::from_rows(const std::vector<RatVec>& rows) {
  if (rows.empty()) {
    return {};
  }
  Mat m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) {
      throw std::invalid_argument("ragged matrix rows");
    }
    for (std::size_t c = 0; c < m.cols_; ++c) {
      m(r, c) = rows[r][c];
    }
  }
  return m;
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1;
  }
  return m;
}

Mat Mat::operator*(const Mat& rhs) const {
  if (cols_ != rhs.rows_) {
    throw std::invalid_argument("matrix size mismatch in product");
  }
  Mat out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& aik = (*this)(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        out(i, j) += aik * rhs(k, j);
      }
    }
  }
  return out;
}

Mat Mat::pow(unsigned long long e) const {
  if (rows_ != cols_) {
    throw std::invalid_argument("pow of non-square matrix");
  }
  Mat result = identity(rows_);
  Mat base = *this;
  while (e > 0) {
    if (e & 1ULL) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

Rational Mat::det() const {
  if (rows_ != cols_) {
    throw std::invalid_argument("determinant of non-square matrix");
  }
  Mat w = *this;
  const std::size_t n = rows_;
  Rational result = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && w(pivot, col) == 0) ++pivot;
    if (pivot == n) {
      return 0;
    }
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) {
        std::swap(w(pivot, c), w(col, c));
      }
      result = -result;
    }
    result *= w(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (w(r, col) == 0) continue;
      Rational f = w(r, col) / w(col, col);
      for (std::size_t c = col; c < n; ++c) {
        w(r, c) -= f * w(col, c);
      }
    }
  }
  return result;
}

std::size_t rank(Mat m) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
    std::size_t pivot = r;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    for (std::size_t c = col; c < m.cols(); ++c) {
      std::swap(m(pivot, c), m(r, c));
    }
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, col) == 0) continue;
      Rational f = m(i, col) / m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) {
        m(i, c) -= f * m(r, c);
      }
    }
    ++r;
  }
  return r;
}

RatVec solve(Mat a, RatVec b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) {
    throw std::invalid_argument("solve: size mismatch");
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) {
      throw std::domain_error("solve: singular matrix");
    }
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) == 0) continue;
      Rational f = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  RatVec x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

}  // namespace affract
