// matrix.hpp — minimal dense row-major matrices for small lattice problems.
//
// Sites number in the tens here, so there is no blocking, no views, no
// expression templates: just a flat vector with bounds-checked construction
// and a handful of free functions the rest of the code actually uses.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace blochsim {

using cplx = std::complex<double>;

template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), d_(rows * cols, fill) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  T& operator()(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return d_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return d_.empty(); }

  bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> d_;
};

using RealMat = Mat<double>;
using ComplexMat = Mat<cplx>;

template <typename T>
Mat<T> multiply(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
  Mat<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <typename T>
Mat<T> transpose(const Mat<T>& m) {
  Mat<T> t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

inline ComplexMat adjoint(const ComplexMat& m) {
  ComplexMat a(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(j, i) = std::conj(m(i, j));
  return a;
}

inline ComplexMat to_complex(const RealMat& m) {
  ComplexMat c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j);
  return c;
}

// Largest absolute entry; all tolerance checks in this codebase use the
// elementwise max norm.
template <typename T>
double max_abs(const Mat<T>& m) {
  double mx = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mx = std::max(mx, std::abs(m(i, j)));
  return mx;
}

template <typename T>
double max_abs_diff(const Mat<T>& a, const Mat<T>& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double mx = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      mx = std::max(mx, static_cast<double>(std::abs(a(i, j) - b(i, j))));
  return mx;
}

// max |U†U − I|: zero for a perfect unitary.
inline double unitarity_defect(const ComplexMat& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("unitarity_defect: matrix not square");
  const std::size_t n = u.rows();
  double mx = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += std::conj(u(k, i)) * u(k, j);
      if (i == j) s -= 1.0;
      mx = std::max(mx, std::abs(s));
    }
  return mx;
}

}  // namespace blochsim
