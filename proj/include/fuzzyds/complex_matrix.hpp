#pragma once

#include <complex>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzyds {

using cdouble = std::complex<double>;

// Dense square complex matrix, row-major. Row/column index i corresponds to
// the basis label i + label_offset (e.g. offset -M maps indices 0..2M to
// labels -M..M).
class ComplexMatrix {
public:
  explicit ComplexMatrix(int dim, int label_offset = 0)
      : dim_(dim), label_offset_(label_offset), a_(std::size_t(dim) * dim) {
    if (dim < 1)
      throw std::invalid_argument("ComplexMatrix: dim must be >= 1");
  }

  static ComplexMatrix identity(int dim, int label_offset = 0) {
    ComplexMatrix m(dim, label_offset);
    for (int i = 0; i < dim; ++i)
      m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> d, int label_offset = 0) {
    ComplexMatrix m(int(d.size()), label_offset);
    for (int i = 0; i < m.dim(); ++i)
      m(i, i) = d[std::size_t(i)];
    return m;
  }

  int dim() const { return dim_; }
  int label_offset() const { return label_offset_; }
  int label_of(int index) const { return index + label_offset_; }
  int index_of(int label) const { return label - label_offset_; }

  cdouble &operator()(int i, int j) { return a_[std::size_t(i) * dim_ + j]; }
  const cdouble &operator()(int i, int j) const {
    return a_[std::size_t(i) * dim_ + j];
  }

  cdouble &at(int i, int j) {
    check_index(i, j);
    return (*this)(i, j);
  }
  const cdouble &at(int i, int j) const {
    check_index(i, j);
    return (*this)(i, j);
  }

  std::span<const cdouble> entries() const { return a_; }
  std::span<cdouble> entries() { return a_; }

  ComplexMatrix &operator+=(const ComplexMatrix &b) {
    check_same_shape(*this, b, "operator+=");
    for (std::size_t k = 0; k < a_.size(); ++k)
      a_[k] += b.a_[k];
    return *this;
  }
  ComplexMatrix &operator-=(const ComplexMatrix &b) {
    check_same_shape(*this, b, "operator-=");
    for (std::size_t k = 0; k < a_.size(); ++k)
      a_[k] -= b.a_[k];
    return *this;
  }
  ComplexMatrix &operator*=(cdouble s) {
    for (auto &z : a_)
      z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(cdouble s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, cdouble s) { return a *= s; }

  friend bool operator==(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a.dim_ == b.dim_ && a.label_offset_ == b.label_offset_ &&
           a.a_ == b.a_;
  }

  static void check_same_shape(const ComplexMatrix &a, const ComplexMatrix &b,
                               const char *where) {
    if (a.dim_ != b.dim_ || a.label_offset_ != b.label_offset_)
      throw std::invalid_argument(std::string(where) +
                                  ": dim/label_offset mismatch");
  }

private:
  void check_index(int i, int j) const {
    if (i < 0 || i >= dim_ || j < 0 || j >= dim_)
      throw std::out_of_range("ComplexMatrix: index out of range");
  }

  int dim_;
  int label_offset_;
  std::vector<cdouble> a_;
};

inline ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix::check_same_shape(a, b, "matmul");
  const int n = a.dim();
  ComplexMatrix c(n, a.label_offset());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const cdouble aik = a(i, k);
      if (aik == cdouble{})
        continue;
      for (int j = 0; j < n; ++j)
        c(i, j) += aik * b(k, j);
    }
  return c;
}

inline ComplexMatrix adjoint(const ComplexMatrix &a) {
  const int n = a.dim();
  ComplexMatrix c(n, a.label_offset());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      c(i, j) = std::conj(a(j, i));
  return c;
}

inline ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) {
  return matmul(a, b) - matmul(b, a);
}

inline double frobenius_norm(const ComplexMatrix &a) {
  double s = 0.0;
  for (const auto &z : a.entries())
    s += std::norm(z);
  return std::sqrt(s);
}

inline double max_abs(const ComplexMatrix &a) {
  double s = 0.0;
  for (const auto &z : a.entries())
    s = std::max(s, std::abs(z));
  return s;
}

inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix::check_same_shape(a, b, "max_abs_diff");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      s = std::max(s, std::abs(a(i, j) - b(i, j)));
  return s;
}

// Defect from self-adjointness, max |A - A^dagger| entrywise.
inline double hermiticity_defect(const ComplexMatrix &a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j <= i; ++j)
      s = std::max(s, std::abs(a(i, j) - std::conj(a(j, i))));
  return s;
}

// Frobenius norm of the central (dim - 2*margin)^2 block. The margin rows and
// columns at each end carry truncation-edge artifacts and are excluded.
inline double interior_norm(const ComplexMatrix &a, int margin) {
  if (margin < 0)
    throw std::invalid_argument("interior_norm: margin must be >= 0");
  if (2 * margin >= a.dim())
    throw std::invalid_argument("interior_norm: margin too large for dim");
  double s = 0.0;
  for (int i = margin; i < a.dim() - margin; ++i)
    for (int j = margin; j < a.dim() - margin; ++j)
      s += std::norm(a(i, j));
  return std::sqrt(s);
}

} // namespace fuzzyds
