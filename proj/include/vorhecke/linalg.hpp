#pragma once

#include <optional>
#include <utility>

#include "vorhecke/numeric.hpp"

namespace vh {

template <typename T>
class Mat {
 public:
  Mat() : r_(0), c_(0) {}
  Mat(size_t r, size_t c) : r_(r), c_(c), d_(r * c) {}
  Mat(size_t r, size_t c, std::vector<T> data) : r_(r), c_(c), d_(std::move(data)) {
    VH_CHECK(d_.size() == r_ * c_, "BadShape", "matrix data size mismatch");
  }

  static Mat identity(size_t n) {
    Mat m(n, n);
    for (size_t i = 0; i < n; i++) m(i, i) = 1;
    return m;
  }

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }

  T& operator()(size_t i, size_t j) { return d_[i * c_ + j]; }
  const T& operator()(size_t i, size_t j) const { return d_[i * c_ + j]; }

  bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && d_ == o.d_; }

  Mat transpose() const {
    Mat m(c_, r_);
    for (size_t i = 0; i < r_; i++)
      for (size_t j = 0; j < c_; j++) m(j, i) = (*this)(i, j);
    return m;
  }

  std::vector<T> row(size_t i) const {
    return std::vector<T>(d_.begin() + i * c_, d_.begin() + (i + 1) * c_);
  }
  std::vector<T> col(size_t j) const {
    std::vector<T> out(r_);
    for (size_t i = 0; i < r_; i++) out[i] = (*this)(i, j);
    return out;
  }

  void swap_rows(size_t i, size_t j) {
    if (i == j) return;
    for (size_t k = 0; k < c_; k++) std::swap((*this)(i, k), (*this)(j, k));
  }
  void swap_cols(size_t i, size_t j) {
    if (i == j) return;
    for (size_t k = 0; k < r_; k++) std::swap((*this)(k, i), (*this)(k, j));
  }

 private:
  size_t r_, c_;
  std::vector<T> d_;
};

using IMat = Mat<Int>;
using QMat = Mat<Rat>;

IMat mul(const IMat& a, const IMat& b);
QMat mul(const QMat& a, const QMat& b);
IVec mul(const IMat& a, const IVec& v);
QVec mul(const QMat& a, const QVec& v);

QMat to_qmat(const IMat& m);
// Clears denominators; fails if any entry is non-integral.
IMat to_imat(const QMat& m);

Int det(const IMat& m);
Rat det(const QMat& m);

// Exact rational inverse; throws SingularMatrix.
QMat inverse(const QMat& m);
// Inverse of a unimodular integer matrix (throws if |det| != 1).
IMat inverse_unimodular(const IMat& m);

size_t rank(const QMat& m);

// One solution of A x = b, or nullopt if inconsistent.
std::optional<QVec> solve(const QMat& a, const QVec& b);

// Rational right-kernel basis (columns of the result).
QMat kernel(const QMat& a);

// Saturated integer right-kernel basis, as rows of the result.
IMat integer_kernel(const IMat& m);

// Row-style Hermite normal form: H = U*M with U unimodular, pivot entries
// positive, entries above each pivot reduced into [0, pivot).
struct HnfResult {
  IMat h;
  IMat u;
};
HnfResult hnf(const IMat& m);

// Smith normal form: S = U*M*V diagonal, d1 | d2 | ..., di >= 0, U and V
// unimodular.  Pivots are chosen with minimal magnitude at each step to
// bound coefficient growth (see the pivoting note in snf()).
struct SnfResult {
  IMat s;
  IMat u;
  IMat v;
};
SnfResult snf(const IMat& m);

// Coefficients of x in the basis given by `rays` (columns).  Throws
// DependentRays if the rays are linearly dependent; returns nullopt
// (NotInSpan) if x is outside their span.
std::optional<QVec> solve_in_ray_basis(const std::vector<QVec>& rays, const QVec& x);

// Extends a saturated lattice basis (columns of b, n x r, rank r) to a
// det +/-1 matrix whose first r columns are b.
IMat extend_to_unimodular(const IMat& b);

// Characteristic polynomial of a square rational matrix, monic, returned as
// coefficient vector c[0] + c[1] x + ... + x^n (c.back() == 1).
std::vector<Rat> charpoly(const QMat& m);

}  // namespace vh
