#include "vorhecke/linalg.hpp"

#include <algorithm>

namespace vh {

IMat mul(const IMat& a, const IMat& b) {
  VH_CHECK(a.cols() == b.rows(), "BadShape", "matrix product shape mismatch");
  IMat out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); i++)
    for (size_t k = 0; k < a.cols(); k++) {
      const Int& aik = a(i, k);
      if (aik == 0) continue;
      for (size_t j = 0; j < b.cols(); j++) out(i, j) += aik * b(k, j);
    }
  return out;
}

QMat mul(const QMat& a, const QMat& b) {
  VH_CHECK(a.cols() == b.rows(), "BadShape", "matrix product shape mismatch");
  QMat out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); i++)
    for (size_t k = 0; k < a.cols(); k++) {
      const Rat& aik = a(i, k);
      if (aik == 0) continue;
      for (size_t j = 0; j < b.cols(); j++) out(i, j) += aik * b(k, j);
    }
  return out;
}

IVec mul(const IMat& a, const IVec& v) {
  VH_CHECK(a.cols() == v.size(), "BadShape", "matrix-vector shape mismatch");
  IVec out(a.rows());
  for (size_t i = 0; i < a.rows(); i++)
    for (size_t j = 0; j < a.cols(); j++) out[i] += a(i, j) * v[j];
  return out;
}

QVec mul(const QMat& a, const QVec& v) {
  VH_CHECK(a.cols() == v.size(), "BadShape", "matrix-vector shape mismatch");
  QVec out(a.rows());
  for (size_t i = 0; i < a.rows(); i++)
    for (size_t j = 0; j < a.cols(); j++) out[i] += a(i, j) * v[j];
  return out;
}

QMat to_qmat(const IMat& m) {
  QMat out(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); i++)
    for (size_t j = 0; j < m.cols(); j++) out(i, j) = Rat(m(i, j));
  return out;
}

IMat to_imat(const QMat& m) {
  IMat out(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); i++)
    for (size_t j = 0; j < m.cols(); j++) {
      VH_CHECK(m(i, j).get_den() == 1, "NotIntegral", "to_imat on non-integer entry");
      out(i, j) = m(i, j).get_num();
    }
  return out;
}

// Gauss elimination into row echelon form, tracking the permutation sign.
// Returns the pivot columns.  Operates in place.
static std::vector<size_t> echelonize(QMat& a, int* sign = nullptr) {
  std::vector<size_t> pivots;
  if (sign) *sign = 1;
  size_t pr = 0;
  for (size_t c = 0; c < a.cols() && pr < a.rows(); c++) {
    size_t p = pr;
    while (p < a.rows() && a(p, c) == 0) p++;
    if (p == a.rows()) continue;
    if (p != pr) {
      a.swap_rows(p, pr);
      if (sign) *sign = -*sign;
    }
    for (size_t i = pr + 1; i < a.rows(); i++) {
      if (a(i, c) == 0) continue;
      Rat f = a(i, c) / a(pr, c);
      for (size_t j = c; j < a.cols(); j++) a(i, j) -= f * a(pr, j);
    }
    pivots.push_back(c);
    pr++;
  }
  return pivots;
}

Rat det(const QMat& m) {
  VH_CHECK(m.rows() == m.cols(), "BadShape", "det of non-square matrix");
  QMat a = m;
  int sign;
  echelonize(a, &sign);
  Rat d = sign;
  for (size_t i = 0; i < a.rows(); i++) d *= a(i, i);
  return d;
}

Int det(const IMat& m) {
  Rat d = det(to_qmat(m));
  return d.get_num();
}

size_t rank(const QMat& m) {
  QMat a = m;
  return echelonize(a).size();
}

std::optional<QVec> solve(const QMat& a, const QVec& b) {
  VH_CHECK(a.rows() == b.size(), "BadShape", "solve shape mismatch");
  QMat aug(a.rows(), a.cols() + 1);
  for (size_t i = 0; i < a.rows(); i++) {
    for (size_t j = 0; j < a.cols(); j++) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  std::vector<size_t> piv = echelonize(aug);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;  // inconsistent
  QVec x(a.cols(), Rat(0));
  for (size_t k = piv.size(); k-- > 0;) {
    size_t c = piv[k];
    Rat s = aug(k, a.cols());
    for (size_t j = c + 1; j < a.cols(); j++) s -= aug(k, j) * x[j];
    x[c] = s / aug(k, c);
  }
  return x;
}

QMat kernel(const QMat& a) {
  QMat e = a;
  std::vector<size_t> piv = echelonize(e);
  std::vector<bool> is_piv(a.cols(), false);
  for (size_t c : piv) is_piv[c] = true;
  std::vector<size_t> free_cols;
  for (size_t c = 0; c < a.cols(); c++)
    if (!is_piv[c]) free_cols.push_back(c);
  QMat out(a.cols(), free_cols.size());
  for (size_t fi = 0; fi < free_cols.size(); fi++) {
    size_t f = free_cols[fi];
    out(f, fi) = 1;
    for (size_t k = piv.size(); k-- > 0;) {
      size_t c = piv[k];
      if (c > f) continue;
      Rat s = -e(k, f);
      for (size_t j = c + 1; j < a.cols(); j++)
        if (j != f) s -= e(k, j) * out(j, fi);
      out(c, fi) = s / e(k, c);
    }
  }
  return out;
}

QMat inverse(const QMat& m) {
  VH_CHECK(m.rows() == m.cols(), "BadShape", "inverse of non-square matrix");
  size_t n = m.rows();
  QMat aug(n, 2 * n);
  for (size_t i = 0; i < n; i++) {
    for (size_t j = 0; j < n; j++) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  for (size_t c = 0; c < n; c++) {
    size_t p = c;
    while (p < n && aug(p, c) == 0) p++;
    VH_CHECK(p < n, "SingularMatrix", "inverse of singular matrix");
    aug.swap_rows(p, c);
    Rat d = aug(c, c);
    for (size_t j = 0; j < 2 * n; j++) aug(c, j) /= d;
    for (size_t i = 0; i < n; i++) {
      if (i == c || aug(i, c) == 0) continue;
      Rat f = aug(i, c);
      for (size_t j = 0; j < 2 * n; j++) aug(i, j) -= f * aug(c, j);
    }
  }
  QMat out(n, n);
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) out(i, j) = aug(i, n + j);
  return out;
}

IMat inverse_unimodular(const IMat& m) {
  Int d = det(m);
  VH_CHECK(d == 1 || d == -1, "NotUnimodular", "inverse_unimodular needs |det| = 1");
  return to_imat(inverse(to_qmat(m)));
}

HnfResult hnf(const IMat& m) {
  IMat h = m;
  IMat u = IMat::identity(m.rows());
  size_t pr = 0;
  std::vector<std::pair<size_t, size_t>> pivots;  // (row, col)
  for (size_t c = 0; c < h.cols() && pr < h.rows(); c++) {
    // clear the column below pr by repeated smallest-pivot reduction
    for (;;) {
      size_t best = h.rows();
      for (size_t i = pr; i < h.rows(); i++) {
        if (h(i, c) == 0) continue;
        if (best == h.rows() || cmp(abs(h(i, c)), abs(h(best, c))) < 0) best = i;
      }
      if (best == h.rows()) break;  // column all zero from pr down
      h.swap_rows(pr, best);
      u.swap_rows(pr, best);
      bool clean = true;
      for (size_t i = pr + 1; i < h.rows(); i++) {
        if (h(i, c) == 0) continue;
        Int q = h(i, c) / h(pr, c);  // truncated division is fine here
        if (q != 0) {
          for (size_t j = 0; j < h.cols(); j++) h(i, j) -= q * h(pr, j);
          for (size_t j = 0; j < u.cols(); j++) u(i, j) -= q * u(pr, j);
        }
        if (h(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (pr < h.rows() && h(pr, c) != 0) {
      if (h(pr, c) < 0) {
        for (size_t j = 0; j < h.cols(); j++) h(pr, j) = -h(pr, j);
        for (size_t j = 0; j < u.cols(); j++) u(pr, j) = -u(pr, j);
      }
      pivots.push_back({pr, c});
      pr++;
    }
  }
  // reduce entries above each pivot into [0, pivot)
  for (auto [r, c] : pivots) {
    for (size_t i = 0; i < r; i++) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
      if (q != 0) {
        for (size_t j = 0; j < h.cols(); j++) h(i, j) -= q * h(r, j);
        for (size_t j = 0; j < u.cols(); j++) u(i, j) -= q * u(r, j);
      }
    }
  }
  return {h, u};
}

IMat integer_kernel(const IMat& m) {
  // Rows of U mapping to zero rows of the HNF of m^t form a saturated basis
  // of the right kernel.
  HnfResult r = hnf(m.transpose());
  std::vector<size_t> zero_rows;
  for (size_t i = 0; i < r.h.rows(); i++) {
    bool z = true;
    for (size_t j = 0; j < r.h.cols(); j++)
      if (r.h(i, j) != 0) {
        z = false;
        break;
      }
    if (z) zero_rows.push_back(i);
  }
  IMat out(zero_rows.size(), m.cols());
  for (size_t k = 0; k < zero_rows.size(); k++)
    for (size_t j = 0; j < m.cols(); j++) out(k, j) = r.u(zero_rows[k], j);
  return out;
}

// Pivoting note: at each step we bring the minimal-magnitude nonzero entry
// of the remaining submatrix to the pivot position before eliminating.  On
// the few-thousand-cell complexes we build, this keeps intermediate entries
// small (empirically within a couple of words); no modular tricks needed.
SnfResult snf(const IMat& m) {
  IMat s = m;
  IMat u = IMat::identity(m.rows());
  IMat v = IMat::identity(m.cols());
  size_t n = std::min(s.rows(), s.cols());

  for (size_t t = 0; t < n; t++) {
    // locate minimal-magnitude nonzero entry in the submatrix at (t,t)
    size_t pi = s.rows(), pj = s.cols();
    for (size_t i = t; i < s.rows(); i++)
      for (size_t j = t; j < s.cols(); j++) {
        if (s(i, j) == 0) continue;
        if (pi == s.rows() || cmp(abs(s(i, j)), abs(s(pi, pj))) < 0) {
          pi = i;
          pj = j;
        }
      }
    if (pi == s.rows()) break;  // submatrix is zero
    s.swap_rows(t, pi);
    u.swap_rows(t, pi);
    s.swap_cols(t, pj);
    v.swap_cols(t, pj);

    for (;;) {
      bool again = false;
      for (size_t i = t + 1; i < s.rows(); i++) {
        if (s(i, t) == 0) continue;
        Int q = s(i, t) / s(t, t);
        for (size_t j = 0; j < s.cols(); j++) s(i, j) -= q * s(t, j);
        for (size_t j = 0; j < u.cols(); j++) u(i, j) -= q * u(t, j);
        if (s(i, t) != 0) {
          // remainder became the smaller pivot
          s.swap_rows(t, i);
          u.swap_rows(t, i);
          again = true;
        }
      }
      for (size_t j = t + 1; j < s.cols(); j++) {
        if (s(t, j) == 0) continue;
        Int q = s(t, j) / s(t, t);
        for (size_t i = 0; i < s.rows(); i++) s(i, j) -= q * s(i, t);
        for (size_t i = 0; i < v.rows(); i++) v(i, j) -= q * v(i, t);
        if (s(t, j) != 0) {
          s.swap_cols(t, j);
          v.swap_cols(t, j);
          again = true;
        }
      }
      if (again) continue;
      // row and column are clear; enforce divisibility of the remaining block
      bool fixed = true;
      for (size_t i = t + 1; i < s.rows() && fixed; i++)
        for (size_t j = t + 1; j < s.cols() && fixed; j++) {
          if (s(i, j) % s(t, t) != 0) {
            // add row i to row t to pull the offending entry into play
            for (size_t k = 0; k < s.cols(); k++) s(t, k) += s(i, k);
            for (size_t k = 0; k < u.cols(); k++) u(t, k) += u(i, k);
            fixed = false;
          }
        }
      if (fixed) break;
    }
    if (s(t, t) < 0) {
      for (size_t j = 0; j < s.cols(); j++) s(t, j) = -s(t, j);
      for (size_t j = 0; j < u.cols(); j++) u(t, j) = -u(t, j);
    }
  }
  return {s, u, v};
}

std::optional<QVec> solve_in_ray_basis(const std::vector<QVec>& rays, const QVec& x) {
  VH_CHECK(!rays.empty(), "DependentRays", "empty ray list");
  size_t dim = x.size();
  QMat a(dim, rays.size());
  for (size_t j = 0; j < rays.size(); j++) {
    VH_CHECK(rays[j].size() == dim, "BadShape", "ray dimension mismatch");
    for (size_t i = 0; i < dim; i++) a(i, j) = rays[j][i];
  }
  VH_CHECK(rank(a) == rays.size(), "DependentRays", "rays are linearly dependent");
  return solve(a, x);
}

IMat extend_to_unimodular(const IMat& b) {
  size_t n = b.rows(), r = b.cols();
  SnfResult f = snf(b);
  for (size_t i = 0; i < r; i++)
    VH_CHECK(f.s(i, i) == 1, "NotSaturated", "basis does not span a saturated sublattice");
  // b = U^-1 [I;0] V^-1, so the first r columns of U^-1 are b*V; the last
  // n-r columns of U^-1 complete b to a unimodular matrix.
  IMat uinv = inverse_unimodular(f.u);
  IMat out(n, n);
  for (size_t i = 0; i < n; i++) {
    for (size_t j = 0; j < r; j++) out(i, j) = b(i, j);
    for (size_t j = r; j < n; j++) out(i, j) = uinv(i, j);
  }
  Int d = det(out);
  VH_CHECK(d == 1 || d == -1, "InternalError", "basis extension failed");
  return out;
}

std::vector<Rat> charpoly(const QMat& m) {
  // Faddeev-LeVerrier
  VH_CHECK(m.rows() == m.cols(), "BadShape", "charpoly of non-square matrix");
  size_t n = m.rows();
  std::vector<Rat> c(n + 1, Rat(0));
  c[n] = 1;
  QMat mk = QMat::identity(n);  // M_1
  for (size_t k = 1; k <= n; k++) {
    QMat am = mul(m, mk);
    Rat tr = 0;
    for (size_t i = 0; i < n; i++) tr += am(i, i);
    c[n - k] = -tr / Rat(static_cast<long>(k));
    if (k < n) {
      mk = am;
      for (size_t i = 0; i < n; i++) mk(i, i) += c[n - k];
    }
  }
  return c;
}

}  // namespace vh
