#include "vorhecke/hecke.hpp"

#include <omp.h>

#include <algorithm>

namespace vh {

namespace {
bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; d++)
    if (p % d == 0) return false;
  return true;
}

// gamma = a b^{-1} lies in Gamma_0(N)?
bool quotient_in_gamma0(const IMat& a, const IMat& b, const ArithmeticGroup& grp) {
  QMat q = mul(to_qmat(a), inverse(to_qmat(b)));
  IMat g(q.rows(), q.cols());
  for (size_t i = 0; i < q.rows(); i++)
    for (size_t j = 0; j < q.cols(); j++) {
      if (q(i, j).get_den() != 1) return false;
      g(i, j) = q(i, j).get_num();
    }
  return gamma0_membership(g, grp);
}
}  // namespace

HeckeOperator coset_decomposition(const ArithmeticGroup& grp, long p) {
  VH_CHECK(is_prime(p), "UnsupportedOperator", "determinant must be a prime");
  VH_CHECK(grp.level % p != 0, "UnsupportedOperator", "p must not divide the level");
  size_t n = grp.n;

  // HNF classes with determinant p: diagonal (1,...,p,...,1) with the
  // column above the pivot ranging over [0, p)
  std::vector<IMat> cands;
  for (size_t j = 0; j < n; j++) {
    size_t above = j;  // entries H(i, j), i < j
    std::vector<long> digits(above, 0);
    for (;;) {
      IMat h = IMat::identity(n);
      h(j, j) = p;
      for (size_t i = 0; i < above; i++) h(i, j) = digits[i];
      cands.push_back(h);
      size_t k = 0;
      while (k < above && ++digits[k] == p) digits[k++] = 0;
      if (k == above) break;
      if (above == 0) break;
    }
  }

  HeckeOperator t;
  t.grp = grp;
  t.p = p;
  for (const auto& h : cands) {
    // elementary divisors must be (1,...,1,p); automatic for prime p with
    // content 1, asserted anyway
    SnfResult s = snf(h);
    for (size_t i = 0; i + 1 < n; i++)
      VH_CHECK(s.s(i, i) == 1, "InternalError", "coset rep outside the double coset");
    VH_CHECK(s.s(n - 1, n - 1) == p, "InternalError", "coset rep outside the double coset");
    bool dup = false;
    for (const auto& have : t.cosets)
      if (quotient_in_gamma0(h, have, grp)) {
        dup = true;
        break;
      }
    if (!dup) t.cosets.push_back(h);
  }
  // |S| = p + 1 for n = 2 and p^2 + p + 1 for n = 3 when p is coprime to N
  size_t expect = n == 2 ? p + 1 : p * p + p + 1;
  VH_CHECK(t.cosets.size() == expect, "InternalError", "unexpected coset count");
  return t;
}

HeckeOperator identity_operator(const ArithmeticGroup& grp) {
  HeckeOperator t;
  t.grp = grp;
  t.p = 1;
  t.cosets.push_back(IMat::identity(grp.n));
  return t;
}

std::optional<size_t> coset_of(const HeckeOperator& t, const IMat& m) {
  std::optional<size_t> found;
  for (size_t i = 0; i < t.cosets.size(); i++) {
    if (quotient_in_gamma0(m, t.cosets[i], t.grp)) {
      VH_CHECK(!found, "InternalError", "matrix lies in two cosets");
      found = i;
    }
  }
  return found;
}

Chain hecke_image(const HeckeOperator& t, const Chain& xi) {
  Chain out(xi.degree());
  for (const auto& [tup, c] : xi.terms()) {
    for (const auto& s : t.cosets) {
      QMat sq = to_qmat(s);
      Tuple img;
      img.reserve(tup.size());
      for (const auto& x : tup) img.push_back(group_action(sq, x));
      out.add_term(std::move(img), c);
    }
  }
  return out;
}

Chain hecke_image_parallel(const HeckeOperator& t, const Chain& xi) {
  // embarrassingly parallel over (term, coset) pairs; merged by commutative
  // addition into the ordered term map, so the result is deterministic
  std::vector<std::pair<Tuple, Int>> terms(xi.terms().begin(), xi.terms().end());
  size_t total = terms.size() * t.cosets.size();
  int threads = omp_get_max_threads();
  std::vector<Chain> partial(threads, Chain(xi.degree()));
#pragma omp parallel for schedule(static)
  for (size_t w = 0; w < total; w++) {
    size_t ti = w / t.cosets.size();
    size_t si = w % t.cosets.size();
    QMat sq = to_qmat(t.cosets[si]);
    Tuple img;
    img.reserve(terms[ti].first.size());
    for (const auto& x : terms[ti].first) img.push_back(group_action(sq, x));
    partial[omp_get_thread_num()].add_term(std::move(img), terms[ti].second);
  }
  Chain out(xi.degree());
  for (const auto& ch : partial) out.add(ch);
  return out;
}

}  // namespace vh
