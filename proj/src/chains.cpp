#include "vorhecke/chains.hpp"

#include <algorithm>

namespace vh {

void Chain::add_term(Tuple pts, Int coeff) {
  if (coeff == 0) return;
  VH_CHECK(static_cast<int>(pts.size()) == degree_ + 1, "DegreeMismatch",
           "tuple length does not match chain degree");
  for (const auto& p : pts) VH_CHECK(!is_zero(p), "ZeroVector", "zero point in tuple");
  // insertion sort, tracking the permutation parity
  int sign = 1;
  for (size_t i = 1; i < pts.size(); i++)
    for (size_t j = i; j > 0 && lex_cmp(pts[j], pts[j - 1]) < 0; j--) {
      std::swap(pts[j], pts[j - 1]);
      sign = -sign;
    }
  for (size_t i = 1; i < pts.size(); i++)
    if (pts[i] == pts[i - 1]) return;  // repeated point: degenerate
  PointedCone pc(pts);
  if (pc.degenerate()) return;
  Int c = coeff * sign;
  auto it = terms_.find(pts);
  if (it == terms_.end()) {
    terms_.emplace(std::move(pts), std::move(c));
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Chain::add(const Chain& other) {
  VH_CHECK(degree_ == other.degree_ || other.empty(), "DegreeMismatch",
           "adding chains of different degrees");
  for (const auto& [t, c] : other.terms_) add_term(t, c);
}

void Chain::subtract(const Chain& other) {
  VH_CHECK(degree_ == other.degree_ || other.empty(), "DegreeMismatch",
           "subtracting chains of different degrees");
  for (const auto& [t, c] : other.terms_) add_term(t, -c);
}

Chain Chain::scaled(const Int& c) const {
  Chain out(degree_);
  if (c == 0) return out;
  for (const auto& [t, k] : terms_) out.add_term(t, k * c);
  return out;
}

Chain Chain::boundary() const {
  VH_CHECK(degree_ >= 1, "DegreeMismatch", "boundary of a degree-0 chain");
  Chain out(degree_ - 1);
  for (const auto& [t, c] : terms_) {
    for (size_t i = 0; i < t.size(); i++) {
      Tuple face;
      face.reserve(t.size() - 1);
      for (size_t j = 0; j < t.size(); j++)
        if (j != i) face.push_back(t[j]);
      out.add_term(std::move(face), (i % 2 == 0) ? c : -c);
    }
  }
  return out;
}

Chain Chain::translated(const IMat& g) const {
  Chain out(degree_);
  QMat gq = to_qmat(g);
  for (const auto& [t, c] : terms_) {
    Tuple img;
    img.reserve(t.size());
    for (const auto& p : t) img.push_back(group_action(gq, p));
    out.add_term(std::move(img), c);
  }
  return out;
}

std::vector<PointedCone> support(const Chain& xi) {
  std::vector<PointedCone> out;
  for (const auto& [t, c] : xi.terms()) out.push_back(PointedCone(t));
  return out;
}

Chain chain_of(const Tuple& pts, const Int& coeff) {
  Chain out(static_cast<int>(pts.size()) - 1);
  out.add_term(pts, coeff);
  return out;
}

Chain chain_of_cusps(const std::vector<IVec>& cusps, const Int& coeff) {
  Tuple pts;
  for (const auto& v : cusps) pts.push_back(rank_one_form(v));
  return chain_of(pts, coeff);
}

int sign_rel(const Tuple& reference, const Tuple& tuple) {
  VH_CHECK(reference.size() == tuple.size(), "BadShape", "sign_rel size mismatch");
  size_t k = reference.size();
  size_t dim = reference[0].size();
  QMat ref(dim, k);
  for (size_t j = 0; j < k; j++)
    for (size_t i = 0; i < dim; i++) ref(i, j) = reference[j][i];
  QMat change(k, k);
  for (size_t j = 0; j < k; j++) {
    auto c = solve(ref, tuple[j]);
    if (!c) return 0;
    for (size_t i = 0; i < k; i++) change(i, j) = (*c)[i];
  }
  Rat d = det(change);
  return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

Chain stellar_subdivide_chain(const Chain& xi) {
  Chain out(xi.degree());
  for (const auto& [t, c] : xi.terms()) {
    IVec b = barycenter_ray(PointedCone(t));
    QVec bq = to_qvec(b);
    for (size_t i = 0; i < t.size(); i++) {
      Tuple piece = t;
      piece[i] = bq;
      out.add_term(std::move(piece), c);
    }
  }
  return out;
}

bool tuple_in_boundary(size_t n, const Tuple& pts) {
  QVec sum(pts[0].size(), Rat(0));
  for (const auto& p : pts) {
    VH_CHECK(is_positive_semidefinite(n, p), "OutsideCone",
             "boundary-support test on a point outside the closed cone");
    sum = add(sum, p);
  }
  return form_rank(n, sum) < n;
}

std::optional<IVec> cusp_vector_of_point(size_t n, const QVec& x) {
  if (is_zero(x) || !is_positive_semidefinite(n, x)) return std::nullopt;
  if (form_rank(n, x) != 1) return std::nullopt;
  Classification cls = classify_point(n, x);
  IVec v(n);
  for (size_t i = 0; i < n; i++) v[i] = cls.component->basis(i, 0);
  return sign_normalize(v);
}

RelativeCycleTag is_relative_cycle(const Chain& xi, const ArithmeticGroup& grp) {
  RelativeCycleTag tag;
  if (xi.empty()) {
    tag.is_cycle = true;
    return tag;
  }
  Chain bd = xi.boundary();
  size_t n = grp.n;

  // interior faces, bucketed modulo Gamma with orientation transport
  OrbitIndex idx(grp);
  struct Bucket {
    Int sum;
    std::vector<Tuple> members;
  };
  std::map<Tuple, Bucket, TupleLess> buckets;
  std::map<Cone, std::vector<IMat>> stabs;  // stabilizers of canonical reps

  for (const auto& [t, c] : bd.terms()) {
    if (tuple_in_boundary(n, t)) continue;  // supported on the Satake boundary
    // exact Gamma-matching is available for cuspidal tuples; otherwise fall
    // back to exact-tuple matching (identity only)
    std::vector<IVec> cusps;
    bool cuspidal = true;
    for (const auto& p : t) {
      auto v = cusp_vector_of_point(n, p);
      if (!v) {
        cuspidal = false;
        break;
      }
      cusps.push_back(*v);
    }
    Tuple key;
    Int signed_c = c;
    if (cuspidal) {
      auto entry = idx.canonical(cusps);
      auto sit = stabs.find(entry.rep);
      if (sit == stabs.end()) {
        std::vector<IVec> rep_cusps;
        for (const auto& r : entry.rep.rays) rep_cusps.push_back(*cusp_vector_of_point(n, to_qvec(r)));
        sit = stabs.emplace(entry.rep, cusp_cone_equivalences(rep_cusps, rep_cusps, grp)).first;
      }
      QMat gq = to_qmat(entry.certificate);
      Tuple moved;
      for (const auto& p : t) moved.push_back(group_action(gq, p));
      std::optional<Tuple> best;
      int best_sign = 1;
      for (const auto& s : sit->second) {
        QMat sq = to_qmat(s);
        Tuple cand;
        for (const auto& p : moved) cand.push_back(group_action(sq, p));
        int sg = 1;
        for (size_t i = 1; i < cand.size(); i++)
          for (size_t j = i; j > 0 && lex_cmp(cand[j], cand[j - 1]) < 0; j--) {
            std::swap(cand[j], cand[j - 1]);
            sg = -sg;
          }
        if (!best || TupleLess{}(cand, *best)) {
          best = cand;
          best_sign = sg;
        }
      }
      key = *best;
      signed_c = c * best_sign;
    } else {
      key = t;
    }
    auto& b = buckets[key];
    b.sum += signed_c;
    b.members.push_back(t);
  }

  tag.is_cycle = true;
  for (const auto& [key, b] : buckets) {
    if (b.sum != 0) {
      tag.is_cycle = false;
      for (const auto& m : b.members) tag.offending.push_back(m);
    }
  }
  return tag;
}

}  // namespace vh
