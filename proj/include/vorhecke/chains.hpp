#pragma once

#include "vorhecke/model.hpp"

namespace vh {

// A term of the sharbly-style complex: ordered tuple of nonzero points of
// the closed cone.  Chains store tuples lex-sorted with the orientation sign
// absorbed into the coefficient; degenerate tuples (repeated points or
// dependent spans) are zero.
using Tuple = std::vector<QVec>;

struct TupleLess {
  bool operator()(const Tuple& a, const Tuple& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); i++) {
      int c = lex_cmp(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }
};

class Chain {
 public:
  Chain() = default;
  explicit Chain(int degree) : degree_(degree) {}

  int degree() const { return degree_; }
  const std::map<Tuple, Int, TupleLess>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  // Normalizing insertion: sorts the tuple, multiplies the coefficient by
  // the permutation sign, drops degenerate tuples and zero coefficients.
  void add_term(Tuple pts, Int coeff);
  void add(const Chain& other);
  void subtract(const Chain& other);
  Chain scaled(const Int& c) const;
  Chain boundary() const;
  Chain translated(const IMat& g) const;

  bool operator==(const Chain& o) const {
    return degree_ == o.degree_ && terms_ == o.terms_;
  }

 private:
  int degree_ = 0;
  std::map<Tuple, Int, TupleLess> terms_;
};

// support as pointed cones (the stored normalized tuples)
std::vector<PointedCone> support(const Chain& xi);

// single pointed cone with coefficient, as a chain
Chain chain_of(const Tuple& pts, const Int& coeff);
Chain chain_of_cusps(const std::vector<IVec>& cusps, const Int& coeff);

// orientation of `tuple` relative to `reference` (both spanning the same
// subspace): the sign of det of the change of basis; 0 if degenerate
int sign_rel(const Tuple& reference, const Tuple& tuple);

// chain-level stellar subdivision: every term is replaced by the terms of
// its stellar subdivision at the barycenter ray (class-preserving)
Chain stellar_subdivide_chain(const Chain& xi);

// Literal chain in the free complex on tuples: no reordering, no
// degenerate-dropping.  Used where exact chain-level identities over all
// generators are asserted (the explicit prism witness).
class FreeChain {
 public:
  FreeChain() = default;
  explicit FreeChain(int degree) : degree_(degree) {}
  int degree() const { return degree_; }
  const std::map<Tuple, Int, TupleLess>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  void add_term(const Tuple& pts, const Int& coeff) {
    if (coeff == 0) return;
    VH_CHECK(static_cast<int>(pts.size()) == degree_ + 1, "DegreeMismatch",
             "tuple length does not match chain degree");
    auto it = terms_.find(pts);
    if (it == terms_.end())
      terms_.emplace(pts, coeff);
    else {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }
  void add(const FreeChain& o) {
    for (const auto& [t, c] : o.terms_) add_term(t, c);
  }
  void subtract(const FreeChain& o) {
    for (const auto& [t, c] : o.terms_) add_term(t, -c);
  }
  FreeChain boundary() const {
    FreeChain out(degree_ - 1);
    for (const auto& [t, c] : terms_)
      for (size_t i = 0; i < t.size(); i++) {
        Tuple face;
        for (size_t j = 0; j < t.size(); j++)
          if (j != i) face.push_back(t[j]);
        out.add_term(face, (i % 2 == 0) ? c : -c);
      }
    return out;
  }
  bool operator==(const FreeChain& o) const {
    return degree_ == o.degree_ && terms_ == o.terms_;
  }

 private:
  int degree_ = 0;
  std::map<Tuple, Int, TupleLess> terms_;
};

struct RelativeCycleTag {
  bool is_cycle = false;
  std::vector<Tuple> offending;  // interior faces that fail to cancel
};

// The relative-cycle test: boundary faces lying in the closed cone's
// boundary (every interior point of rank < n, equivalently the sum of the
// spanning forms has rank < n) are discarded; the remaining faces must
// cancel within Gamma-orbits, signs included.
RelativeCycleTag is_relative_cycle(const Chain& xi, const ArithmeticGroup& grp);

// true if the cone of all the tuple's points lies in the cone boundary
bool tuple_in_boundary(size_t n, const Tuple& pts);

// extract the primitive cusp vector when the point is a scaled rank-one
// form; nullopt otherwise
std::optional<IVec> cusp_vector_of_point(size_t n, const QVec& x);

}  // namespace vh
