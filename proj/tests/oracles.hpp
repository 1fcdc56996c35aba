#pragma once

// Independent test oracles.  Everything here is deliberately built on
// classical descriptions (binary form reduction, genus formulas, Manin
// symbols over P^1(Z/N)) and stays off the cone/chain machinery it checks.

#include "vorhecke/linalg.hpp"

namespace vh::oracles {

// Gauss-Lagrange reduction of a positive definite binary quadratic form
// given in (x00, x01, x11) coordinates: returns delta in GL_2(Z) with
// delta.x reduced (-a < 2b <= a <= c), and the predicted cusp triple of a
// standard-fan top cone containing x.
struct GaussResult {
  IMat delta;
  QVec reduced;
};
GaussResult gauss_lagrange(const QVec& x);
std::vector<IVec> gauss_predicted_top_cusps(const QVec& x);

// Classical X_0(N) invariants.
long genus_x0(long n);
long cusp_count_x0(long n);
long psl2_index(long n);

// Manin-symbol model of the weight-2 modular symbol space for Gamma_0(N)
// over Q, with the Hecke action computed through continued fractions.
class ManinSpace {
 public:
  explicit ManinSpace(long level);
  long level() const { return level_; }
  size_t dimension() const { return free_cols_.size(); }  // = 2g + c - 1
  // matrix of T_p in the Manin basis (p prime, p coprime to N)
  QMat hecke_matrix(long p) const;

 private:
  long level_;
  std::vector<std::pair<long, long>> symbols_;  // normalized (c:d)
  size_t symbol_index(long c, long d) const;
  QMat rref_;                      // reduced relation matrix
  std::vector<size_t> pivot_cols_;
  std::vector<size_t> free_cols_;
  QVec quotient_coords(const QVec& v) const;
  // modular symbol {oo, p/q} as a vector of Manin symbols
  QVec path_from_infinity(const Int& p, const Int& q) const;
  QVec path(const std::pair<Int, Int>& a, const std::pair<Int, Int>& b) const;
};

}  // namespace vh::oracles
