#pragma once

#include "vorhecke/complex.hpp"

namespace vh {

// T_p for g = diag(1,...,1,p): the right coset representatives S with
// Gamma g Gamma = disjoint union of Gamma s over s in S.
struct HeckeOperator {
  ArithmeticGroup grp;
  long p = 0;
  std::vector<IMat> cosets;
};

// HNF classes of determinant-p matrices, sieved to Gamma_0(N)-inequivalent
// representatives.  UnsupportedOperator unless p is prime and coprime to N.
HeckeOperator coset_decomposition(const ArithmeticGroup& grp, long p);

// S = {identity}; acts as the identity on chains (test operator)
HeckeOperator identity_operator(const ArithmeticGroup& grp);

// index of the unique coset with Gamma m = Gamma s, if any
std::optional<size_t> coset_of(const HeckeOperator& t, const IMat& m);

// chain-level Hecke action: sum over terms and cosets of s . sigma
Chain hecke_image(const HeckeOperator& t, const Chain& xi);
Chain hecke_image_parallel(const HeckeOperator& t, const Chain& xi);

enum class Algorithm { AshRudolph, One, Two };

struct HeckeMatrixResult {
  size_t basis = 0;
  QMat matrix;
  std::vector<Rat> charpoly;
};

// matrix of T_p on H_degree in the computed basis: lift, Hecke image,
// reduction (selected algorithm), projection.  Implemented with the
// reduction algorithms.
HeckeMatrixResult hecke_matrix(const HomologyPresentation& h, size_t degree, long p,
                               Algorithm alg);

}  // namespace vh
