#pragma once

#include "vorhecke/linalg.hpp"

namespace vh {

// H-representation of a rational polyhedral cone:
//   { x : <e, x> = 0 for e in eqs,  <a, x> >= 0 for a in ineqs }.
struct ConeHRep {
  std::vector<QVec> ineqs;
  std::vector<QVec> eqs;
};

// Extreme rays of a pointed cone given by an H-representation, as primitive
// integer vectors, lex-sorted and deduplicated.  Throws NotPointed if the
// cone contains a line.
std::vector<IVec> rays_from_hrep(const ConeHRep& h, size_t dim);

// H-representation of the cone generated by `gens` (facet inequalities within
// the linear span, plus span equations).
ConeHRep cone_hrep(const std::vector<QVec>& gens);

// Extreme rays of cone(gens): the spanning rays through the vertices of the
// convex hull, primitive and lex-sorted.
std::vector<IVec> cone_extreme_rays(const std::vector<QVec>& gens);

bool hrep_contains(const ConeHRep& h, const QVec& x);

// Facets of cone(gens) as ray lists (each facet given by its extreme rays).
// gens are assumed to be the extreme rays already.
std::vector<std::vector<IVec>> cone_facets(const std::vector<IVec>& rays);

}  // namespace vh
