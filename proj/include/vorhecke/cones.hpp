#pragma once

#include <map>
#include <set>

#include "vorhecke/polyhedra.hpp"

namespace vh {

// Ordered tuple of nonzero rational points; the ordering carries the
// orientation.  Degenerate tuples (dependent or repeated generators) are
// legal values; chain-level code treats them as zero.
struct PointedCone {
  std::vector<QVec> gens;

  PointedCone() = default;
  explicit PointedCone(std::vector<QVec> g);
  size_t dim_span() const;  // dimension of the linear span
  bool degenerate() const { return dim_span() < gens.size(); }
};

// Unpointed simplicial (or general) cone, identified by its primitive
// spanning rays, lex-sorted.
struct Cone {
  std::vector<IVec> rays;

  Cone() = default;
  explicit Cone(std::vector<IVec> r) : rays(std::move(r)) {
    std::sort(rays.begin(), rays.end(), LexLess{});
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  }
  size_t nrays() const { return rays.size(); }
  bool operator<(const Cone& o) const {
    if (rays.size() != o.rays.size()) return rays.size() < o.rays.size();
    for (size_t i = 0; i < rays.size(); i++) {
      int c = lex_cmp(rays[i], o.rays[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }
  bool operator==(const Cone& o) const { return rays == o.rays; }
  bool has_face(const Cone& f) const;  // subset of rays (simplicial reading)
};

Cone cone_of(const PointedCone& pc);
Cone cone_of_rays(const std::vector<IVec>& rays);

// Finite fan: face-closed set of simplicial cones (general cones allowed
// transiently; the subdivision operators require simplicial members).
class Fan {
 public:
  Fan() : ambient_(0) {}
  explicit Fan(size_t ambient) : ambient_(ambient) {}

  size_t ambient() const { return ambient_; }
  const std::set<Cone>& cones() const { return cones_; }
  bool contains(const Cone& c) const { return cones_.count(c) > 0; }
  bool empty() const { return cones_.empty(); }
  size_t max_dim() const;

  // Inserts a simplicial cone together with all its faces.
  void insert_simplicial(const Cone& c);
  // Inserts a general cone with its full face lattice.
  void insert_with_faces(const Cone& c);

  std::vector<Cone> cones_of_nrays(size_t k) const;
  std::vector<Cone> maximal_cones() const;
  // Filtration F_d: sub-fan of cones with at most d rays (simplicial fans:
  // nrays == dim).
  Fan filtration(size_t d) const;

  bool is_simplicial() const;

  // Fan axioms as an executable predicate: face-closed, and pairwise
  // intersections are common faces.
  void validate() const;

 private:
  size_t ambient_;
  std::set<Cone> cones_;
};

// ---- spec operations -----------------------------------------------------

// R(sigma): rays through vertices of the convex hull of the generators,
// primitive, lex-sorted (interior generators dropped).
std::vector<IVec> spanning_rays(const PointedCone& pc);

// True iff the generator tuple is linearly independent.
bool is_simplicial(const PointedCone& pc);

// Primitive vector on the ray through the sum of the primitive generators.
IVec barycenter_ray(const PointedCone& pc);
IVec barycenter_ray(const Cone& c);

// Fan whose top cones replace one generator by the barycenter ray.
Fan stellar_subdivide(const PointedCone& pc, size_t ambient);

// Barycentric subdivision, simplex by simplex.
Fan barycentric_subdivide(const Fan& f);

// Relative barycentric subdivision B(F, A): the stellar cascade, skipping
// every simplex of A.  A must be a closed subfan of F.
Fan relative_barycentric_subdivide(const Fan& f, const Fan& a);

// Open star U_sigma(F) as a membership structure.
struct OpenStar {
  Cone base;
  std::set<Cone> members;  // cones of F containing base
  bool contains_cone(const Cone& c) const { return members.count(c) > 0; }
};
OpenStar open_star(const Cone& sigma, const Fan& f);
std::vector<OpenStar> open_cover(const Fan& f);

// Deterministic simplicial refinement with identical 1-skeleton: the pulling
// triangulation at the lex-smallest ray, applied recursively.
Fan simplicial_refine_no_new_rays(const Fan& f);

// Abstract presentation of an ambient (possibly infinite) fan that can be
// walked: enough to intersect finite cones against it.
class IAmbientFan {
 public:
  virtual ~IAmbientFan() = default;
  virtual size_t ambient() const = 0;
  virtual bool in_support(const QVec& x) const = 0;
  // Some top cone containing x (x in the support, not on the zero ray).
  virtual Cone top_cone_at(const QVec& x) const = 0;
  virtual std::vector<Cone> top_neighbors(const Cone& top) const = 0;
  // Smallest cone of the fan containing x.
  virtual Cone smallest_cone_at(const QVec& x) const = 0;
};

// The canonical fan sigma cap V: cells (face of sigma) cap (cone of V) with,
// per cell, the smallest ambient-fan cone containing it.
struct CanonicalFan {
  Fan fan;                          // all cells, face-closed
  std::map<Cone, Cone> inducing;    // cell -> smallest ambient cone containing it
};
CanonicalFan intersect_cone_with_fan(const PointedCone& sigma, const IAmbientFan& v);

// ---- fan exchange format ---------------------------------------------------
// Header "dim <d>", then one cone per line: semicolon-separated list of
// comma-separated integer vectors.
std::string fan_to_text(const Fan& f);
Fan fan_from_text(const std::string& text);

}  // namespace vh
