#pragma once

#include <optional>

#include "vorhecke/cones.hpp"

namespace vh {

// V(n) = symmetric n x n rational matrices, coordinatized by the upper
// triangle in row-major order: n=2 -> (x00, x01, x11),
// n=3 -> (x00, x01, x02, x11, x12, x22).
inline size_t sym_dim(size_t n) { return n * (n + 1) / 2; }
size_t sym_index(size_t n, size_t i, size_t j);
QMat sym_to_matrix(size_t n, const QVec& x);
QVec sym_from_matrix(const QMat& m);

// q(v) = v v^t as a coordinate vector.  Invariant under v -> -v.
QVec rank_one_form(const IVec& v);

size_t form_rank(size_t n, const QVec& x);
bool is_positive_semidefinite(size_t n, const QVec& x);
bool is_positive_definite(size_t n, const QVec& x);

// g . x = g x g^t on coordinate vectors; SingularMatrix for det 0.
QVec group_action(const QMat& g, const QVec& x);
QVec group_action(const IMat& g, const QVec& x);
// cusp action: primitive sign-normalized g v
IVec act_on_cusp(const IMat& g, const IVec& v);
PointedCone act_on_pointed(const IMat& g, const PointedCone& pc);

struct BoundaryComponent {
  size_t n = 0;
  IMat basis;  // n x r, saturated basis of the supporting sublattice
  size_t rank() const { return basis.cols(); }
};

enum class PointClass { Interior, ProperBoundary, Outside };
struct Classification {
  PointClass cls;
  std::optional<BoundaryComponent> component;  // set for ProperBoundary
};
Classification classify_point(size_t n, const QVec& x);

// Q-rank of a point of the closed cone (= matrix rank in this model);
// OutsideCone if x is indefinite or zero.
size_t q_rank(size_t n, const QVec& x);

struct ArithmeticGroup {
  size_t n = 2;
  long level = 1;  // Gamma_0(N): first column == (*,0,...,0)^t mod N
};
bool gamma0_membership(const IMat& g, const ArithmeticGroup& grp);

// Standard Voronoi fan data: spanning cusps of the standard top cone, the
// coordinates-in-ray-basis matrix (rows are the wall functionals), and one
// verified neighbor certificate per facet (facet i = drop ray i).
class VoronoiData {
 public:
  // n in {2,3}; built once, verified at build time; UnsupportedRank otherwise
  static const VoronoiData& standard(size_t n);

  size_t n() const { return n_; }
  size_t dim() const { return sym_dim(n_); }
  const std::vector<IVec>& cusps() const { return cusps_; }
  const std::vector<QVec>& rays() const { return rays_; }   // q(cusp) vectors
  const QVec& rays_at(size_t i) const { return rays_[i]; }
  const QMat& coords_matrix() const { return coords_; }     // coords = coords_ * x
  const std::vector<IMat>& neighbor_certs() const { return certs_; }
  Cone standard_cone() const;
  QVec base_point() const;  // sum of the standard rays (interior)

  // coordinates of x in the standard ray basis
  QVec coords(const QVec& x) const { return mul(coords_, x); }

 private:
  VoronoiData() = default;
  size_t n_ = 0;
  std::vector<IVec> cusps_;
  std::vector<QVec> rays_;
  QMat coords_;
  std::vector<IMat> certs_;
  friend VoronoiData build_voronoi_data(size_t);
};

// Induced Voronoi data on a rational boundary component (Pi' = Pi cap C' is
// a face of Pi): for rank 1 the single cusp; for rank 2 inside n=3 the n=2
// standard data transported along the component basis.
struct BoundaryVoronoi {
  BoundaryComponent component;
  const VoronoiData* inner;  // standard(rank) for rank >= 2, null for rank 1
};
BoundaryVoronoi pi_face_in_boundary(const BoundaryComponent& c);

// All gamma in Gamma_0(N) (mod +/- identity) mapping the cusp-spanned cone
// `from` onto `to` as ray sets.  Exact and complete for tuples whose vectors
// span Q^n (enumeration over basis-image candidates).
std::vector<IMat> cusp_cone_equivalences(const std::vector<IVec>& from,
                                         const std::vector<IVec>& to,
                                         const ArithmeticGroup& grp);

// Deterministic canonical representative for the Gamma_0(N)-orbit of a
// full-rank cusp-spanned cone, chosen within an explicit context set (all
// cones that may be compared must be canonicalized against the same
// context).  certificate * cone = representative.
class OrbitIndex {
 public:
  OrbitIndex(ArithmeticGroup grp) : grp_(grp) {}
  struct Entry {
    Cone rep;
    IMat certificate;
  };
  // cusps: primitive sign-normalized spanning vectors of the cone
  Entry canonical(const std::vector<IVec>& cusps);
  const ArithmeticGroup& group() const { return grp_; }

 private:
  ArithmeticGroup grp_;
  // invariant key -> list of representatives (cusp lists)
  std::map<std::string, std::vector<std::vector<IVec>>> buckets_;
};

// Gamma_0(N) \ SL_n(Z) coset enumeration via P^{n-1}(Z/N): normalized point
// of [g^{-1} e_1] labels the right coset of g.
struct CosetTable {
  ArithmeticGroup grp;
  std::vector<IVec> points;  // normalized projective points, sorted
  std::vector<IMat> lifts;   // lifts[i] has label points[i]
  size_t index() const { return points.size(); }
  size_t label_of(const IMat& g) const;  // index into points
};
CosetTable enumerate_cosets(const ArithmeticGroup& grp);

IVec normalize_projective_point(const IVec& v, long modulus);

}  // namespace vh
