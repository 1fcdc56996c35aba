#pragma once

#include "vorhecke/chains.hpp"

namespace vh {

// One Gamma-orbit of Voronoi cells, carried by its canonical representative.
struct CellOrbit {
  Cone cone;                            // rays = primitive q(v)
  std::vector<IVec> cusps;              // sign-normalized, lex-sorted
  Tuple reference;                      // the oriented reference tuple (q(v) in cusp order)
  bool orientation_reversible = false;  // some stabilizer reverses orientation
};

// Finite Voronoi complex mod Gamma.  Cells are indexed by cone dimension
// d = 1..dim V; chain degree is d-1.  The relative complex keeps only the
// interior cells (cusp span of full rank); orientation-reversible cells are
// excluded from the integral bases (rational homology is unaffected,
// integral torsion against such orbits is not computed).
struct VoronoiComplex {
  ArithmeticGroup grp;
  size_t top_dim = 0;
  bool relative = true;
  bool integral_valid = true;            // false when reversible cells were dropped
  size_t dropped_cells = 0;
  std::vector<std::vector<CellOrbit>> cells;  // cells[d] for d = 0..top_dim
  std::vector<IMat> bd;                       // bd[d] : cells[d] -> cells[d-1]
};

VoronoiComplex build_voronoi_complex(const ArithmeticGroup& grp, bool relative = true);

// strict mode per the StabilizerObstruction contract: throws instead of
// dropping orientation-reversible cells
VoronoiComplex build_voronoi_complex_strict(const ArithmeticGroup& grp, bool relative = true);

// locate a Voronoi cell orbit: canonicalize and look up; nullopt when the
// cone is not a cell of the complex (or was dropped)
struct CellRef {
  size_t dim;
  size_t index;
  IMat certificate;  // carries the query cone onto the representative
};
class CellLocator {
 public:
  explicit CellLocator(const VoronoiComplex& c);
  std::optional<CellRef> locate(const std::vector<IVec>& cusps);

 private:
  const VoronoiComplex& cx_;
  OrbitIndex idx_;
  std::map<Cone, std::pair<size_t, size_t>> by_cone_;
};

struct HomologyLevel {
  size_t free_rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1
  // presentation data over the cell orbits of this degree
  QMat kernel_basis;         // columns: saturated basis of ker(bd)
  IMat uinv_cols;            // basis cycles = kernel_basis * uinv columns
  IMat u;                    // SNF row transform
  std::vector<Int> invariants;  // d_i per row of the SNF (1s and 0s included)
};

struct HomologyPresentation {
  const VoronoiComplex* complex = nullptr;
  std::vector<HomologyLevel> levels;  // by chain degree k = 0..top_dim-1
  bool integral_valid = true;
};

HomologyPresentation homology(const VoronoiComplex& c);

// class coordinates: free part plus torsion residues
struct ClassCoords {
  std::vector<Int> free_part;
  std::vector<std::pair<Int, Int>> torsion_part;  // (residue mod d, d)
  bool operator==(const ClassCoords& o) const {
    return free_part == o.free_part && torsion_part == o.torsion_part;
  }
  bool is_zero() const {
    for (const auto& c : free_part)
      if (c != 0) return false;
    for (const auto& [r, d] : torsion_part)
      if (r != 0) return false;
    return true;
  }
};

// number of homology generators at a degree (free + torsion)
size_t basis_size(const HomologyPresentation& h, size_t degree);

// the i-th basis class as a chain of pointed Voronoi cones
Chain lift_basis_cycle(const HomologyPresentation& h, size_t degree, size_t index);

// expression map: from a relative cycle supported on Voronoi cones to class
// coordinates.  NotACycle if the coefficient vector is not in ker(bd);
// NotVoronoi if some term is not a cell of the complex.
ClassCoords project_cycle(const HomologyPresentation& h, size_t degree, const Chain& xi);

}  // namespace vh
