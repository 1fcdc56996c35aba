#pragma once

#include "vorhecke/hecke.hpp"
#include "vorhecke/oracle.hpp"

namespace vh {

struct ReductionStats {
  size_t cones_visited = 0;
  std::vector<size_t> rounds_per_level;  // relative-barycentric iterations per dimension
  std::vector<Int> ar_level_max_det;     // Ash-Rudolph: max |det| per recursion level
};

// ---- Ash-Rudolph baseline ---------------------------------------------------
// Modular-symbol reduction of a cuspidal degree-(n-1) chain to unimodular
// symbols.  Terms with dependent spanning vectors are zero and dropped; the
// per-level maximum determinant decreases strictly (round-to-nearest pivot).
Chain ash_rudolph_reduce(const Chain& xi, const ArithmeticGroup& grp,
                         ReductionStats* stats = nullptr);

// ---- canonical fan (first algorithm) ---------------------------------------
struct TaggedFan {
  Fan fan;
  std::map<Cone, Cone> inducing;  // cell -> smallest Voronoi cone containing it
};
// simplicial refinement of sigma cap V with unchanged 1-skeleton, every cell
// tagged with its inducing Voronoi cone
TaggedFan canonical_fan_refined(const PointedCone& sigma, size_t n);

// the prism homotopy, in the free complex on literal tuples:
// d(eta) = xi_free - xiv_free + mu, with every mu-term rank-deficient
struct WitnessParts {
  FreeChain eta;
  FreeChain xi_free;   // the input terms, literally
  FreeChain xiv_free;  // the output cycle, literally (cone order)
  FreeChain mu;
};

struct Alg1Options {
  bool witness = false;
  bool equivariant = false;
};

struct Alg1Result {
  Chain reduced;
  std::optional<WitnessParts> witness;
  // recorded equivariance certificates: (representative ray, gamma,
  // translated ray) with assignment(gamma . ray) = gamma . assignment(ray)
  std::vector<std::tuple<Cone, IMat, Cone>> orbit_pairs;
  ReductionStats stats;
};

Alg1Result algorithm1_reduce(const Chain& xi, const ArithmeticGroup& grp,
                             Alg1Options opt = {});
Alg1Result algorithm1_equivariant(const Chain& xi, const ArithmeticGroup& grp,
                                  Alg1Options opt = {});

// ---- sufficiently fine decompositions (second algorithm) --------------------
struct SuffFineCertificate {
  Fan fan;  // Sigma' (per-term fans merged for reporting)
  std::map<Cone, std::vector<IVec>> witness;  // top cone -> S(tau), nonempty
  std::vector<size_t> rounds;                 // iterations per dimension level
};

struct SuffFineCheck {
  bool fine = false;
  std::optional<Cone> failure;                // offending top cone
  std::map<Cone, std::vector<IVec>> witness;  // populated when fine
};
// Eq. S(tau) = S(beta_tau) cap intersection of S(rho) over spanning rays,
// evaluated with the reduction oracle
SuffFineCheck check_sufficiently_fine(const Fan& f, size_t n);

struct MakeSuffFineResult {
  std::map<Tuple, Fan, TupleLess> per_term;  // term tuple -> its translated fan
  std::map<Cone, Fan> reps;                  // orbit representative -> its fan
  std::map<Tuple, std::pair<Cone, IMat>, TupleLess> certs;  // term -> (rep, gamma)
  SuffFineCertificate cert;
  ReductionStats stats;
};
// dimension-by-dimension refinement by relative barycentric subdivision,
// Gamma-equivariant via orbit representatives; IterationCapExceeded when a
// level does not pass within `cap` subdivision rounds
MakeSuffFineResult make_sufficiently_fine(const Chain& xi, const ArithmeticGroup& grp,
                                          size_t cap = 8);

Chain algorithm2_assemble(const Chain& xi, const MakeSuffFineResult& fine,
                          const ArithmeticGroup& grp);
Chain algorithm2_reduce(const Chain& xi, const ArithmeticGroup& grp, size_t cap = 8,
                        ReductionStats* stats = nullptr);

// unified dispatcher
Chain reduce_cycle(const Chain& xi, const ArithmeticGroup& grp, Algorithm alg,
                   ReductionStats* stats = nullptr);

// Runtime certification: every term's points lie on cusp rays spanning one
// Voronoi cone (spanning-set membership via the oracle); throws otherwise.
void certify_voronoi_chain(const Chain& xi, size_t n);

}  // namespace vh
