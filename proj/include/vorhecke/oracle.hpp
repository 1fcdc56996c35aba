#pragma once

#include <mutex>

#include "vorhecke/model.hpp"

namespace vh {

struct OracleStats {
  size_t steps = 0;
  size_t restarts = 0;
  std::vector<Rat> potentials;  // strictly decreasing along the walk
};

struct OracleAnswer {
  std::vector<IVec> cusps;    // S(x): spanning cusps of the smallest cone containing x
  IMat gamma;                 // SL_n(Z); gamma * (standard face) is that cone
  std::vector<size_t> face;   // indices into the standard cusps
  size_t component_rank = 0;  // q-rank of the smallest boundary component containing x
  OracleStats stats;
};

// The reduction oracle: unique smallest Voronoi cone containing x, for any
// nonzero rational psd x (boundary points handled by recursion into the
// component's transported data).  OutsideCone otherwise.
OracleAnswer reduce(size_t n, const QVec& x);

std::vector<IVec> s_of_ray(size_t n, const QVec& ray_point);

// Soundness check: recombines the certified cone's rays and verifies the
// coordinates are positive exactly on the certified face.
void verify_answer(size_t n, const QVec& x, const OracleAnswer& ans);

// Batch reduction: serial reference and the OpenMP kernel; identical output.
std::vector<OracleAnswer> reduce_batch(size_t n, const std::vector<QVec>& xs);
std::vector<OracleAnswer> reduce_batch_parallel(size_t n, const std::vector<QVec>& xs);

void oracle_cache_clear();
size_t oracle_cache_size();

// The Voronoi fan, walked through the oracle and the neighbor certificates.
class VoronoiAmbientFan : public IAmbientFan {
 public:
  explicit VoronoiAmbientFan(size_t n) : n_(n) {}
  size_t ambient() const override { return sym_dim(n_); }
  bool in_support(const QVec& x) const override;
  Cone top_cone_at(const QVec& x) const override;
  std::vector<Cone> top_neighbors(const Cone& top) const override;
  Cone smallest_cone_at(const QVec& x) const override;

  // certificate for a top cone of the fan (gamma * standard = top)
  IMat top_certificate(const Cone& top) const;

 private:
  size_t n_;
  mutable std::mutex mu_;
  mutable std::map<Cone, IMat> tops_;
};

}  // namespace vh
