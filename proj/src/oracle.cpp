#include "vorhecke/oracle.hpp"

#include <algorithm>

namespace vh {

namespace {

struct WalkResult {
  IMat gamma;      // x lies in gamma * standard cone
  QVec coords;     // coordinates of x in that cone's ray basis (all >= 0)
  OracleStats stats;
};

// Walk along the segment from a base point interior to the standard cone
// towards x, crossing one wall at a time via the precomputed neighbor
// certificates.  The potential 1 - t (t = wall-crossing parameter along the
// segment) is rational and strictly decreasing; simultaneous wall hits are
// degenerate for the chosen base point and trigger a restart with a
// perturbed base.
WalkResult interior_walk(size_t n, const QVec& x) {
  const VoronoiData& d = VoronoiData::standard(n);
  size_t dim = d.dim();
  VH_CHECK(form_rank(n, x) == n, "InternalError", "interior walk needs a full-rank form");

  std::vector<IMat> cert_inv;
  for (const auto& c : d.neighbor_certs()) cert_inv.push_back(inverse_unimodular(c));

  OracleStats stats;
  for (size_t restart = 0; restart <= 60; restart++) {
    // base point via its standard-cone coordinates, perturbed on restart
    QVec base(dim, Rat(0));
    for (size_t i = 0; i < dim; i++) {
      Rat coeff = 1;
      if (restart > 0) coeff += make_rat(Int(i + 1), Int(6 * restart + 7));
      base = add(base, scale(coeff, d.rays_at(i)));
    }

    IMat gamma = IMat::identity(n);
    QVec y = x;      // gamma^{-1} . x
    QVec b = base;   // gamma^{-1} . base
    Rat t = 0;
    stats.potentials.clear();
    bool restart_needed = false;

    for (size_t step = 0; step < 20000; step++) {
      QVec cx = d.coords(y);
      bool inside = true;
      for (const auto& c : cx)
        if (c < 0) inside = false;
      if (inside) {
        WalkResult r;
        r.gamma = gamma;
        r.coords = cx;
        stats.steps = step;
        stats.restarts = restart;
        r.stats = stats;
        return r;
      }
      QVec cb = d.coords(b);
      // earliest wall crossing after t
      std::optional<Rat> tstar;
      size_t wall = dim;
      bool tie = false;
      for (size_t i = 0; i < dim; i++) {
        if (cx[i] >= 0) continue;
        // c_i(s) = (1-s) cb_i + s cx_i hits zero at s_i
        if (cb[i] < 0) {  // degenerate corner passage: perturb the base
          restart_needed = true;
          break;
        }
        Rat denom = cb[i] - cx[i];
        Rat si = cb[i] / denom;
        if (!tstar || si < *tstar) {
          tstar = si;
          wall = i;
          tie = false;
        } else if (si == *tstar) {
          tie = true;
        }
      }
      if (restart_needed) break;
      VH_CHECK(tstar.has_value(), "InternalError", "no crossing wall found");
      if (tie || *tstar <= t) {
        restart_needed = true;
        break;
      }
      t = *tstar;
      stats.potentials.push_back(Rat(1) - t);
      gamma = mul(gamma, d.neighbor_certs()[wall]);
      QMat gi = to_qmat(cert_inv[wall]);
      y = group_action(gi, y);
      b = group_action(gi, b);
    }
    if (!restart_needed) break;  // step cap: fall through to NonConvergence
  }
  throw Error("NonConvergence", "reduction walk failed to terminate");
}

std::mutex cache_mu;
std::map<std::pair<size_t, IVec>, OracleAnswer> cache;

OracleAnswer reduce_uncached(size_t n, const QVec& x);

OracleAnswer reduce_impl(size_t n, const QVec& x) {
  IVec key_vec = primitive(x);
  std::pair<size_t, IVec> key{n, key_vec};
  {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  OracleAnswer ans = reduce_uncached(n, to_qvec(key_vec));
  {
    std::lock_guard<std::mutex> lock(cache_mu);
    cache.emplace(key, ans);
  }
  return ans;
}

OracleAnswer reduce_uncached(size_t n, const QVec& x) {
  Classification cls = classify_point(n, x);
  VH_CHECK(cls.cls != PointClass::Outside, "OutsideCone",
           "reduce needs a nonzero positive-semidefinite form");
  size_t r = form_rank(n, x);

  if (r == n) {
    const VoronoiData& d = VoronoiData::standard(n);
    WalkResult w = interior_walk(n, x);
    OracleAnswer ans;
    ans.gamma = w.gamma;
    ans.component_rank = n;
    ans.stats = w.stats;
    for (size_t i = 0; i < d.dim(); i++) {
      if (w.coords[i] > 0) {
        ans.face.push_back(i);
        ans.cusps.push_back(act_on_cusp(w.gamma, d.cusps()[i]));
      }
    }
    std::sort(ans.cusps.begin(), ans.cusps.end(), LexLess{});
    return ans;
  }

  const IMat& basis = cls.component->basis;  // n x r saturated

  if (r == 1) {
    IVec v(n);
    for (size_t i = 0; i < n; i++) v[i] = basis(i, 0);
    v = sign_normalize(v);
    IMat b(n, 1);
    for (size_t i = 0; i < n; i++) b(i, 0) = v[i];
    IMat g = extend_to_unimodular(b);
    if (det(g) == -1)
      for (size_t i = 0; i < n; i++) g(i, 1) = -g(i, 1);
    OracleAnswer ans;
    ans.gamma = g;
    ans.face = {0};  // standard cusp e_1
    ans.cusps = {v};
    ans.component_rank = 1;
    return ans;
  }

  VH_CHECK(n == 3 && r == 2, "InternalError", "unexpected boundary rank");
  // transport x to the component: x = B xt B^t
  QMat bq = to_qmat(basis);
  QMat xm = sym_to_matrix(n, x);
  // solve for the 2x2 symmetric xt: columns are images of the sym2 basis
  std::vector<QVec> cols;
  for (size_t k = 0; k < sym_dim(r); k++) {
    QVec unit(sym_dim(r), Rat(0));
    unit[k] = 1;
    QMat ek = sym_to_matrix(r, unit);
    cols.push_back(sym_from_matrix(mul(mul(bq, ek), bq.transpose())));
  }
  auto sol = solve_in_ray_basis(cols, x);
  VH_CHECK(sol.has_value(), "InternalError", "form not supported on its component");
  QVec xt = *sol;

  OracleAnswer inner = reduce_impl(r, xt);

  // assemble: Bdot extends B*gamma~; gamma0 = diag(1,-1,-1) carries the
  // standard face {e1, e2, e1-e2} onto the embedded n=2 standard cone
  IMat bg(n, r);
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < r; j++) {
      Int s = 0;
      for (size_t k = 0; k < r; k++) s += basis(i, k) * inner.gamma(k, j);
      bg(i, j) = s;
    }
  IMat bdot = extend_to_unimodular(bg);
  if (det(bdot) == -1)
    for (size_t i = 0; i < n; i++) bdot(i, 2) = -bdot(i, 2);
  IMat gamma0(n, n);
  gamma0(0, 0) = 1;
  gamma0(1, 1) = -1;
  gamma0(2, 2) = -1;
  OracleAnswer ans;
  ans.gamma = mul(bdot, gamma0);
  // std2 indices {0,1,2} = {e1, e2, e1+e2} map to std3 indices {0,1,3}
  static const size_t face_map[3] = {0, 1, 3};
  for (size_t f : inner.face) ans.face.push_back(face_map[f]);
  std::sort(ans.face.begin(), ans.face.end());
  for (const auto& vt : inner.cusps) {
    IVec v(n);
    for (size_t i = 0; i < n; i++) {
      Int s = 0;
      for (size_t k = 0; k < r; k++) s += basis(i, k) * vt[k];
      v[i] = s;
    }
    ans.cusps.push_back(sign_normalize(primitive(v)));
  }
  std::sort(ans.cusps.begin(), ans.cusps.end(), LexLess{});
  ans.component_rank = r;
  ans.stats = inner.stats;

  // certificate consistency (bug trap)
  const VoronoiData& d3 = VoronoiData::standard(n);
  std::vector<IVec> check;
  for (size_t f : ans.face) check.push_back(act_on_cusp(ans.gamma, d3.cusps()[f]));
  std::sort(check.begin(), check.end(), LexLess{});
  VH_CHECK(check == ans.cusps, "InternalError", "assembled boundary certificate mismatch");
  return ans;
}

}  // namespace

OracleAnswer reduce(size_t n, const QVec& x) { return reduce_impl(n, x); }

std::vector<IVec> s_of_ray(size_t n, const QVec& ray_point) {
  return reduce(n, ray_point).cusps;
}

void verify_answer(size_t n, const QVec& x, const OracleAnswer& ans) {
  const VoronoiData& d = VoronoiData::standard(n);
  std::vector<QVec> rays;
  for (size_t f : ans.face) rays.push_back(group_action(ans.gamma, d.rays_at(f)));
  auto coeff = solve_in_ray_basis(rays, x);
  VH_CHECK(coeff.has_value(), "VerifyFailed", "x is not in the span of the certified face");
  QVec recomb(x.size(), Rat(0));
  for (size_t i = 0; i < rays.size(); i++) {
    VH_CHECK((*coeff)[i] > 0, "VerifyFailed", "certified face is not minimal");
    recomb = add(recomb, scale((*coeff)[i], rays[i]));
  }
  VH_CHECK(recomb == x, "VerifyFailed", "recombination does not reproduce x");
  // the cusps are exactly the certified rays
  std::vector<IVec> face_cusps;
  for (size_t f : ans.face) face_cusps.push_back(act_on_cusp(ans.gamma, d.cusps()[f]));
  std::sort(face_cusps.begin(), face_cusps.end(), LexLess{});
  VH_CHECK(face_cusps == ans.cusps, "VerifyFailed", "cusp set mismatch");
}

std::vector<OracleAnswer> reduce_batch(size_t n, const std::vector<QVec>& xs) {
  std::vector<OracleAnswer> out(xs.size());
  for (size_t i = 0; i < xs.size(); i++) out[i] = reduce(n, xs[i]);
  return out;
}

std::vector<OracleAnswer> reduce_batch_parallel(size_t n, const std::vector<QVec>& xs) {
  std::vector<OracleAnswer> out(xs.size());
  VoronoiData::standard(n);  // build once before the parallel region
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < xs.size(); i++) out[i] = reduce(n, xs[i]);
  return out;
}

void oracle_cache_clear() {
  std::lock_guard<std::mutex> lock(cache_mu);
  cache.clear();
}

size_t oracle_cache_size() {
  std::lock_guard<std::mutex> lock(cache_mu);
  return cache.size();
}

bool VoronoiAmbientFan::in_support(const QVec& x) const {
  return !is_zero(x) && is_positive_semidefinite(n_, x);
}

Cone VoronoiAmbientFan::top_cone_at(const QVec& x) const {
  OracleAnswer ans = reduce(n_, x);
  VH_CHECK(ans.component_rank == n_, "InternalError",
           "top_cone_at needs a full-rank point");
  const VoronoiData& d = VoronoiData::standard(n_);
  std::vector<IVec> rays;
  for (const auto& c : d.cusps())
    rays.push_back(primitive(rank_one_form(act_on_cusp(ans.gamma, c))));
  Cone top(rays);
  {
    std::lock_guard<std::mutex> lock(mu_);
    tops_.emplace(top, ans.gamma);
  }
  return top;
}

IMat VoronoiAmbientFan::top_certificate(const Cone& top) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = tops_.find(top);
    if (it != tops_.end()) return it->second;
  }
  // recover: match the standard cusps onto the top's cusps
  const VoronoiData& d = VoronoiData::standard(n_);
  std::vector<IVec> cusps;
  for (const auto& r : top.rays) {
    // each ray is q(v) for a primitive v: recover v as a generator of the
    // column space
    QVec x = to_qvec(r);
    Classification cls = classify_point(n_, x);
    VH_CHECK(cls.component && cls.component->rank() == 1, "InternalError",
             "top cone ray is not a cusp");
    IVec v(n_);
    for (size_t i = 0; i < n_; i++) v[i] = cls.component->basis(i, 0);
    cusps.push_back(sign_normalize(v));
  }
  auto isos = cusp_cone_equivalences(d.cusps(), cusps, {n_, 1});
  VH_CHECK(!isos.empty(), "InternalError", "not a top cone of the Voronoi fan");
  std::lock_guard<std::mutex> lock(mu_);
  tops_.emplace(top, isos.front());
  return isos.front();
}

std::vector<Cone> VoronoiAmbientFan::top_neighbors(const Cone& top) const {
  IMat gamma = top_certificate(top);
  const VoronoiData& d = VoronoiData::standard(n_);
  std::vector<Cone> out;
  for (const auto& cert : d.neighbor_certs()) {
    IMat g = mul(gamma, cert);
    std::vector<IVec> rays;
    for (const auto& c : d.cusps())
      rays.push_back(primitive(rank_one_form(act_on_cusp(g, c))));
    Cone nb(rays);
    {
      std::lock_guard<std::mutex> lock(mu_);
      tops_.emplace(nb, g);
    }
    out.push_back(nb);
  }
  return out;
}

Cone VoronoiAmbientFan::smallest_cone_at(const QVec& x) const {
  OracleAnswer ans = reduce(n_, x);
  std::vector<IVec> rays;
  for (const auto& v : ans.cusps) rays.push_back(primitive(rank_one_form(v)));
  return Cone(rays);
}

}  // namespace vh
