#include "vorhecke/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <functional>

namespace vh {

size_t sym_index(size_t n, size_t i, size_t j) {
  if (i > j) std::swap(i, j);
  // row-major upper triangle
  return i * n - i * (i - 1) / 2 + (j - i);
}

QMat sym_to_matrix(size_t n, const QVec& x) {
  VH_CHECK(x.size() == sym_dim(n), "BadShape", "form coordinate size mismatch");
  QMat m(n, n);
  for (size_t i = 0; i < n; i++)
    for (size_t j = i; j < n; j++) m(i, j) = m(j, i) = x[sym_index(n, i, j)];
  return m;
}

QVec sym_from_matrix(const QMat& m) {
  size_t n = m.rows();
  QVec x(sym_dim(n));
  for (size_t i = 0; i < n; i++)
    for (size_t j = i; j < n; j++) {
      VH_CHECK(m(i, j) == m(j, i), "NotSymmetric", "matrix is not symmetric");
      x[sym_index(n, i, j)] = m(i, j);
    }
  return x;
}

QVec rank_one_form(const IVec& v) {
  VH_CHECK(!is_zero(v), "ZeroVector", "rank_one_form of zero vector");
  size_t n = v.size();
  QVec x(sym_dim(n));
  for (size_t i = 0; i < n; i++)
    for (size_t j = i; j < n; j++) x[sym_index(n, i, j)] = Rat(v[i] * v[j]);
  return x;
}

size_t form_rank(size_t n, const QVec& x) { return rank(sym_to_matrix(n, x)); }

// psd test via all principal minors >= 0 (n <= 3 so this is cheap)
bool is_positive_semidefinite(size_t n, const QVec& x) {
  QMat m = sym_to_matrix(n, x);
  for (uint32_t mask = 1; mask < (1u << n); mask++) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < n; i++)
      if (mask & (1u << i)) idx.push_back(i);
    QMat sub(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); i++)
      for (size_t j = 0; j < idx.size(); j++) sub(i, j) = m(idx[i], idx[j]);
    if (det(sub) < 0) return false;
  }
  return true;
}

bool is_positive_definite(size_t n, const QVec& x) {
  QMat m = sym_to_matrix(n, x);
  // Sylvester: leading principal minors > 0
  for (size_t k = 1; k <= n; k++) {
    QMat sub(k, k);
    for (size_t i = 0; i < k; i++)
      for (size_t j = 0; j < k; j++) sub(i, j) = m(i, j);
    if (det(sub) <= 0) return false;
  }
  return true;
}

QVec group_action(const QMat& g, const QVec& x) {
  size_t n = g.rows();
  VH_CHECK(det(g) != 0, "SingularMatrix", "group action by singular matrix");
  QMat m = sym_to_matrix(n, x);
  return sym_from_matrix(mul(mul(g, m), g.transpose()));
}

QVec group_action(const IMat& g, const QVec& x) { return group_action(to_qmat(g), x); }

IVec act_on_cusp(const IMat& g, const IVec& v) {
  return sign_normalize(primitive(mul(g, v)));
}

PointedCone act_on_pointed(const IMat& g, const PointedCone& pc) {
  std::vector<QVec> gens;
  gens.reserve(pc.gens.size());
  QMat gq = to_qmat(g);
  for (const auto& x : pc.gens) gens.push_back(group_action(gq, x));
  return PointedCone(gens);
}

// saturated basis of the column space of a psd form, as columns
static IMat support_lattice_basis(size_t n, const QVec& x) {
  QMat m = sym_to_matrix(n, x);
  Int l = 1;
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) l = lcm(l, m(i, j).get_den());
  IMat mi(n, n);
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) {
      Rat t = m(i, j) * Rat(l);
      mi(i, j) = t.get_num();
    }
  // col(x) = (ker x)^perp for symmetric psd; both are rational
  IMat kern = integer_kernel(mi);    // rows span ker
  IMat perp = integer_kernel(kern);  // rows span col(x) cap Z^n, saturated
  return perp.transpose();
}

Classification classify_point(size_t n, const QVec& x) {
  if (is_zero(x) || !is_positive_semidefinite(n, x)) return {PointClass::Outside, {}};
  if (is_positive_definite(n, x)) return {PointClass::Interior, {}};
  BoundaryComponent c;
  c.n = n;
  c.basis = support_lattice_basis(n, x);
  return {PointClass::ProperBoundary, c};
}

size_t q_rank(size_t n, const QVec& x) {
  VH_CHECK(!is_zero(x) && is_positive_semidefinite(n, x), "OutsideCone",
           "q_rank of a point outside the closed cone");
  return form_rank(n, x);
}

bool gamma0_membership(const IMat& g, const ArithmeticGroup& grp) {
  if (g.rows() != grp.n || g.cols() != grp.n) return false;
  if (det(g) != 1) return false;
  for (size_t i = 1; i < grp.n; i++)
    if (g(i, 0) % grp.level != 0) return false;
  return true;
}

// ---- standard Voronoi data -------------------------------------------------

namespace {

std::vector<IVec> standard_cusps(size_t n) {
  std::vector<IVec> cusps;
  if (n == 2) {
    cusps = {{1, 0}, {0, 1}, {1, 1}};
  } else if (n == 3) {
    cusps = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, -1, 0}, {1, 0, -1}, {0, 1, -1}};
  } else {
    throw Error("UnsupportedRank", "standard Voronoi data exists for n = 2, 3 only");
  }
  return cusps;
}

}  // namespace

VoronoiData build_voronoi_data(size_t n);

VoronoiData build_voronoi_data(size_t n) {
  VoronoiData d;
  d.n_ = n;
  d.cusps_ = standard_cusps(n);
  size_t dim = sym_dim(n);
  VH_CHECK(d.cusps_.size() == dim, "InternalError", "standard cusp count mismatch");
  for (const auto& v : d.cusps_) d.rays_.push_back(rank_one_form(v));

  // the spanning rays must be linearly independent (simplicial top cone)
  QMat raymat(dim, dim);
  for (size_t j = 0; j < dim; j++)
    for (size_t i = 0; i < dim; i++) raymat(i, j) = d.rays_[j][i];
  VH_CHECK(rank(raymat) == dim, "InternalError", "standard cusps are dependent");
  d.coords_ = inverse(raymat);

  // neighbor certificates: for facet i (drop ray i), find the fan cone on
  // the other side and a group element carrying the standard cone onto it
  ArithmeticGroup full{n, 1};
  for (size_t i = 0; i < dim; i++) {
    std::optional<IMat> cert;
    std::vector<IVec> cand;
    IVec cur(n, Int(0));
    std::function<void(size_t)> gen = [&](size_t k) {
      if (k == n) {
        if (is_zero(cur)) return;
        cand.push_back(sign_normalize(primitive(cur)));
        return;
      }
      for (long t = -2; t <= 2; t++) {
        cur[k] = t;
        gen(k + 1);
      }
    };
    gen(0);
    std::sort(cand.begin(), cand.end(), LexLess{});
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    for (const auto& w : cand) {
      std::vector<IVec> cusps2;
      for (size_t j = 0; j < dim; j++)
        if (j != i) cusps2.push_back(d.cusps_[j]);
      bool dup = w == sign_normalize(d.cusps_[i]);
      for (const auto& c : cusps2)
        if (w == sign_normalize(c)) dup = true;
      if (dup) continue;
      // must lie strictly on the other side of wall i
      QVec coords = mul(d.coords_, rank_one_form(w));
      if (coords[i] >= 0) continue;
      cusps2.push_back(w);
      auto isos = cusp_cone_equivalences(d.cusps_, cusps2, full);
      if (!isos.empty()) {
        cert = isos.front();
        break;
      }
    }
    VH_CHECK(cert.has_value(), "InternalError", "no neighbor certificate found for facet");
    d.certs_.push_back(*cert);
  }

  // verification: each certificate maps the standard cone to a distinct top
  // cone sharing exactly facet i
  for (size_t i = 0; i < dim; i++) {
    std::vector<IVec> image;
    for (const auto& v : d.cusps_) image.push_back(act_on_cusp(d.certs_[i], v));
    std::sort(image.begin(), image.end(), LexLess{});
    std::vector<IVec> mine;
    for (const auto& v : d.cusps_) mine.push_back(sign_normalize(v));
    std::sort(mine.begin(), mine.end(), LexLess{});
    VH_CHECK(image != mine, "InternalError", "neighbor certificate fixes the standard cone");
    std::vector<IVec> shared;
    std::set_intersection(image.begin(), image.end(), mine.begin(), mine.end(),
                          std::back_inserter(shared), LexLess{});
    VH_CHECK(shared.size() == dim - 1, "InternalError", "facet not shared exactly");
    for (const auto& v : shared)
      VH_CHECK(v != sign_normalize(d.cusps_[i]), "InternalError", "wrong facet shared");
  }
  return d;
}

const VoronoiData& VoronoiData::standard(size_t n) {
  VH_CHECK(n == 2 || n == 3, "UnsupportedRank", "n must be 2 or 3");
  static std::mutex mu;
  static std::map<size_t, VoronoiData> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_voronoi_data(n)).first;
  return it->second;
}

Cone VoronoiData::standard_cone() const {
  std::vector<IVec> rays;
  for (const auto& r : rays_) rays.push_back(primitive(r));
  return Cone(rays);
}

QVec VoronoiData::base_point() const {
  QVec p(dim(), Rat(0));
  for (const auto& r : rays_) p = add(p, r);
  return p;
}

BoundaryVoronoi pi_face_in_boundary(const BoundaryComponent& c) {
  BoundaryVoronoi out;
  out.component = c;
  out.inner = c.rank() >= 2 ? &VoronoiData::standard(c.rank()) : nullptr;
  return out;
}

// ---- equivalences and canonical representatives ----------------------------

std::vector<IMat> cusp_cone_equivalences(const std::vector<IVec>& from,
                                         const std::vector<IVec>& to,
                                         const ArithmeticGroup& grp) {
  std::vector<IMat> out;
  if (from.size() != to.size() || from.empty()) return out;
  size_t n = grp.n;

  // a basis among `from`
  std::vector<size_t> bidx;
  {
    std::vector<QVec> cols;
    for (size_t i = 0; i < from.size() && bidx.size() < n; i++) {
      cols.push_back(to_qvec(from[i]));
      QMat t(n, cols.size());
      for (size_t j = 0; j < cols.size(); j++)
        for (size_t k = 0; k < n; k++) t(k, j) = cols[j][k];
      if (rank(t) == cols.size())
        bidx.push_back(i);
      else
        cols.pop_back();
    }
    if (bidx.size() < n) return out;  // not full rank: not handled here
  }

  QMat vbase(n, n);
  for (size_t j = 0; j < n; j++)
    for (size_t k = 0; k < n; k++) vbase(k, j) = Rat(from[bidx[j]][k]);
  QMat vbase_inv = inverse(vbase);

  std::vector<IVec> to_sorted;
  for (const auto& v : to) to_sorted.push_back(sign_normalize(v));
  std::sort(to_sorted.begin(), to_sorted.end(), LexLess{});
  to_sorted.erase(std::unique(to_sorted.begin(), to_sorted.end()), to_sorted.end());

  std::vector<size_t> sel(n);
  std::vector<int> sgn(n);
  std::set<std::vector<Int>> seen;
  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == n) {
      QMat w(n, n);
      for (size_t j = 0; j < n; j++)
        for (size_t t = 0; t < n; t++) w(t, j) = Rat(sgn[j] * to[sel[j]][t]);
      QMat gq = mul(w, vbase_inv);
      IMat g(n, n);
      for (size_t i2 = 0; i2 < n; i2++)
        for (size_t j2 = 0; j2 < n; j2++) {
          if (gq(i2, j2).get_den() != 1) return;
          g(i2, j2) = gq(i2, j2).get_num();
        }
      Int d = det(g);
      if (d != 1 && d != -1) return;
      if (d == -1) {
        if (n % 2 == 0) return;  // -g also has det -1
        for (size_t i2 = 0; i2 < n; i2++)
          for (size_t j2 = 0; j2 < n; j2++) g(i2, j2) = -g(i2, j2);
      }
      if (!gamma0_membership(g, grp)) {
        if (n % 2 == 0) {
          IMat gm(n, n);
          for (size_t i2 = 0; i2 < n; i2++)
            for (size_t j2 = 0; j2 < n; j2++) gm(i2, j2) = -g(i2, j2);
          if (!gamma0_membership(gm, grp)) return;
          g = gm;
        } else {
          return;
        }
      }
      // g and -g act identically; dedupe by sign-normalized key
      std::vector<Int> key;
      {
        IMat gn = g;
        for (size_t i2 = 0; i2 < n * n; i2++) {
          const Int& e = gn(i2 / n, i2 % n);
          if (e == 0) continue;
          if (e < 0)
            for (size_t a = 0; a < n; a++)
              for (size_t b = 0; b < n; b++) gn(a, b) = -gn(a, b);
          break;
        }
        for (size_t i2 = 0; i2 < n; i2++)
          for (size_t j2 = 0; j2 < n; j2++) key.push_back(gn(i2, j2));
      }
      if (seen.count(key)) return;
      std::vector<IVec> image;
      for (const auto& v : from) image.push_back(act_on_cusp(g, v));
      std::sort(image.begin(), image.end(), LexLess{});
      image.erase(std::unique(image.begin(), image.end()), image.end());
      if (image != to_sorted) return;
      seen.insert(key);
      out.push_back(g);
      return;
    }
    for (size_t i = 0; i < to.size(); i++) {
      bool used = false;
      for (size_t j = 0; j < k; j++)
        if (sel[j] == i) used = true;
      if (used) continue;
      sel[k] = i;
      for (int s : {1, -1}) {
        sgn[k] = s;
        rec(k + 1);
      }
    }
  };
  rec(0);
  return out;
}

OrbitIndex::Entry OrbitIndex::canonical(const std::vector<IVec>& cusps) {
  std::vector<IVec> sorted = cusps;
  for (auto& v : sorted) v = sign_normalize(primitive(v));
  std::sort(sorted.begin(), sorted.end(), LexLess{});
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  // bucket key: size plus the multiset of |det| over n-subsets (SL-invariant)
  size_t n = grp_.n;
  std::vector<Int> dets;
  std::vector<size_t> sel;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (sel.size() == n) {
      IMat m(n, n);
      for (size_t j = 0; j < n; j++)
        for (size_t i = 0; i < n; i++) m(i, j) = sorted[sel[j]][i];
      dets.push_back(abs(det(m)));
      return;
    }
    for (size_t i = start; i < sorted.size(); i++) {
      sel.push_back(i);
      rec(i + 1);
      sel.pop_back();
    }
  };
  if (sorted.size() >= n) rec(0);
  std::sort(dets.begin(), dets.end());
  std::ostringstream key;
  key << sorted.size() << "|";
  for (const auto& g : dets) key << g.get_str() << ",";

  auto& bucket = buckets_[key.str()];
  for (const auto& rep : bucket) {
    auto isos = cusp_cone_equivalences(sorted, rep, grp_);
    if (!isos.empty()) {
      std::vector<IVec> rays;
      for (const auto& v : rep) rays.push_back(primitive(rank_one_form(v)));
      return {Cone(rays), isos.front()};
    }
  }
  bucket.push_back(sorted);
  std::vector<IVec> rays;
  for (const auto& v : sorted) rays.push_back(primitive(rank_one_form(v)));
  return {Cone(rays), IMat::identity(grp_.n)};
}

// ---- coset enumeration ------------------------------------------------------

IVec normalize_projective_point(const IVec& v, long modulus) {
  Int mod(modulus);
  size_t n = v.size();
  std::vector<long> units;
  for (long u = 1; u < modulus; u++)
    if (std::gcd(u, modulus) == 1) units.push_back(u);
  if (units.empty()) units = {1};
  std::optional<IVec> best;
  for (long u : units) {
    IVec w(n);
    for (size_t i = 0; i < n; i++) {
      Int t = (v[i] * u) % mod;
      if (t < 0) t += mod;
      w[i] = t;
    }
    if (!best || lex_cmp(w, *best) < 0) best = w;
  }
  return *best;
}

size_t CosetTable::label_of(const IMat& g) const {
  IMat gi = inverse_unimodular(g);
  IVec col(grp.n);
  for (size_t i = 0; i < grp.n; i++) col[i] = gi(i, 0);
  IVec p = normalize_projective_point(col, grp.level);
  auto it = std::lower_bound(points.begin(), points.end(), p, LexLess{});
  VH_CHECK(it != points.end() && *it == p, "InternalError", "coset label not found");
  return static_cast<size_t>(it - points.begin());
}

CosetTable enumerate_cosets(const ArithmeticGroup& grp) {
  size_t n = grp.n;
  long nn = grp.level;
  CosetTable t;
  t.grp = grp;

  std::set<IVec, LexLess> pts;
  IVec cur(n, Int(0));
  std::function<void(size_t)> gen = [&](size_t k) {
    if (k == n) {
      Int g = Int(nn);
      for (const auto& x : cur) g = gcd(g, x);
      if (g == 1 || nn == 1) pts.insert(normalize_projective_point(cur, nn));
      return;
    }
    for (long v = 0; v < std::max(nn, 1L); v++) {
      cur[k] = v;
      gen(k + 1);
    }
  };
  gen(0);
  t.points.assign(pts.begin(), pts.end());

  // BFS over elementary generators to find lifts for every label
  std::vector<IMat> gens;
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) {
      if (i == j) continue;
      for (int s : {1, -1}) {
        IMat e = IMat::identity(n);
        e(i, j) = s;
        gens.push_back(e);
      }
    }
  t.lifts.assign(t.points.size(), IMat());
  std::vector<bool> have(t.points.size(), false);
  std::deque<IMat> frontier;
  IMat id = IMat::identity(n);
  size_t found = 0;
  size_t lbl = t.label_of(id);
  t.lifts[lbl] = id;
  have[lbl] = true;
  found++;
  frontier.push_back(id);
  size_t guard = 0;
  while (!frontier.empty() && found < t.points.size()) {
    VH_CHECK(++guard < 2000000, "InternalError", "coset BFS did not terminate");
    IMat g = frontier.front();
    frontier.pop_front();
    for (const auto& e : gens) {
      IMat h = mul(e, g);
      bool big = false;
      for (size_t i = 0; i < n && !big; i++)
        for (size_t j = 0; j < n; j++)
          if (abs(h(i, j)) > 4 * nn + 4) {
            big = true;
            break;
          }
      if (big) continue;
      size_t l = t.label_of(h);
      if (!have[l]) {
        have[l] = true;
        t.lifts[l] = h;
        found++;
        if (found == t.points.size()) break;
      }
      frontier.push_back(h);
    }
  }
  VH_CHECK(found == t.points.size(), "InternalError", "coset enumeration incomplete");
  return t;
}

}  // namespace vh
