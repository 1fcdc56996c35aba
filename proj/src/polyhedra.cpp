#include "vorhecke/polyhedra.hpp"

#include <algorithm>
#include <cstdint>

namespace vh {

namespace {

// Ray in the incremental double-description state, with the set of processed
// inequalities tight at it.
struct DDRay {
  QVec v;
  uint64_t tight = 0;
};

QVec normalize_ray(const QVec& v) { return to_qvec(primitive(v)); }

}  // namespace

std::vector<IVec> rays_from_hrep(const ConeHRep& h, size_t dim) {
  // Restrict to the equality subspace first.
  QMat basis;  // columns span ker(eqs)
  size_t k;
  if (h.eqs.empty()) {
    basis = QMat::identity(dim);
    k = dim;
  } else {
    QMat e(h.eqs.size(), dim);
    for (size_t i = 0; i < h.eqs.size(); i++)
      for (size_t j = 0; j < dim; j++) e(i, j) = h.eqs[i][j];
    basis = kernel(e);
    k = basis.cols();
  }
  if (k == 0) return {};

  // Inequalities in subspace coordinates.
  std::vector<QVec> ineq;
  for (const auto& a : h.ineqs) {
    QVec b(k, Rat(0));
    for (size_t j = 0; j < k; j++)
      for (size_t i = 0; i < dim; i++) b[j] += a[i] * basis(i, j);
    if (!is_zero(b)) ineq.push_back(b);
  }
  VH_CHECK(ineq.size() <= 64, "TooManyFacets", "double description limited to 64 inequalities");

  // Incremental DD with explicit lineality tracking.
  std::vector<QVec> lin;
  for (size_t i = 0; i < k; i++) {
    QVec u(k, Rat(0));
    u[i] = 1;
    lin.push_back(u);
  }
  std::vector<DDRay> rays;

  for (size_t ai = 0; ai < ineq.size(); ai++) {
    const QVec& a = ineq[ai];
    // Does a cut the lineality space?
    size_t li = lin.size();
    for (size_t i = 0; i < lin.size(); i++)
      if (dot(a, lin[i]) != 0) {
        li = i;
        break;
      }
    if (li < lin.size()) {
      QVec l0 = lin[li];
      Rat al0 = dot(a, l0);
      if (al0 < 0) {
        for (auto& x : l0) x = -x;
        al0 = -al0;
      }
      std::vector<QVec> nl;
      for (size_t i = 0; i < lin.size(); i++) {
        if (i == li) continue;
        nl.push_back(sub(lin[i], scale(dot(a, lin[i]) / al0, l0)));
      }
      lin = nl;
      std::vector<DDRay> kept;
      for (auto& r : rays) {
        Rat ar = dot(a, r.v);
        if (ar != 0) r.v = sub(r.v, scale(ar / al0, l0));
        if (is_zero(r.v)) continue;
        r.v = normalize_ray(r.v);
        r.tight = 0;
        for (size_t bi = 0; bi <= ai; bi++)
          if (dot(ineq[bi], r.v) == 0) r.tight |= (1ULL << bi);
        kept.push_back(r);
      }
      rays = kept;
      DDRay nr;
      nr.v = normalize_ray(l0);
      nr.tight = 0;
      for (size_t bi = 0; bi <= ai; bi++)
        if (dot(ineq[bi], nr.v) == 0) nr.tight |= (1ULL << bi);
      rays.push_back(nr);
      // dedupe by direction
      std::sort(rays.begin(), rays.end(),
                [](const DDRay& x, const DDRay& y) { return lex_cmp(x.v, y.v) < 0; });
      rays.erase(std::unique(rays.begin(), rays.end(),
                             [](const DDRay& x, const DDRay& y) { return x.v == y.v; }),
                 rays.end());
      continue;
    }

    // Standard DD step.
    std::vector<DDRay> pos, zero, neg;
    for (auto& r : rays) {
      int s = sgn(dot(a, r.v));
      if (s > 0)
        pos.push_back(r);
      else if (s == 0) {
        r.tight |= (1ULL << ai);
        zero.push_back(r);
      } else
        neg.push_back(r);
    }
    std::vector<DDRay> next = pos;
    for (const auto& z : zero) next.push_back(z);
    for (const auto& p : pos)
      for (const auto& m : neg) {
        // adjacency: no other ray is tight on a superset of the common set
        uint64_t common = p.tight & m.tight;
        bool adjacent = true;
        for (const auto& r : rays) {
          if (&r == &p || r.v == p.v || r.v == m.v) continue;
          if ((r.tight & common) == common) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Rat ap = dot(a, p.v), am = dot(a, m.v);
        QVec w = sub(scale(ap, m.v), scale(am, p.v));  // <a,w> = 0, positive combo
        DDRay nr;
        nr.v = normalize_ray(w);
        nr.tight = 0;
        for (size_t bi = 0; bi <= ai; bi++)
          if (dot(ineq[bi], nr.v) == 0) nr.tight |= (1ULL << bi);
        next.push_back(nr);
      }
    std::sort(next.begin(), next.end(),
              [](const DDRay& x, const DDRay& y) { return lex_cmp(x.v, y.v) < 0; });
    next.erase(std::unique(next.begin(), next.end(),
                           [](const DDRay& x, const DDRay& y) { return x.v == y.v; }),
               next.end());
    rays = next;
  }

  if (!lin.empty()) throw Error("NotPointed", "cone contains a line");
  std::vector<IVec> out;
  for (const auto& r : rays) {
    QVec amb(dim, Rat(0));
    for (size_t i = 0; i < dim; i++)
      for (size_t j = 0; j < k; j++) amb[i] += basis(i, j) * r.v[j];
    out.push_back(primitive(amb));
  }
  std::sort(out.begin(), out.end(), LexLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ConeHRep cone_hrep(const std::vector<QVec>& gens) {
  VH_CHECK(!gens.empty(), "EmptyCone", "cone_hrep of empty generator list");
  size_t dim = gens[0].size();
  ConeHRep out;

  // Span equations: rational kernel of the matrix with generator rows.
  QMat g(gens.size(), dim);
  for (size_t i = 0; i < gens.size(); i++)
    for (size_t j = 0; j < dim; j++) g(i, j) = gens[i][j];
  QMat kern = kernel(g);  // functionals vanishing on all generators
  for (size_t c = 0; c < kern.cols(); c++) {
    QVec e(dim);
    for (size_t i = 0; i < dim; i++) e[i] = kern(i, c);
    out.eqs.push_back(to_qvec(primitive(e)));
  }

  // Facet inequalities: extreme rays of the dual cone within the span.
  ConeHRep dual;
  for (const auto& gen : gens) dual.ineqs.push_back(gen);
  dual.eqs = out.eqs;  // dual rays taken inside the span, identified via the
                       // standard inner product
  std::vector<IVec> normals = rays_from_hrep(dual, dim);
  for (const auto& nv : normals) out.ineqs.push_back(to_qvec(nv));
  return out;
}

bool hrep_contains(const ConeHRep& h, const QVec& x) {
  for (const auto& e : h.eqs)
    if (dot(e, x) != 0) return false;
  for (const auto& a : h.ineqs)
    if (dot(a, x) < 0) return false;
  return true;
}

std::vector<IVec> cone_extreme_rays(const std::vector<QVec>& gens) {
  std::vector<QVec> nz;
  for (const auto& g : gens) {
    VH_CHECK(!is_zero(g), "ZeroVector", "zero generator in cone");
    nz.push_back(g);
  }
  // Fast path: linearly independent generators span a simplicial cone.
  {
    QMat m(nz[0].size(), nz.size());
    for (size_t j = 0; j < nz.size(); j++)
      for (size_t i = 0; i < nz[0].size(); i++) m(i, j) = nz[j][i];
    if (rank(m) == nz.size()) {
      std::vector<IVec> out;
      for (const auto& g : nz) out.push_back(primitive(g));
      std::sort(out.begin(), out.end(), LexLess{});
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
  }
  return rays_from_hrep(cone_hrep(nz), nz[0].size());
}

std::vector<std::vector<IVec>> cone_facets(const std::vector<IVec>& rays) {
  VH_CHECK(!rays.empty(), "EmptyCone", "facets of empty cone");
  std::vector<QVec> gens;
  for (const auto& r : rays) gens.push_back(to_qvec(r));
  ConeHRep h = cone_hrep(gens);
  std::vector<std::vector<IVec>> out;
  for (const auto& a : h.ineqs) {
    std::vector<IVec> f;
    for (const auto& r : rays)
      if (dot(a, to_qvec(r)) == 0) f.push_back(r);
    if (!f.empty()) out.push_back(f);
  }
  return out;
}

}  // namespace vh
