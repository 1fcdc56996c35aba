#include "vorhecke/reduction.hpp"

#include <algorithm>
#include <functional>

namespace vh {

// ---- Ash-Rudolph -------------------------------------------------------------

namespace {

// primitive spanning vectors of a cuspidal term, in tuple order
std::vector<IVec> term_cusps(size_t n, const Tuple& t) {
  std::vector<IVec> out;
  for (const auto& p : t) {
    auto v = cusp_vector_of_point(n, p);
    VH_CHECK(v.has_value(), "NotCuspidal", "term point is not on a cusp ray");
    out.push_back(*v);
  }
  return out;
}

Int tuple_det(const std::vector<IVec>& vs) {
  size_t n = vs[0].size();
  VH_CHECK(vs.size() == n, "BadShape", "determinant of a non-square tuple");
  IMat m(n, n);
  for (size_t j = 0; j < n; j++)
    for (size_t i = 0; i < n; i++) m(i, j) = vs[j][i];
  return det(m);
}

}  // namespace

Chain ash_rudolph_reduce(const Chain& xi, const ArithmeticGroup& grp,
                         ReductionStats* stats) {
  size_t n = grp.n;
  VH_CHECK(xi.degree() + 1 == static_cast<int>(n), "DegreeMismatch",
           "modular-symbol reduction needs degree n-1 chains");
  // worklist by recursion level; equal symbols merge through Chain addition
  Chain level = xi;
  Chain out(xi.degree());
  size_t guard = 0;
  while (!level.empty()) {
    VH_CHECK(++guard < 64, "InternalError", "determinant reduction failed to terminate");
    Chain next(xi.degree());
    Int level_max = 0;
    for (const auto& [t, c] : level.terms()) {
      std::vector<IVec> vs = term_cusps(n, t);
      Int d = tuple_det(vs);
      if (d == 0) continue;  // zero symbol
      if (d == 1 || d == -1) {
        Tuple unimod;
        for (const auto& v : vs) unimod.push_back(rank_one_form(v));
        out.add_term(unimod, c);
        continue;
      }
      if (cmp(abs(d), level_max) > 0) level_max = abs(d);
      // w = e_j - V round(V^{-1} e_j) for the first e_j outside the lattice;
      // rounding to nearest halves every child determinant
      QMat vm(n, n);
      for (size_t j = 0; j < n; j++)
        for (size_t i = 0; i < n; i++) vm(i, j) = Rat(vs[j][i]);
      QMat vinv = inverse(vm);
      std::optional<IVec> w;
      for (size_t j = 0; j < n && !w; j++) {
        QVec col(n);
        for (size_t i = 0; i < n; i++) col[i] = vinv(i, j);
        bool integral = true;
        for (const auto& x : col)
          if (x.get_den() != 1) integral = false;
        if (integral) continue;
        IVec cand(n, Int(0));
        cand[j] = 1;
        for (size_t i = 0; i < n; i++) {
          // round to nearest: floor(x + 1/2)
          Int num = col[i].get_num(), den = col[i].get_den();
          Int twice = 2 * num + den, den2 = 2 * den, r;
          mpz_fdiv_q(r.get_mpz_t(), twice.get_mpz_t(), den2.get_mpz_t());
          for (size_t k = 0; k < n; k++) cand[k] -= r * vs[i][k];
        }
        VH_CHECK(!is_zero(cand), "InternalError", "euclidean pivot is zero");
        w = sign_normalize(primitive(cand));
      }
      VH_CHECK(w.has_value(), "InternalError", "unimodular tuple expanded");
      for (size_t i = 0; i < n; i++) {
        std::vector<IVec> child = {*w};
        for (size_t j = 0; j < n; j++)
          if (j != i) child.push_back(vs[j]);
        Int cd = tuple_det(child);
        if (cd == 0) continue;
        VH_CHECK(cmp(abs(cd), abs(d)) < 0, "InternalError",
                 "child determinant did not decrease");
        Tuple pts;
        for (const auto& v : child) pts.push_back(rank_one_form(v));
        next.add_term(pts, (i % 2 == 0) ? c : -c);
      }
    }
    if (stats && level_max != 0) stats->ar_level_max_det.push_back(level_max);
    level = next;
  }
  return out;
}

// ---- canonical fan and the first algorithm -----------------------------------

TaggedFan canonical_fan_refined(const PointedCone& sigma, size_t n) {
  VoronoiAmbientFan amb(n);
  CanonicalFan cf = intersect_cone_with_fan(sigma, amb);
  TaggedFan out{simplicial_refine_no_new_rays(cf.fan), {}};
  // refined cells keep the 1-skeleton; recompute the inducing tags
  for (const auto& c : out.fan.cones()) {
    QVec p(amb.ambient(), Rat(0));
    for (const auto& r : c.rays) p = add(p, to_qvec(r));
    out.inducing[c] = amb.smallest_cone_at(p);
  }
  // no new 1-cones against the unrefined canonical fan
  for (const auto& c : out.fan.cones_of_nrays(1))
    VH_CHECK(cf.fan.contains(c), "InternalError", "refinement added a ray");
  return out;
}

namespace {

// cusp selection for a 1-cone rho (Thm 1 step 2): the lex-smallest cusp of
// the inducing Voronoi cone lying in the smallest boundary component of rho
IVec select_cusp(size_t n, const Cone& rho, const Cone& inducing) {
  QVec gen = to_qvec(rho.rays[0]);
  Classification cls = classify_point(n, gen);
  std::optional<IVec> best;
  for (const auto& ray : inducing.rays) {
    auto w = cusp_vector_of_point(n, to_qvec(ray));
    VH_CHECK(w.has_value(), "InternalError", "Voronoi cone ray is not a cusp");
    if (cls.cls == PointClass::ProperBoundary) {
      // w must lie in the component's support sublattice
      const IMat& b = cls.component->basis;
      QMat bq = to_qmat(b);
      QVec wq = to_qvec(*w);
      auto sol = solve(bq, wq);
      if (!sol) continue;
    }
    if (!best || lex_cmp(*w, *best) < 0) best = *w;
  }
  VH_CHECK(best.has_value(), "CuspSelectionFailure",
           "no admissible cusp on the inducing Voronoi cone");
  return *best;
}

// order the rays of a 2-cone subdivision along the cone (n = 2 witness mode)
std::vector<Cone> rays_in_cone_order(const Fan& f, const Tuple& term) {
  std::vector<std::pair<Rat, Cone>> keyed;
  QMat base(term[0].size(), 2);
  for (size_t j = 0; j < 2; j++)
    for (size_t i = 0; i < term[0].size(); i++) base(i, j) = term[j][i];
  for (const auto& r : f.cones_of_nrays(1)) {
    auto c = solve(base, to_qvec(r.rays[0]));
    VH_CHECK(c.has_value(), "InternalError", "subdivision ray outside the span");
    VH_CHECK((*c)[0] >= 0 && (*c)[1] >= 0, "InternalError", "ray outside the cone");
    // sort by the angle surrogate b/(a+b), increasing from term[0] to term[1]
    Rat key = (*c)[1] / ((*c)[0] + (*c)[1]);
    keyed.push_back({key, r});
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Cone> out;
  for (auto& [k, r] : keyed) out.push_back(r);
  return out;
}

struct TermReduction {
  Chain reduced;
  FreeChain eta;
  FreeChain xi_free;
  FreeChain xiv_free;
};

// Thm 1 on a single cuspidal term (cone full rank); assignments may be
// supplied (equivariant mode) or chosen by the deterministic rule
TermReduction reduce_term_alg1(size_t n, const Tuple& t, const Int& coeff,
                               const TaggedFan& f,
                               const std::map<Cone, IVec>& assignment, bool witness) {
  TermReduction out;
  out.reduced = Chain(static_cast<int>(t.size()) - 1);
  out.eta = FreeChain(static_cast<int>(t.size()));
  out.xi_free = FreeChain(static_cast<int>(t.size()) - 1);
  out.xiv_free = FreeChain(static_cast<int>(t.size()) - 1);
  size_t k1 = t.size();  // cone dimension

  for (const auto& cell : f.fan.cones_of_nrays(k1)) {
    // tuple of ray representatives in the cell, then the chosen cusps in the
    // same order
    Tuple rays;
    Tuple ys;
    for (const auto& r : cell.rays) {
      rays.push_back(to_qvec(r));
      ys.push_back(rank_one_form(assignment.at(Cone({r}))));
    }
    int s = sign_rel(t, rays);
    VH_CHECK(s != 0, "OrientationFailure", "degenerate cell orientation");
    out.reduced.add_term(ys, coeff * s);
  }

  if (witness) {
    VH_CHECK(n == 2, "UnsupportedRank", "explicit witness mode is built for n = 2");
    // staircase prism over the subdivided 2-cone, in the free complex (the
    // end cells are degenerate by construction and must be kept):
    //   eta = c ( -sum_j (A, y_j, y_j+1) + (A, B, y_m) )
    // so that d(eta) = c sigma(A,B) - c sum_j sigma(y_j, y_j+1) + mu with
    // mu = c (sigma(B, y_m) - sigma(A, y_0)) supported on the two cusp rays
    std::vector<Cone> ordered = rays_in_cone_order(f.fan, t);
    const QVec& a = t[0];
    const QVec& b = t[1];
    std::vector<QVec> y;
    for (const auto& r : ordered) y.push_back(rank_one_form(assignment.at(r)));
    for (size_t j = 0; j + 1 < y.size(); j++)
      out.eta.add_term({a, y[j], y[j + 1]}, -coeff);
    out.eta.add_term({a, b, y.back()}, coeff);
    out.xi_free.add_term({a, b}, coeff);
    for (size_t j = 0; j + 1 < y.size(); j++)
      out.xiv_free.add_term({y[j], y[j + 1]}, coeff);
  }
  return out;
}

std::map<Cone, IVec> default_assignment(size_t n, const TaggedFan& f) {
  std::map<Cone, IVec> out;
  for (const auto& rho : f.fan.cones_of_nrays(1))
    out[rho] = select_cusp(n, rho, f.inducing.at(rho));
  return out;
}

Alg1Result algorithm1_impl(const Chain& xi, const ArithmeticGroup& grp, Alg1Options opt) {
  size_t n = grp.n;
  Alg1Result res;
  res.reduced = Chain(xi.degree());
  if (opt.witness)
    res.witness = WitnessParts{FreeChain(xi.degree() + 1), FreeChain(xi.degree()),
                               FreeChain(xi.degree()), FreeChain(xi.degree())};

  if (!opt.equivariant) {
    for (const auto& [t, c] : xi.terms()) {
      if (tuple_in_boundary(n, t)) continue;  // zero relative class
      TaggedFan f = canonical_fan_refined(PointedCone(t), n);
      res.stats.cones_visited += f.fan.cones().size();
      auto assignment = default_assignment(n, f);
      TermReduction tr = reduce_term_alg1(n, t, c, f, assignment, opt.witness);
      res.reduced.add(tr.reduced);
      if (opt.witness) {
        res.witness->eta.add(tr.eta);
        res.witness->xi_free.add(tr.xi_free);
        res.witness->xiv_free.add(tr.xiv_free);
      }
    }
  } else {
    // construct fans and cusp choices on orbit representatives, then
    // translate (Thm 2)
    OrbitIndex idx(grp);
    struct RepData {
      Tuple tuple;
      TaggedFan fan;
      std::map<Cone, IVec> assignment;
    };
    std::map<Cone, RepData> reps;
    for (const auto& [t, c] : xi.terms()) {
      if (tuple_in_boundary(n, t)) continue;
      std::vector<IVec> cusps = term_cusps(n, t);
      auto entry = idx.canonical(cusps);
      auto it = reps.find(entry.rep);
      if (it == reps.end()) {
        RepData rd;
        for (const auto& r : entry.rep.rays) rd.tuple.push_back(to_qvec(r));
        rd.fan = canonical_fan_refined(PointedCone(rd.tuple), n);
        rd.assignment = default_assignment(n, rd.fan);
        it = reps.emplace(entry.rep, std::move(rd)).first;
      }
      const RepData& rd = it->second;
      // translate the representative construction by gamma^{-1}
      IMat ginv = inverse_unimodular(entry.certificate);
      QMat gq = to_qmat(ginv);
      TaggedFan local;
      local.fan = Fan(sym_dim(n));
      std::map<Cone, IVec> assignment;
      for (const auto& cell : rd.fan.fan.cones_of_nrays(t.size())) {
        std::vector<IVec> moved;
        for (const auto& r : cell.rays) moved.push_back(primitive(group_action(gq, to_qvec(r))));
        local.fan.insert_simplicial(Cone(moved));
      }
      for (const auto& [rho, v] : rd.assignment) {
        Cone moved(std::vector<IVec>{primitive(group_action(gq, to_qvec(rho.rays[0])))});
        IVec tv = act_on_cusp(ginv, v);
        assignment[moved] = tv;
        res.orbit_pairs.push_back({rho, ginv, moved});
      }
      res.stats.cones_visited += local.fan.cones().size();
      TermReduction tr = reduce_term_alg1(n, t, c, local, assignment, opt.witness);
      res.reduced.add(tr.reduced);
      if (opt.witness) {
        res.witness->eta.add(tr.eta);
        res.witness->xi_free.add(tr.xi_free);
        res.witness->xiv_free.add(tr.xiv_free);
      }
    }
  }

  certify_voronoi_chain(res.reduced, n);
  if (opt.witness) {
    // mu := d(eta) - xi + xi^V in the free complex; every term must be
    // rank-deficient (supported on the Satake boundary)
    FreeChain mu = res.witness->eta.boundary();
    mu.subtract(res.witness->xi_free);
    mu.add(res.witness->xiv_free);
    for (const auto& [t, c] : mu.terms())
      VH_CHECK(tuple_in_boundary(n, t), "InternalError",
               "witness remainder is not rank-deficient");
    res.witness->mu = mu;
  }
  return res;
}

}  // namespace

Alg1Result algorithm1_reduce(const Chain& xi, const ArithmeticGroup& grp, Alg1Options opt) {
  opt.equivariant = false;
  return algorithm1_impl(xi, grp, opt);
}

Alg1Result algorithm1_equivariant(const Chain& xi, const ArithmeticGroup& grp,
                                  Alg1Options opt) {
  opt.equivariant = true;
  return algorithm1_impl(xi, grp, opt);
}

// ---- sufficiently fine machinery ----------------------------------------------

SuffFineCheck check_sufficiently_fine(const Fan& f, size_t n) {
  SuffFineCheck out;
  size_t top = f.max_dim();
  for (const auto& tau : f.cones_of_nrays(top)) {
    std::vector<IVec> common;
    {
      QVec beta = to_qvec(barycenter_ray(tau));
      common = s_of_ray(n, beta);
      std::sort(common.begin(), common.end(), LexLess{});
    }
    for (const auto& r : tau.rays) {
      std::vector<IVec> s = s_of_ray(n, to_qvec(r));
      std::sort(s.begin(), s.end(), LexLess{});
      std::vector<IVec> inter;
      std::set_intersection(common.begin(), common.end(), s.begin(), s.end(),
                            std::back_inserter(inter), LexLess{});
      common = inter;
      if (common.empty()) break;
    }
    if (common.empty()) {
      out.fine = false;
      out.failure = tau;
      out.witness.clear();
      return out;
    }
    out.witness[tau] = common;
  }
  out.fine = true;
  return out;
}

namespace {

// triangulate the slice of a 3-dimensional simplicial cone compatibly with a
// subdivided boundary (points only on the edges), without new rays: walk the
// boundary cycle and ear-clip with exact orientation tests
Fan earclip_extension(const Cone& cell, const Fan& boundary, size_t ambient) {
  // barycentric coordinates with respect to the 3 rays of the cell
  QMat base(ambient, 3);
  for (size_t j = 0; j < 3; j++)
    for (size_t i = 0; i < ambient; i++) base(i, j) = Rat(cell.rays[j][i]);
  struct Pt {
    IVec ray;
    QVec bc;  // barycentric, normalized to sum 1
  };
  std::vector<Pt> pts;
  for (const auto& r : boundary.cones_of_nrays(1)) {
    auto c = solve(base, to_qvec(r.rays[0]));
    VH_CHECK(c.has_value(), "InternalError", "boundary ray outside the cell span");
    Rat s = (*c)[0] + (*c)[1] + (*c)[2];
    pts.push_back({r.rays[0], { (*c)[0] / s, (*c)[1] / s, (*c)[2] / s }});
  }
  // boundary cycle: edge 0->1 (bc[2]=0), then 1->2 (bc[0]=0), then 2->0 (bc[1]=0)
  auto on_edge = [&](const Pt& p, size_t zero) { return p.bc[zero] == 0; };
  std::vector<IVec> cycle;
  auto add_edge = [&](size_t from, size_t to, size_t zero) {
    std::vector<std::pair<Rat, IVec>> seg;
    for (const auto& p : pts) {
      if (!on_edge(p, zero)) continue;
      if (p.bc[from] == 1) continue;  // the corners are added separately
      if (p.bc[to] == 1) continue;
      seg.push_back({p.bc[to], p.ray});
    }
    std::sort(seg.begin(), seg.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    cycle.push_back(cell.rays[from]);
    for (auto& [k, r] : seg) cycle.push_back(r);
  };
  add_edge(0, 1, 2);
  add_edge(1, 2, 0);
  add_edge(2, 0, 1);

  // 2D coordinates for orientation tests
  std::map<IVec, std::pair<Rat, Rat>, LexLess> plane;
  for (const auto& p : pts) plane[p.ray] = {p.bc[1], p.bc[2]};
  auto orient = [&](const IVec& a, const IVec& b, const IVec& c) {
    auto [ax, ay] = plane.at(a);
    auto [bx, by] = plane.at(b);
    auto [cx, cy] = plane.at(c);
    Rat d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  };

  // a chord may not pass through another boundary vertex: every frozen
  // subdivision point must survive as a vertex of the triangulation
  auto on_open_chord = [&](const IVec& q, const IVec& a, const IVec& c) {
    if (q == a || q == c) return false;
    if (orient(a, q, c) != 0) return false;
    auto [ax, ay] = plane.at(a);
    auto [cx, cy] = plane.at(c);
    auto [qx, qy] = plane.at(q);
    Rat lo0 = std::min(ax, cx), hi0 = std::max(ax, cx);
    Rat lo1 = std::min(ay, cy), hi1 = std::max(ay, cy);
    bool in0 = (lo0 < qx && qx < hi0) || (lo0 == hi0 && qx == lo0);
    bool in1 = (lo1 < qy && qy < hi1) || (lo1 == hi1 && qy == lo1);
    return in0 && in1;
  };

  Fan out(ambient);
  std::vector<IVec> poly = cycle;
  size_t guard = 0;
  while (poly.size() > 3) {
    VH_CHECK(++guard < 10000, "InternalError", "ear clipping failed to terminate");
    bool clipped = false;
    for (size_t i = 0; i < poly.size() && !clipped; i++) {
      const IVec& a = poly[(i + poly.size() - 1) % poly.size()];
      const IVec& b = poly[i];
      const IVec& c = poly[(i + 1) % poly.size()];
      if (orient(a, b, c) <= 0) continue;  // reflex or collinear
      bool bad = false;
      for (const auto& q : poly)
        if (!(q == b) && on_open_chord(q, a, c)) {
          bad = true;
          break;
        }
      if (bad) continue;
      out.insert_simplicial(Cone({a, b, c}));
      poly.erase(poly.begin() + i);
      clipped = true;
    }
    VH_CHECK(clipped, "InternalError", "no ear found in a convex polygon");
  }
  if (poly.size() == 3 && orient(poly[0], poly[1], poly[2]) != 0)
    out.insert_simplicial(Cone({poly[0], poly[1], poly[2]}));
  return out;
}

// triangulation of one original cell compatible with the frozen subdivision
// of its proper faces, without new rays
Fan extend_cell(const Cone& cell, const Fan& frozen, size_t ambient) {
  // collect the frozen subdivision restricted to the cell's proper faces
  Fan boundary(ambient);
  std::vector<QVec> gens;
  for (const auto& r : cell.rays) gens.push_back(to_qvec(r));
  ConeHRep h = cone_hrep(gens);
  for (const auto& c : frozen.cones()) {
    bool inside = true;
    bool proper = false;
    for (const auto& r : c.rays) {
      if (!hrep_contains(h, to_qvec(r))) inside = false;
    }
    if (!inside) continue;
    // proper face: some facet inequality tight on the whole cone
    for (const auto& a : h.ineqs) {
      bool tight = true;
      for (const auto& r : c.rays)
        if (dot(a, to_qvec(r)) != 0) tight = false;
      if (tight) proper = true;
    }
    if (proper) boundary.insert_simplicial(c);
  }
  size_t d = cell.nrays();
  if (d <= 2) {
    Fan out(ambient);
    out.insert_simplicial(cell);
    return out;
  }
  if (d == 3) {
    bool refined = false;
    for (const auto& c : boundary.cones_of_nrays(1))
      if (std::find(cell.rays.begin(), cell.rays.end(), c.rays[0]) == cell.rays.end())
        refined = true;
    if (!refined) {
      Fan out(ambient);
      out.insert_simplicial(cell);
      return out;
    }
    return earclip_extension(cell, boundary, ambient);
  }
  throw Error("UnsupportedDimension",
              "constrained extension implemented for cells of dimension <= 3");
}

// the per-representative refinement driver (Thm 3 on a single cone)
struct FineRep {
  Fan fan;
  std::vector<size_t> rounds;
};

FineRep make_fine_single(const Tuple& t, size_t n, size_t cap) {
  size_t ambient = t[0].size();
  size_t top = t.size();
  std::vector<IVec> rays;
  for (const auto& p : t) rays.push_back(primitive(p));
  Cone whole(rays);
  VH_CHECK(whole.nrays() == top, "InternalError", "degenerate support cone");

  FineRep out;
  // frozen: the accepted skeleton (starts with the rays, which always pass)
  Fan frozen(ambient);
  for (const auto& r : whole.rays) frozen.insert_simplicial(Cone({r}));
  out.rounds.push_back(0);  // dimension 1 needs no subdivision

  for (size_t d = 2; d <= top; d++) {
    // extension: triangulate the original d-cells compatibly, no new rays
    Fan level(ambient);
    for (uint32_t mask = 1; mask < (1u << top); mask++) {
      if (static_cast<size_t>(__builtin_popcount(mask)) != d) continue;
      std::vector<IVec> sub;
      for (size_t i = 0; i < top; i++)
        if (mask & (1u << i)) sub.push_back(whole.rays[i]);
      Fan ext = extend_cell(Cone(sub), frozen, ambient);
      for (const auto& c : ext.maximal_cones()) level.insert_simplicial(c);
    }
    for (const auto& c : frozen.cones()) level.insert_simplicial(c);
    // iterate relative barycentric subdivision until the d-cells pass
    size_t rounds = 0;
    for (;;) {
      Fan dcells(ambient);
      for (const auto& c : level.cones_of_nrays(d)) dcells.insert_simplicial(c);
      SuffFineCheck chk = check_sufficiently_fine(dcells, n);
      if (chk.fine) break;
      VH_CHECK(rounds < cap, "IterationCapExceeded",
               "subdivision cap exceeded at dimension " + std::to_string(d));
      level = relative_barycentric_subdivide(level, frozen);
      rounds++;
    }
    out.rounds.push_back(rounds);
    frozen = level;
  }
  out.fan = frozen;
  return out;
}

}  // namespace

MakeSuffFineResult make_sufficiently_fine(const Chain& xi, const ArithmeticGroup& grp,
                                          size_t cap) {
  size_t n = grp.n;
  MakeSuffFineResult out;
  out.cert.fan = Fan(sym_dim(n));
  OrbitIndex idx(grp);

  for (const auto& [t, c] : xi.terms()) {
    if (tuple_in_boundary(n, t)) continue;
    std::vector<IVec> cusps = term_cusps(n, t);
    auto entry = idx.canonical(cusps);
    auto it = out.reps.find(entry.rep);
    if (it == out.reps.end()) {
      Tuple rep_tuple;
      for (const auto& r : entry.rep.rays) rep_tuple.push_back(to_qvec(r));
      FineRep fr = make_fine_single(rep_tuple, n, cap);
      for (size_t l = 0; l < fr.rounds.size(); l++) {
        if (out.cert.rounds.size() <= l) out.cert.rounds.push_back(0);
        out.cert.rounds[l] = std::max(out.cert.rounds[l], fr.rounds[l]);
      }
      it = out.reps.emplace(entry.rep, std::move(fr.fan)).first;
    }
    // translate the representative's fan back to this term
    IMat ginv = inverse_unimodular(entry.certificate);
    QMat gq = to_qmat(ginv);
    Fan local(sym_dim(n));
    for (const auto& cell : it->second.maximal_cones()) {
      std::vector<IVec> moved;
      for (const auto& r : cell.rays) moved.push_back(primitive(group_action(gq, to_qvec(r))));
      local.insert_simplicial(Cone(moved));
    }
    out.per_term.emplace(t, local);
    out.certs.emplace(t, std::make_pair(entry.rep, entry.certificate));
    for (const auto& cell : local.cones()) out.cert.fan.insert_simplicial(cell);
  }
  // witness sets over all accepted top cones
  SuffFineCheck chk = check_sufficiently_fine(out.cert.fan, n);
  VH_CHECK(chk.fine, "InternalError", "translated decomposition lost fineness");
  out.cert.witness = chk.witness;
  out.stats.rounds_per_level = out.cert.rounds;
  return out;
}

namespace {

// Thm 4 assembly over one fan, oriented against `ref`: for every top cell
// and every flag of its rays, the chosen cusps y_I form a pointed cone
Chain assemble_over_fan(size_t n, const Fan& f, const Tuple& ref) {
  size_t top = ref.size();
  Chain out(static_cast<int>(top) - 1);
  for (const auto& tau : f.cones_of_nrays(top)) {
    std::vector<size_t> perm(top);
    for (size_t i = 0; i < top; i++) perm[i] = i;
    do {
      Tuple beta_tuple;
      Tuple y_tuple;
      QVec acc(ref[0].size(), Rat(0));
      std::vector<IVec> inter;
      for (size_t j = 0; j < top; j++) {
        acc = add(acc, to_qvec(tau.rays[perm[j]]));
        beta_tuple.push_back(to_qvec(primitive(acc)));
        // v_I = lex-min cusp in the intersection of S(rho_i), i in I
        std::vector<IVec> s = s_of_ray(n, to_qvec(tau.rays[perm[j]]));
        std::sort(s.begin(), s.end(), LexLess{});
        if (j == 0) {
          inter = s;
        } else {
          std::vector<IVec> tmp;
          std::set_intersection(inter.begin(), inter.end(), s.begin(), s.end(),
                                std::back_inserter(tmp), LexLess{});
          inter = tmp;
        }
        VH_CHECK(!inter.empty(), "EmptyWitness", "flag subset with empty cusp intersection");
        y_tuple.push_back(rank_one_form(inter.front()));
      }
      int s = sign_rel(ref, beta_tuple);
      if (s != 0) out.add_term(y_tuple, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

}  // namespace

Chain algorithm2_assemble(const Chain& xi, const MakeSuffFineResult& fine,
                          const ArithmeticGroup& grp) {
  size_t n = grp.n;
  Chain out(xi.degree());
  // assemble once per orbit representative (the cusp choices are made on the
  // representative, hence Gamma-equivariant), then translate to each term
  std::map<Cone, Chain> assembled;
  for (const auto& [t, c] : xi.terms()) {
    if (tuple_in_boundary(n, t)) continue;
    const auto& [rep, cert] = fine.certs.at(t);
    auto it = assembled.find(rep);
    if (it == assembled.end()) {
      Tuple rep_tuple;
      for (const auto& r : rep.rays) rep_tuple.push_back(to_qvec(r));
      it = assembled.emplace(rep, assemble_over_fan(n, fine.reps.at(rep), rep_tuple)).first;
    }
    IMat ginv = inverse_unimodular(cert);
    Tuple rep_moved;
    for (const auto& r : rep.rays) rep_moved.push_back(group_action(to_qmat(ginv), to_qvec(r)));
    int s = sign_rel(t, rep_moved);
    VH_CHECK(s != 0, "InternalError", "degenerate representative transport");
    out.add(it->second.translated(ginv).scaled(c * s));
  }
  certify_voronoi_chain(out, n);
  return out;
}

Chain algorithm2_reduce(const Chain& xi, const ArithmeticGroup& grp, size_t cap,
                        ReductionStats* stats) {
  MakeSuffFineResult fine = make_sufficiently_fine(xi, grp, cap);
  if (stats) *stats = fine.stats;
  return algorithm2_assemble(xi, fine, grp);
}

Chain reduce_cycle(const Chain& xi, const ArithmeticGroup& grp, Algorithm alg,
                   ReductionStats* stats) {
  switch (alg) {
    case Algorithm::AshRudolph:
      return ash_rudolph_reduce(xi, grp, stats);
    case Algorithm::One: {
      Alg1Result r = algorithm1_equivariant(xi, grp);
      if (stats) *stats = r.stats;
      return r.reduced;
    }
    case Algorithm::Two:
    default:
      return algorithm2_reduce(xi, grp, 8, stats);
  }
}

void certify_voronoi_chain(const Chain& xi, size_t n) {
  for (const auto& [t, c] : xi.terms()) {
    QVec p(t[0].size(), Rat(0));
    std::vector<IVec> cusps;
    for (const auto& x : t) {
      auto v = cusp_vector_of_point(n, x);
      VH_CHECK(v.has_value(), "NotVoronoi", "output point is not on a cusp ray");
      cusps.push_back(*v);
      p = add(p, rank_one_form(*v));
    }
    auto s = s_of_ray(n, p);
    for (const auto& v : cusps)
      VH_CHECK(std::find(s.begin(), s.end(), v) != s.end(), "NotVoronoi",
               "output cusp outside the containing Voronoi cone's spanning set");
  }
}

// ---- Hecke matrices (declared in hecke.hpp) -----------------------------------

HeckeMatrixResult hecke_matrix(const HomologyPresentation& h, size_t degree, long p,
                               Algorithm alg) {
  const VoronoiComplex& c = *h.complex;
  VH_CHECK(h.levels.at(degree).torsion.empty(), "TorsionUnsupported",
           "Hecke matrices are computed on torsion-free levels");
  HeckeMatrixResult out;
  out.basis = basis_size(h, degree);
  out.matrix = QMat(out.basis, out.basis);
  HeckeOperator t = coset_decomposition(c.grp, p);
  for (size_t j = 0; j < out.basis; j++) {
    Chain b = lift_basis_cycle(h, degree, j);
    Chain img = hecke_image(t, b);
    Chain red = reduce_cycle(img, c.grp, alg);
    ClassCoords coords = project_cycle(h, degree, red);
    for (const auto& [r, d] : coords.torsion_part)
      VH_CHECK(r == 0, "TorsionUnsupported",
               "Hecke matrices over torsion classes are not computed");
    for (size_t i = 0; i < coords.free_part.size(); i++)
      out.matrix(i, j) = Rat(coords.free_part[i]);
  }
  out.charpoly = charpoly(out.matrix);
  return out;
}

}  // namespace vh
