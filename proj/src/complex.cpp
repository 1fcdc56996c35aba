#include "vorhecke/complex.hpp"

#include <algorithm>

#include "vorhecke/oracle.hpp"

namespace vh {

namespace {

std::vector<IVec> cusps_of_cone(size_t n, const Cone& c) {
  std::vector<IVec> out;
  for (const auto& r : c.rays) {
    auto v = cusp_vector_of_point(n, to_qvec(r));
    VH_CHECK(v.has_value(), "InternalError", "cell ray is not a cusp form");
    out.push_back(*v);
  }
  return out;
}

Tuple reference_tuple(const std::vector<IVec>& cusps) {
  Tuple t;
  for (const auto& v : cusps) t.push_back(rank_one_form(v));
  return t;
}

bool is_reversible(const std::vector<IVec>& cusps, const Tuple& reference,
                   const ArithmeticGroup& grp) {
  auto stab = cusp_cone_equivalences(cusps, cusps, grp);
  for (const auto& s : stab) {
    QMat sq = to_qmat(s);
    Tuple img;
    for (const auto& p : reference) img.push_back(group_action(sq, p));
    if (sign_rel(reference, img) < 0) return true;
  }
  return false;
}

VoronoiComplex build_impl(const ArithmeticGroup& grp, bool relative, bool strict) {
  const VoronoiData& vd = VoronoiData::standard(grp.n);
  size_t n = grp.n;
  size_t top = vd.dim();
  VoronoiComplex cx;
  cx.grp = grp;
  cx.top_dim = top;
  cx.relative = relative;
  cx.cells.assign(top + 1, {});

  // Gamma-orbits of cells: canonicalize every face of every coset translate
  // of the standard cone.  Deterministic enumeration order is part of the
  // contract.
  CosetTable cosets = enumerate_cosets(grp);
  OrbitIndex idx(grp);
  std::set<Cone> seen;
  std::vector<std::vector<IVec>> all_cusps(top + 1);

  for (size_t li = 0; li < cosets.index(); li++) {
    std::vector<IVec> tcusps;
    for (const auto& c : vd.cusps()) tcusps.push_back(act_on_cusp(cosets.lifts[li], c));
    std::sort(tcusps.begin(), tcusps.end(), LexLess{});
    for (uint32_t mask = 1; mask < (1u << top); mask++) {
      std::vector<IVec> sub;
      for (size_t i = 0; i < top; i++)
        if (mask & (1u << i)) sub.push_back(tcusps[i]);
      if (relative) {
        IMat m(n, sub.size());
        for (size_t j = 0; j < sub.size(); j++)
          for (size_t i = 0; i < n; i++) m(i, j) = sub[j][i];
        if (rank(to_qmat(m)) < n) continue;  // Satake-boundary cell
      }
      auto entry = idx.canonical(sub);
      if (seen.count(entry.rep)) continue;
      seen.insert(entry.rep);
      CellOrbit cell;
      cell.cone = entry.rep;
      cell.cusps = cusps_of_cone(n, entry.rep);
      cell.reference = reference_tuple(cell.cusps);
      cell.orientation_reversible = is_reversible(cell.cusps, cell.reference, grp);
      if (cell.orientation_reversible) {
        VH_CHECK(!strict, "StabilizerObstruction",
                 "a cell stabilizer reverses orientation");
        cx.dropped_cells++;
        cx.integral_valid = false;
        continue;
      }
      cx.cells[entry.rep.nrays()].push_back(cell);
    }
  }

  // boundary matrices with Gamma-matching signs
  CellLocator locator(cx);
  cx.bd.assign(top + 1, IMat());
  for (size_t d = 1; d <= top; d++) {
    size_t rows = d >= 2 ? cx.cells[d - 1].size() : 0;
    IMat m(rows, cx.cells[d].size());
    for (size_t ci = 0; ci < cx.cells[d].size(); ci++) {
      const CellOrbit& cell = cx.cells[d][ci];
      if (d == 1) continue;
      for (size_t drop = 0; drop < d; drop++) {
        std::vector<IVec> fcusps;
        Tuple fpts;
        for (size_t j = 0; j < d; j++) {
          if (j == drop) continue;
          fcusps.push_back(cell.cusps[j]);
          fpts.push_back(cell.reference[j]);
        }
        if (relative) {
          IMat fm(n, fcusps.size());
          for (size_t j = 0; j < fcusps.size(); j++)
            for (size_t i = 0; i < n; i++) fm(i, j) = fcusps[j][i];
          if (rank(to_qmat(fm)) < n) continue;
        }
        auto ref = locator.locate(fcusps);
        if (!ref) continue;  // dropped orbit
        QMat gq = to_qmat(ref->certificate);
        Tuple moved;
        for (const auto& p : fpts) moved.push_back(group_action(gq, p));
        int sign = sign_rel(cx.cells[d - 1][ref->index].reference, moved);
        VH_CHECK(sign != 0, "InternalError", "degenerate face transport");
        Int contrib = (drop % 2 == 0) ? Int(1) : Int(-1);
        m(ref->index, ci) += contrib * sign;
      }
    }
    cx.bd[d] = m;
  }

  // del о del = 0
  for (size_t d = 2; d <= top; d++) {
    if (cx.bd[d].cols() == 0 || cx.bd[d - 1].rows() == 0) continue;
    if (cx.bd[d - 1].cols() != cx.bd[d].rows()) continue;
    IMat z = mul(cx.bd[d - 1], cx.bd[d]);
    for (size_t i = 0; i < z.rows(); i++)
      for (size_t j = 0; j < z.cols(); j++)
        VH_CHECK(z(i, j) == 0, "InternalError", "boundary squared is nonzero");
  }
  return cx;
}

}  // namespace

VoronoiComplex build_voronoi_complex(const ArithmeticGroup& grp, bool relative) {
  return build_impl(grp, relative, false);
}

VoronoiComplex build_voronoi_complex_strict(const ArithmeticGroup& grp, bool relative) {
  return build_impl(grp, relative, true);
}

CellLocator::CellLocator(const VoronoiComplex& c) : cx_(c), idx_(c.grp) {
  // replay the complex's representatives so canonical() lands on them
  for (size_t d = 0; d < c.cells.size(); d++)
    for (size_t i = 0; i < c.cells[d].size(); i++) {
      idx_.canonical(c.cells[d][i].cusps);
      by_cone_.emplace(c.cells[d][i].cone, std::make_pair(d, i));
    }
}

std::optional<CellRef> CellLocator::locate(const std::vector<IVec>& cusps) {
  auto entry = idx_.canonical(cusps);
  auto it = by_cone_.find(entry.rep);
  if (it == by_cone_.end()) return std::nullopt;
  return CellRef{it->second.first, it->second.second, entry.certificate};
}

HomologyPresentation homology(const VoronoiComplex& c) {
  HomologyPresentation h;
  h.complex = &c;
  h.integral_valid = c.integral_valid;
  h.levels.assign(c.top_dim, HomologyLevel());
  for (size_t d = 1; d <= c.top_dim; d++) {
    HomologyLevel& lvl = h.levels[d - 1];
    size_t m = c.cells[d].size();
    if (m == 0) continue;

    // kernel of bd[d]
    QMat z;
    if (c.bd[d].rows() == 0) {
      z = QMat::identity(m);
    } else {
      IMat k = integer_kernel(c.bd[d]);  // rows span the kernel, saturated
      z = QMat(m, k.rows());
      for (size_t i = 0; i < k.rows(); i++)
        for (size_t j = 0; j < m; j++) z(j, i) = Rat(k(i, j));
    }
    size_t zr = z.cols();
    lvl.kernel_basis = z;
    if (zr == 0) continue;

    // image of bd[d+1] in kernel coordinates
    size_t bcols = (d + 1 <= c.top_dim) ? c.bd[d + 1].cols() : 0;
    IMat t(zr, bcols);
    for (size_t j = 0; j < bcols; j++) {
      QVec col(m);
      for (size_t i = 0; i < m; i++) col[i] = Rat(c.bd[d + 1](i, j));
      auto sol = solve(z, col);
      VH_CHECK(sol.has_value(), "InternalError", "boundary image escapes the kernel");
      for (size_t i = 0; i < zr; i++) {
        VH_CHECK((*sol)[i].get_den() == 1, "InternalError", "non-integral kernel coordinate");
        t(i, j) = (*sol)[i].get_num();
      }
    }

    SnfResult s = snf(t);
    lvl.u = s.u;
    lvl.uinv_cols = inverse_unimodular(s.u);
    lvl.invariants.assign(zr, Int(0));
    for (size_t i = 0; i < std::min(zr, bcols); i++) lvl.invariants[i] = s.s(i, i);
    for (size_t i = 0; i < zr; i++) {
      if (lvl.invariants[i] == 0)
        lvl.free_rank++;
      else if (lvl.invariants[i] > 1)
        lvl.torsion.push_back(lvl.invariants[i]);
    }
  }
  return h;
}

size_t basis_size(const HomologyPresentation& h, size_t degree) {
  const HomologyLevel& lvl = h.levels.at(degree);
  return lvl.free_rank + lvl.torsion.size();
}

namespace {
std::vector<size_t> generator_positions(const HomologyLevel& lvl) {
  std::vector<size_t> pos;
  for (size_t i = 0; i < lvl.invariants.size(); i++)
    if (lvl.invariants[i] == 0 || lvl.invariants[i] > 1) pos.push_back(i);
  return pos;
}
}  // namespace

Chain lift_basis_cycle(const HomologyPresentation& h, size_t degree, size_t index) {
  const VoronoiComplex& c = *h.complex;
  const HomologyLevel& lvl = h.levels.at(degree);
  std::vector<size_t> pos = generator_positions(lvl);
  VH_CHECK(index < pos.size(), "BadIndex", "basis index out of range");
  size_t p = pos[index];
  size_t d = degree + 1;
  size_t m = c.cells[d].size();
  // coefficient vector = kernel_basis * (column p of U^{-1})
  Chain out(static_cast<int>(degree));
  for (size_t i = 0; i < m; i++) {
    Rat coeff = 0;
    for (size_t j = 0; j < lvl.kernel_basis.cols(); j++)
      coeff += lvl.kernel_basis(i, j) * Rat(lvl.uinv_cols(j, p));
    VH_CHECK(coeff.get_den() == 1, "InternalError", "non-integral basis cycle");
    if (coeff != 0) out.add_term(c.cells[d][i].reference, coeff.get_num());
  }
  return out;
}

ClassCoords project_cycle(const HomologyPresentation& h, size_t degree, const Chain& xi) {
  const VoronoiComplex& c = *h.complex;
  const HomologyLevel& lvl = h.levels.at(degree);
  size_t d = degree + 1;
  size_t m = c.cells[d].size();
  CellLocator locator(c);

  IVec v(m, Int(0));
  for (const auto& [t, coeff] : xi.terms()) {
    std::vector<IVec> cusps;
    for (const auto& p : t) {
      auto cv = cusp_vector_of_point(c.grp.n, p);
      VH_CHECK(cv.has_value(), "NotVoronoi", "term point is not on a cusp ray");
      cusps.push_back(*cv);
    }
    if (c.relative) {
      IMat fm(c.grp.n, cusps.size());
      for (size_t j = 0; j < cusps.size(); j++)
        for (size_t i = 0; i < c.grp.n; i++) fm(i, j) = cusps[j][i];
      if (rank(to_qmat(fm)) < c.grp.n) continue;  // boundary-supported term
    }
    auto ref = locator.locate(cusps);
    if (!ref) {
      // either a dropped (orientation-reversible) orbit or not Voronoi at
      // all; certify with the oracle before skipping
      QVec p(t[0].size(), Rat(0));
      for (const auto& v : cusps) p = add(p, rank_one_form(v));
      auto ans = reduce(c.grp.n, p);
      for (const auto& v : cusps)
        VH_CHECK(std::find(ans.cusps.begin(), ans.cusps.end(), v) != ans.cusps.end(),
                 "NotVoronoi", "term is not a Voronoi cell");
      VH_CHECK(c.dropped_cells > 0, "NotVoronoi", "Voronoi cell missing from the complex");
      continue;
    }
    VH_CHECK(ref->dim == d, "DegreeMismatch", "term dimension mismatch");
    QMat gq = to_qmat(ref->certificate);
    Tuple moved;
    for (const auto& p : t) moved.push_back(group_action(gq, p));
    int sign = sign_rel(c.cells[d][ref->index].reference, moved);
    VH_CHECK(sign != 0, "InternalError", "degenerate projection transport");
    v[ref->index] += coeff * sign;
  }

  // must be a relative cycle at the matrix level
  if (c.bd[d].rows() > 0) {
    IVec bv = mul(c.bd[d], v);
    for (const auto& x : bv) VH_CHECK(x == 0, "NotACycle", "projection of a non-cycle");
  }

  // kernel coordinates, then SNF coordinates
  QVec vq(m);
  for (size_t i = 0; i < m; i++) vq[i] = Rat(v[i]);
  ClassCoords out;
  if (lvl.kernel_basis.cols() == 0) return out;
  auto sol = solve(lvl.kernel_basis, vq);
  VH_CHECK(sol.has_value(), "NotACycle", "cycle outside the kernel lattice");
  IVec kc(lvl.kernel_basis.cols());
  for (size_t i = 0; i < kc.size(); i++) {
    VH_CHECK((*sol)[i].get_den() == 1, "InternalError", "non-integral cycle coordinate");
    kc[i] = (*sol)[i].get_num();
  }
  IVec uc = mul(lvl.u, kc);
  for (size_t i = 0; i < uc.size(); i++) {
    const Int& di = lvl.invariants[i];
    if (di == 0) {
      out.free_part.push_back(uc[i]);
    } else if (di > 1) {
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), uc[i].get_mpz_t(), di.get_mpz_t());
      out.torsion_part.push_back({r, di});
    }
  }
  return out;
}

}  // namespace vh
