#include "vorhecke/cones.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace vh {

PointedCone::PointedCone(std::vector<QVec> g) : gens(std::move(g)) {
  for (const auto& v : gens) VH_CHECK(!is_zero(v), "ZeroVector", "zero generator in pointed cone");
}

size_t PointedCone::dim_span() const {
  if (gens.empty()) return 0;
  QMat m(gens[0].size(), gens.size());
  for (size_t j = 0; j < gens.size(); j++)
    for (size_t i = 0; i < gens[0].size(); i++) m(i, j) = gens[j][i];
  return rank(m);
}

bool Cone::has_face(const Cone& f) const {
  return std::includes(rays.begin(), rays.end(), f.rays.begin(), f.rays.end(),
                       LexLess{});
}

Cone cone_of(const PointedCone& pc) {
  std::vector<IVec> r = spanning_rays(pc);
  return Cone(std::move(r));
}

Cone cone_of_rays(const std::vector<IVec>& rays) { return Cone(rays); }

size_t Fan::max_dim() const {
  size_t m = 0;
  for (const auto& c : cones_) m = std::max(m, c.nrays());
  return m;
}

void Fan::insert_simplicial(const Cone& c) {
  size_t k = c.nrays();
  VH_CHECK(k <= 20, "TooBig", "cone with too many rays");
  for (uint32_t mask = 1; mask < (1u << k); mask++) {
    std::vector<IVec> sub;
    for (size_t i = 0; i < k; i++)
      if (mask & (1u << i)) sub.push_back(c.rays[i]);
    cones_.insert(Cone(std::move(sub)));
  }
}

void Fan::insert_with_faces(const Cone& c) {
  if (cones_.count(c)) return;
  cones_.insert(c);
  if (c.nrays() <= 1) return;
  // simplicial cones: subsets; otherwise recurse through facets
  std::vector<QVec> gens;
  for (const auto& r : c.rays) gens.push_back(to_qvec(r));
  QMat m(gens[0].size(), gens.size());
  for (size_t j = 0; j < gens.size(); j++)
    for (size_t i = 0; i < gens[0].size(); i++) m(i, j) = gens[j][i];
  if (rank(m) == gens.size()) {
    insert_simplicial(c);
    return;
  }
  for (const auto& f : cone_facets(c.rays)) insert_with_faces(Cone(f));
}

std::vector<Cone> Fan::cones_of_nrays(size_t k) const {
  std::vector<Cone> out;
  for (const auto& c : cones_)
    if (c.nrays() == k) out.push_back(c);
  return out;
}

std::vector<Cone> Fan::maximal_cones() const {
  std::vector<Cone> out;
  for (const auto& c : cones_) {
    bool maximal = true;
    for (const auto& d : cones_) {
      if (d.nrays() > c.nrays() && d.has_face(c)) {
        // subset of rays need not mean face for non-simplicial members, but
        // for maximality detection ray containment suffices
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(c);
  }
  return out;
}

Fan Fan::filtration(size_t d) const {
  Fan out(ambient_);
  for (const auto& c : cones_)
    if (c.nrays() <= d) out.cones_.insert(c);
  return out;
}

bool Fan::is_simplicial() const {
  for (const auto& c : cones_) {
    std::vector<QVec> gens;
    for (const auto& r : c.rays) gens.push_back(to_qvec(r));
    PointedCone pc(gens);
    if (pc.dim_span() < c.nrays()) return false;
  }
  return true;
}

void Fan::validate() const {
  // face-closure (simplicial members: ray subsets must be present)
  for (const auto& c : cones_) {
    std::vector<QVec> gens;
    for (const auto& r : c.rays) gens.push_back(to_qvec(r));
    PointedCone pc(gens);
    bool simp = pc.dim_span() == c.nrays();
    if (simp && c.nrays() <= 16) {
      for (uint32_t mask = 1; mask < (1u << c.nrays()); mask++) {
        std::vector<IVec> sub;
        for (size_t i = 0; i < c.nrays(); i++)
          if (mask & (1u << i)) sub.push_back(c.rays[i]);
        VH_CHECK(cones_.count(Cone(std::move(sub))) > 0, "NotFaceClosed",
                 "missing face of a fan cone");
      }
    }
  }
  // pairwise intersections are common faces
  std::vector<Cone> cs(cones_.begin(), cones_.end());
  std::vector<ConeHRep> hreps;
  hreps.reserve(cs.size());
  for (const auto& c : cs) {
    std::vector<QVec> gens;
    for (const auto& r : c.rays) gens.push_back(to_qvec(r));
    hreps.push_back(cone_hrep(gens));
  }
  for (size_t i = 0; i < cs.size(); i++)
    for (size_t j = i + 1; j < cs.size(); j++) {
      ConeHRep both = hreps[i];
      for (const auto& a : hreps[j].ineqs) both.ineqs.push_back(a);
      for (const auto& e : hreps[j].eqs) both.eqs.push_back(e);
      if (both.ineqs.size() > 60) continue;  // validate() is test machinery
      std::vector<IVec> meet = rays_from_hrep(both, ambient_);
      if (meet.empty()) continue;
      Cone m(meet);
      VH_CHECK(cones_.count(m) > 0, "BadIntersection",
               "pairwise intersection is not a cone of the fan");
      VH_CHECK(cs[i].has_face(m) && cs[j].has_face(m), "BadIntersection",
               "intersection is not a common face");
    }
}

std::vector<IVec> spanning_rays(const PointedCone& pc) {
  VH_CHECK(!pc.gens.empty(), "EmptyCone", "spanning rays of empty tuple");
  return cone_extreme_rays(pc.gens);
}

bool is_simplicial(const PointedCone& pc) { return !pc.gens.empty() && !pc.degenerate(); }

IVec barycenter_ray(const PointedCone& pc) {
  VH_CHECK(is_simplicial(pc), "DegenerateCone", "barycenter of degenerate cone");
  QVec s(pc.gens[0].size(), Rat(0));
  for (const auto& g : pc.gens) s = add(s, to_qvec(primitive(g)));
  return primitive(s);
}

IVec barycenter_ray(const Cone& c) {
  VH_CHECK(!c.rays.empty(), "DegenerateCone", "barycenter of empty cone");
  QVec s(c.rays[0].size(), Rat(0));
  for (const auto& r : c.rays) s = add(s, to_qvec(r));
  return primitive(s);
}

Fan stellar_subdivide(const PointedCone& pc, size_t ambient) {
  VH_CHECK(is_simplicial(pc), "DegenerateCone", "stellar subdivision of degenerate cone");
  Fan out(ambient);
  IVec b = barycenter_ray(pc);
  std::vector<IVec> rays;
  for (const auto& g : pc.gens) rays.push_back(primitive(g));
  if (rays.size() == 1) {
    out.insert_simplicial(Cone(rays));
    return out;
  }
  for (size_t drop = 0; drop < rays.size(); drop++) {
    std::vector<IVec> top;
    for (size_t i = 0; i < rays.size(); i++)
      if (i != drop) top.push_back(rays[i]);
    top.push_back(b);
    out.insert_simplicial(Cone(top));
  }
  return out;
}

// Stellar cascade: subdivide the cells of `orig` (not in `skip`) in
// decreasing dimension order, each at its barycenter ray, inside the evolving
// complex.
static Fan stellar_cascade(const Fan& f, const std::set<Cone>& skip) {
  VH_CHECK(f.is_simplicial(), "NotSimplicial", "barycentric subdivision needs a simplicial fan");
  std::set<Cone> k(f.cones().begin(), f.cones().end());
  std::vector<Cone> orig(f.cones().begin(), f.cones().end());
  std::stable_sort(orig.begin(), orig.end(),
                   [](const Cone& a, const Cone& b) { return a.nrays() > b.nrays(); });
  for (const auto& sigma : orig) {
    if (sigma.nrays() < 2) continue;
    if (skip.count(sigma)) continue;
    IVec b = barycenter_ray(sigma);
    // star of sigma in the current complex
    std::vector<Cone> star;
    for (const auto& tau : k)
      if (tau.has_face(sigma)) star.push_back(tau);
    std::set<Cone> fresh;
    for (const auto& tau : star) {
      // faces rho of tau with sigma not a subset of rho
      size_t m = tau.nrays();
      for (uint32_t mask = 0; mask < (1u << m); mask++) {
        std::vector<IVec> rho;
        for (size_t i = 0; i < m; i++)
          if (mask & (1u << i)) rho.push_back(tau.rays[i]);
        Cone rc(rho);
        if (rc.nrays() > 0 && rc.has_face(sigma)) continue;
        rho.push_back(b);
        fresh.insert(Cone(rho));
      }
    }
    for (const auto& tau : star) k.erase(tau);
    for (const auto& c : fresh) k.insert(c);
  }
  Fan out(f.ambient());
  for (const auto& c : k) out.insert_simplicial(c);
  return out;
}

Fan barycentric_subdivide(const Fan& f) { return stellar_cascade(f, {}); }

Fan relative_barycentric_subdivide(const Fan& f, const Fan& a) {
  for (const auto& c : a.cones())
    VH_CHECK(f.contains(c), "NotASubfan", "constraint fan is not a subfan");
  // closure under faces is inherent in Fan's construction; verify on top
  std::set<Cone> skip(a.cones().begin(), a.cones().end());
  return stellar_cascade(f, skip);
}

OpenStar open_star(const Cone& sigma, const Fan& f) {
  VH_CHECK(f.contains(sigma), "NotInFan", "open star of a cone outside the fan");
  OpenStar st;
  st.base = sigma;
  for (const auto& c : f.cones())
    if (c.has_face(sigma)) st.members.insert(c);
  return st;
}

std::vector<OpenStar> open_cover(const Fan& f) {
  std::vector<OpenStar> out;
  for (const auto& c : f.cones()) out.push_back(open_star(c, f));
  return out;
}

// Pulling triangulation at the lex-smallest ray; memoized by ray set so that
// shared faces are refined identically across the fan.
static void pull_cone(const Cone& c, std::map<Cone, std::vector<Cone>>& memo,
                      std::vector<Cone>& out) {
  auto it = memo.find(c);
  if (it != memo.end()) {
    out.insert(out.end(), it->second.begin(), it->second.end());
    return;
  }
  std::vector<Cone> result;
  std::vector<QVec> gens;
  for (const auto& r : c.rays) gens.push_back(to_qvec(r));
  PointedCone pc(gens);
  if (pc.dim_span() == c.nrays()) {
    result.push_back(c);
  } else {
    const IVec& v = c.rays[0];  // rays are lex-sorted
    for (const auto& facet : cone_facets(c.rays)) {
      Cone fc(facet);
      bool contains_v = false;
      for (const auto& r : fc.rays)
        if (r == v) {
          contains_v = true;
          break;
        }
      if (contains_v) continue;
      std::vector<Cone> sub;
      pull_cone(fc, memo, sub);
      for (const auto& s : sub) {
        std::vector<IVec> rays = s.rays;
        rays.push_back(v);
        result.push_back(Cone(rays));
      }
    }
  }
  memo[c] = result;
  out.insert(out.end(), result.begin(), result.end());
}

Fan simplicial_refine_no_new_rays(const Fan& f) {
  Fan out(f.ambient());
  std::map<Cone, std::vector<Cone>> memo;
  for (const auto& c : f.maximal_cones()) {
    std::vector<Cone> tris;
    pull_cone(c, memo, tris);
    for (const auto& t : tris) out.insert_simplicial(t);
  }
  return out;
}

CanonicalFan intersect_cone_with_fan(const PointedCone& sigma, const IAmbientFan& v) {
  VH_CHECK(!sigma.gens.empty(), "EmptyCone", "intersecting empty cone");
  for (const auto& g : sigma.gens)
    VH_CHECK(v.in_support(g), "UnsupportedRegion", "cone exits the support of the fan");
  size_t dim = v.ambient();
  size_t sdim = sigma.dim_span();

  std::vector<QVec> sgens = sigma.gens;
  ConeHRep sh = cone_hrep(sgens);

  // interior point of sigma
  QVec p0(dim, Rat(0));
  for (const auto& g : sigma.gens) p0 = add(p0, to_qvec(primitive(g)));

  // BFS over top cones whose intersection reaches the interior of sigma.
  // Tops meeting sigma only inside a facet are not expanded: around a
  // cuspidal boundary ray there are infinitely many of them.
  auto meet = [&](const Cone& top) -> std::vector<IVec> {
    std::vector<QVec> tg;
    for (const auto& r : top.rays) tg.push_back(to_qvec(r));
    ConeHRep th = cone_hrep(tg);
    ConeHRep both = sh;
    for (const auto& a : th.ineqs) both.ineqs.push_back(a);
    for (const auto& e : th.eqs) both.eqs.push_back(e);
    return rays_from_hrep(both, dim);
  };
  auto meets_interior = [&](const std::vector<IVec>& cell) {
    if (cell.empty()) return false;
    for (const auto& a : sh.ineqs) {
      bool all_tight = true;
      for (const auto& r : cell)
        if (dot(a, to_qvec(r)) != 0) {
          all_tight = false;
          break;
        }
      if (all_tight) return false;  // contained in a facet of sigma
    }
    return true;
  };

  std::set<Cone> seen;
  std::deque<Cone> frontier;
  Cone start = v.top_cone_at(p0);
  seen.insert(start);
  frontier.push_back(start);
  std::vector<std::pair<Cone, std::vector<IVec>>> full_cells;  // (top, cell rays)

  while (!frontier.empty()) {
    Cone top = frontier.front();
    frontier.pop_front();
    std::vector<IVec> cell = meet(top);
    if (!meets_interior(cell)) continue;
    std::vector<QVec> cg;
    for (const auto& r : cell) cg.push_back(to_qvec(r));
    PointedCone cpc(cg);
    if (cpc.dim_span() == sdim) full_cells.push_back({top, cell});
    for (const auto& nb : v.top_neighbors(top)) {
      if (seen.count(nb)) continue;
      seen.insert(nb);
      frontier.push_back(nb);
    }
  }
  VH_CHECK(!full_cells.empty(), "InternalError", "no full-dimensional cells found");

  CanonicalFan out{Fan(dim), {}};
  for (const auto& [top, cell] : full_cells) out.fan.insert_with_faces(Cone(cell));
  for (const auto& c : out.fan.cones()) {
    QVec p(dim, Rat(0));
    for (const auto& r : c.rays) p = add(p, to_qvec(r));
    out.inducing[c] = v.smallest_cone_at(p);
  }
  return out;
}

std::string fan_to_text(const Fan& f) {
  std::ostringstream os;
  os << "dim " << f.ambient() << "\n";
  for (const auto& c : f.cones()) {
    for (size_t i = 0; i < c.rays.size(); i++) {
      if (i) os << ";";
      os << to_string(c.rays[i]);
    }
    os << "\n";
  }
  return os.str();
}

Fan fan_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string word;
  size_t dim;
  is >> word >> dim;
  VH_CHECK(word == "dim", "BadFormat", "fan text must start with a dim header");
  Fan out(dim);
  std::string line;
  std::getline(is, line);  // rest of header line
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<IVec> rays;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ';')) {
      IVec ray;
      std::stringstream vs(tok);
      std::string num;
      while (std::getline(vs, num, ',')) ray.push_back(Int(num));
      VH_CHECK(ray.size() == dim, "BadFormat", "ray dimension mismatch in fan text");
      rays.push_back(ray);
    }
    out.insert_with_faces(Cone(rays));
  }
  return out;
}

}  // namespace vh
