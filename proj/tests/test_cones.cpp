#include <doctest.h>

#include "vorhecke/cones.hpp"

using namespace vh;

namespace {

QVec qv(std::vector<long> v) {
  QVec out(v.size());
  for (size_t i = 0; i < v.size(); i++) out[i] = Rat(v[i]);
  return out;
}

size_t factorial(size_t k) { return k <= 1 ? 1 : k * factorial(k - 1); }

Fan simplex_fan(size_t k) {
  // coordinate cone on k+1 basis rays
  Fan f(k + 1);
  std::vector<IVec> rays;
  for (size_t i = 0; i <= k; i++) {
    IVec e(k + 1, Int(0));
    e[i] = 1;
    rays.push_back(e);
  }
  f.insert_simplicial(Cone(rays));
  return f;
}

// Exact volume of an affine slice of a simplicial fan's top cones: sum of
// |det| of ray representatives scaled onto the slice <f, x> = 1, where f is
// a functional positive on every ray.
IVec slice_functional(const Fan& f) {
  IVec func;
  for (const auto& c : f.cones_of_nrays(1)) {
    if (func.empty()) func.assign(c.rays[0].size(), Int(0));
    for (size_t i = 0; i < func.size(); i++) func[i] += c.rays[0][i];
  }
  return func;
}

Rat slice_volume(const Fan& f, const IVec& func) {
  size_t top = f.max_dim();
  Rat vol = 0;
  for (const auto& c : f.cones_of_nrays(top)) {
    REQUIRE(c.rays[0].size() == top);  // simplicial full-rank tops only
    QMat m(top, top);
    for (size_t j = 0; j < top; j++) {
      Int s = dot(func, c.rays[j]);
      REQUIRE(s > 0);
      for (size_t i = 0; i < top; i++) m(i, j) = make_rat(c.rays[j][i], s);
    }
    Rat d = det(m);
    vol += d < 0 ? -d : d;
  }
  return vol;
}

}  // namespace

TEST_CASE("spanning_rays drops interior generators and scales") {
  {
    PointedCone pc({qv({2, 0}), qv({0, 3})});
    auto r = spanning_rays(pc);
    CHECK(r == std::vector<IVec>{{0, 1}, {1, 0}});
  }
  {
    PointedCone pc({qv({1, 0}), qv({0, 1}), qv({3, 3})});
    CHECK(spanning_rays(pc).size() == 2);
  }
  {
    PointedCone pc({qv({4, 6})});
    CHECK(spanning_rays(pc) == std::vector<IVec>{{2, 3}});
  }
}

TEST_CASE("is_simplicial is tuple independence") {
  CHECK(is_simplicial(PointedCone({qv({1, 0, 0}), qv({0, 1, 0}), qv({0, 0, 1})})));
  CHECK(!is_simplicial(PointedCone({qv({1, 0}), qv({0, 1}), qv({1, 1})})));
  CHECK(!is_simplicial(PointedCone({qv({1, 0}), qv({2, 0})})));
}

TEST_CASE("barycenter ray") {
  CHECK(barycenter_ray(PointedCone({qv({1, 0}), qv({0, 1})})) == IVec{1, 1});
  CHECK(barycenter_ray(PointedCone({qv({2, 0}), qv({0, 2})})) == IVec{1, 1});
  CHECK_THROWS_AS(barycenter_ray(PointedCone({qv({1, 0}), qv({2, 0})})), Error);
}

TEST_CASE("stellar subdivision counts") {
  {
    Fan f = stellar_subdivide(PointedCone({qv({1, 0}), qv({0, 1})}), 2);
    CHECK(f.cones_of_nrays(2).size() == 2);
    CHECK(f.contains(Cone({{1, 0}, {1, 1}})));
    CHECK(f.contains(Cone({{0, 1}, {1, 1}})));
  }
  {
    Fan f = stellar_subdivide(
        PointedCone({qv({1, 0, 0}), qv({0, 1, 0}), qv({0, 0, 1})}), 3);
    CHECK(f.cones_of_nrays(3).size() == 3);
  }
  {
    Fan f = stellar_subdivide(PointedCone({qv({1, 2})}), 2);
    CHECK(f.cones_of_nrays(1).size() == 1);
  }
}

TEST_CASE("barycentric subdivision top-cone counts and support") {
  for (size_t k = 1; k <= 3; k++) {
    Fan f = simplex_fan(k);
    IVec func = slice_functional(f);
    Rat vol_before = slice_volume(f, func);
    Fan b = barycentric_subdivide(f);
    CHECK(b.cones_of_nrays(k + 1).size() == factorial(k + 1));
    CHECK(slice_volume(b, func) == vol_before);
    // 1-skeleton grew only by barycenters of faces with >= 2 rays
    b.validate();
  }
}

TEST_CASE("relative barycentric with empty constraint equals plain") {
  Fan f = simplex_fan(2);
  Fan a(3);
  Fan rel = relative_barycentric_subdivide(f, a);
  Fan plain = barycentric_subdivide(f);
  CHECK(rel.cones() == plain.cones());
}

TEST_CASE("relative barycentric keeps constrained faces unsubdivided") {
  Fan f = simplex_fan(2);
  Fan a(3);
  a.insert_simplicial(Cone({{1, 0, 0}, {0, 1, 0}}));  // one edge frozen
  Fan rel = relative_barycentric_subdivide(f, a);
  CHECK(rel.contains(Cone({{1, 0, 0}, {0, 1, 0}})));
  // no ray strictly inside the frozen edge
  for (const auto& c : rel.cones_of_nrays(1)) {
    const IVec& r = c.rays[0];
    bool inside_edge = r[2] == 0 && r[0] > 0 && r[1] > 0;
    CHECK(!inside_edge);
  }
  // iterate: still no new vertex on the frozen edge
  Fan rel2 = relative_barycentric_subdivide(rel, a);
  for (const auto& c : rel2.cones_of_nrays(1)) {
    const IVec& r = c.rays[0];
    CHECK(!(r[2] == 0 && r[0] > 0 && r[1] > 0));
  }
  IVec func = slice_functional(f);
  CHECK(slice_volume(rel2, func) == slice_volume(f, func));
}

TEST_CASE("relative barycentric with all proper faces frozen adds only star point") {
  Fan f = simplex_fan(2);
  Fan a = f.filtration(2);  // all proper faces
  Fan rel = relative_barycentric_subdivide(f, a);
  CHECK(rel.cones_of_nrays(1).size() == 4);  // 3 original rays + star point
  CHECK(rel.cones_of_nrays(3).size() == 3);
}

TEST_CASE("NotASubfan") {
  Fan f = simplex_fan(2);
  Fan a(3);
  a.insert_simplicial(Cone({{5, 5, 5}}));
  CHECK_THROWS_AS(relative_barycentric_subdivide(f, a), Error);
}

TEST_CASE("open star membership and anti-monotonicity") {
  Fan f(2);
  f.insert_simplicial(Cone({{1, 0}, {0, 1}}));
  f.insert_simplicial(Cone({{0, 1}, {-1, 0}}));
  Cone shared({{0, 1}});
  OpenStar st = open_star(shared, f);
  CHECK(st.members.count(Cone({{1, 0}, {0, 1}})) == 1);
  CHECK(st.members.count(Cone({{0, 1}, {-1, 0}})) == 1);
  Cone top({{1, 0}, {0, 1}});
  OpenStar st_top = open_star(top, f);
  for (const auto& m : st_top.members) CHECK(st.members.count(m) == 1);
  CHECK_THROWS_AS(open_star(Cone({{7, 1}}), f), Error);
}

TEST_CASE("pulling refinement: square cone -> two simplices, prism -> three") {
  {
    Fan f(3);
    f.insert_with_faces(Cone({{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}));
    Fan s = simplicial_refine_no_new_rays(f);
    CHECK(s.cones_of_nrays(3).size() == 2);
    CHECK(s.is_simplicial());
    IVec func = slice_functional(f);
    // support preserved: the two simplices fill the square slice exactly
    CHECK(slice_volume(s, func) == make_rat(1, 16));
    // identical 1-skeleton
    CHECK(s.cones_of_nrays(1).size() == 4);
    // deterministic: the diagonal through the lex-smallest ray
    Fan s2 = simplicial_refine_no_new_rays(f);
    CHECK(s.cones() == s2.cones());
  }
  {
    // cone over a triangular prism in dim 4
    Fan f(4);
    f.insert_with_faces(Cone({{1, 0, 0, 1},
                              {0, 1, 0, 1},
                              {0, 0, 1, 1},
                              {1, 0, 0, 2},
                              {0, 1, 0, 2},
                              {0, 0, 1, 2}}));
    Fan s = simplicial_refine_no_new_rays(f);
    CHECK(s.cones_of_nrays(4).size() == 3);
    CHECK(s.is_simplicial());
  }
  {
    Fan f = simplex_fan(2);
    Fan s = simplicial_refine_no_new_rays(f);
    CHECK(s.cones() == f.cones());
  }
}

TEST_CASE("fan exchange format round trip") {
  Fan f(3);
  f.insert_simplicial(Cone({{1, 0, 0}, {0, 0, 1}, {1, 1, 1}}));
  f.insert_simplicial(Cone({{0, 0, 1}, {1, 1, 1}, {0, 1, 0}}));
  std::string text = fan_to_text(f);
  Fan g = fan_from_text(text);
  CHECK(f.cones() == g.cones());
  CHECK(fan_to_text(g) == text);  // bit-exact round trip
}

TEST_CASE("iterated relative barycentric vertices approach targets") {
  // surrogate for density: the midpoint of the unconstrained edge region
  Fan f = simplex_fan(1);  // 2-cone on e1, e2 in the plane
  Fan a(2);
  Fan cur = f;
  // target: direction (3,1)/4 in the slice; check some new ray gets close
  bool close = false;
  for (int i = 0; i < 6 && !close; i++) {
    cur = relative_barycentric_subdivide(cur, a);
    for (const auto& c : cur.cones_of_nrays(1)) {
      Rat s = Rat(c.rays[0][0]) + Rat(c.rays[0][1]);
      Rat x = Rat(c.rays[0][0]) / s;
      Rat dist = x - make_rat(3, 4);
      if (dist < 0) dist = -dist;
      if (dist <= make_rat(1, 16)) close = true;
    }
  }
  CHECK(close);
}
