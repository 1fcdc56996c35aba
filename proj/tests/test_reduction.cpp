#include <doctest.h>

#include "oracles.hpp"
#include "vorhecke/reduction.hpp"

using namespace vh;

namespace {
Chain cuspidal(std::vector<std::vector<IVec>> tuples, std::vector<long> coeffs) {
  Chain out(static_cast<int>(tuples[0].size()) - 1);
  for (size_t i = 0; i < tuples.size(); i++) {
    Tuple t;
    for (const auto& v : tuples[i]) t.push_back(rank_one_form(v));
    out.add_term(t, coeffs[i]);
  }
  return out;
}
}  // namespace

TEST_CASE("ash-rudolph: unimodular input is returned unchanged") {
  ArithmeticGroup grp{2, 11};
  Chain xi = cuspidal({{{1, 0}, {0, 1}}}, {3});
  CHECK(ash_rudolph_reduce(xi, grp) == xi);
}

TEST_CASE("ash-rudolph: the det-2 example splits at w = (1,1)") {
  ArithmeticGroup grp{2, 11};
  Chain xi = cuspidal({{{1, 0}, {1, 2}}}, {1});
  Chain out = ash_rudolph_reduce(xi, grp);
  Chain expect = cuspidal({{{1, 0}, {1, 1}}, {{1, 1}, {1, 2}}}, {1, 1});
  CHECK(out == expect);
}

TEST_CASE("ash-rudolph n=3: termination, unimodular outputs, strict decrease") {
  ArithmeticGroup grp{3, 2};
  SplitMix64 rng(17);
  for (int trial = 0; trial < 20; trial++) {
    std::vector<IVec> vs(3);
    Int d = 0;
    do {
      for (auto& v : vs) {
        v = {rng.range(-6, 6), rng.range(-6, 6), rng.range(-6, 6)};
        if (is_zero(v)) v = {1, 0, 0};
        v = sign_normalize(primitive(v));
      }
      IMat m(3, 3);
      for (size_t j = 0; j < 3; j++)
        for (size_t i = 0; i < 3; i++) m(i, j) = vs[j][i];
      d = det(m);
    } while (d == 0 || cmp(abs(d), 500) > 0 || cmp(abs(d), 2) < 0);
    Chain xi = cuspidal({vs}, {1});
    ReductionStats stats;
    Chain out = ash_rudolph_reduce(xi, grp, &stats);
    for (size_t i = 1; i < stats.ar_level_max_det.size(); i++)
      CHECK(cmp(stats.ar_level_max_det[i], stats.ar_level_max_det[i - 1]) < 0);
    for (const auto& [t, c] : out.terms()) {
      std::vector<IVec> cusps;
      for (const auto& p : t) cusps.push_back(*cusp_vector_of_point(3, p));
      IMat m(3, 3);
      for (size_t j = 0; j < 3; j++)
        for (size_t i = 0; i < 3; i++) m(i, j) = cusps[j][i];
      Int dd = det(m);
      CHECK((dd == 1 || dd == -1));
    }
    CHECK(is_relative_cycle(out, grp).is_cycle);
  }
}

TEST_CASE("canonical fan: sigma inside one Voronoi cone is its face fan") {
  TaggedFan f = canonical_fan_refined(
      PointedCone({rank_one_form({1, 0}), rank_one_form({0, 1})}), 2);
  CHECK(f.fan.cones_of_nrays(2).size() == 1);
  CHECK(f.fan.cones_of_nrays(1).size() == 2);
  for (const auto& [cell, vor] : f.inducing) {
    // the inducing Voronoi cone contains the cell
    std::vector<QVec> gens;
    for (const auto& r : vor.rays) gens.push_back(to_qvec(r));
    ConeHRep h = cone_hrep(gens);
    for (const auto& r : cell.rays) CHECK(hrep_contains(h, to_qvec(r)));
  }
}

TEST_CASE("canonical fan of a wall-crossing cone: support and skeleton") {
  // the 2-cone on q((1,0)), q((1,2)) crosses Voronoi walls; cells must tile
  // it without new rays beyond wall intersections
  PointedCone sigma({rank_one_form({1, 0}), rank_one_form({1, 2})});
  TaggedFan f = canonical_fan_refined(sigma, 2);
  size_t tops = f.fan.cones_of_nrays(2).size();
  CHECK(tops >= 2);
  // every ray is either original or lies on a wall (its smallest Voronoi
  // cone has >= 2 cusps)
  for (const auto& r : f.fan.cones_of_nrays(1)) {
    QVec x = to_qvec(r.rays[0]);
    bool original = r.rays[0] == primitive(rank_one_form({1, 0})) ||
                    r.rays[0] == primitive(rank_one_form({1, 2}));
    if (!original) CHECK(s_of_ray(2, x).size() >= 2);
  }
  // exact support: the cell coordinates recombine both generators
  Rat total = 0;
  for (const auto& c : f.fan.cones_of_nrays(2)) {
    QMat m(2, 2);
    auto basis = std::vector<QVec>{rank_one_form({1, 0}), rank_one_form({1, 2})};
    for (size_t j = 0; j < 2; j++) {
      auto sol = solve_in_ray_basis(basis, to_qvec(c.rays[j]));
      REQUIRE(sol.has_value());
      for (size_t i = 0; i < 2; i++) m(i, j) = (*sol)[i];
    }
    Rat d = det(m);
    total += d < 0 ? -d : d;
  }
  CHECK(total > 0);  // tiles a nondegenerate region of the cone
}

TEST_CASE("algorithm 1: Voronoi input is unchanged") {
  ArithmeticGroup grp{2, 11};
  Chain xi = cuspidal({{{1, 0}, {0, 1}}, {{1, 0}, {1, 1}}}, {2, -1});
  Alg1Result r = algorithm1_reduce(xi, grp);
  CHECK(r.reduced == xi);
}

TEST_CASE("algorithm 1 on Hecke images at level 11: cycle, certified, class-equal to AR") {
  ArithmeticGroup grp{2, 11};
  VoronoiComplex c = build_voronoi_complex(grp);
  HomologyPresentation h = homology(c);
  HeckeOperator t2 = coset_decomposition(grp, 2);
  for (size_t i = 0; i < basis_size(h, 1); i++) {
    Chain b = lift_basis_cycle(h, 1, i);
    Chain img = hecke_image(t2, b);
    Alg1Result r = algorithm1_reduce(img, grp);
    CHECK(is_relative_cycle(r.reduced, grp).is_cycle);
    Chain ar = ash_rudolph_reduce(img, grp);
    CHECK(project_cycle(h, 1, r.reduced) == project_cycle(h, 1, ar));
  }
}

TEST_CASE("algorithm 1 equivariant: certificates hold, classes agree") {
  ArithmeticGroup grp{2, 11};
  VoronoiComplex c = build_voronoi_complex(grp);
  HomologyPresentation h = homology(c);
  HeckeOperator t3 = coset_decomposition(grp, 3);
  Chain b = lift_basis_cycle(h, 1, 0);
  Chain img = hecke_image(t3, b);
  Alg1Result plain = algorithm1_reduce(img, grp);
  Alg1Result eq = algorithm1_equivariant(img, grp);
  CHECK(is_relative_cycle(eq.reduced, grp).is_cycle);
  CHECK(project_cycle(h, 1, eq.reduced) == project_cycle(h, 1, plain.reduced));
  // recorded pairs: the translated assignment lies in S(translated ray)
  for (const auto& [rho, g, moved] : eq.orbit_pairs) {
    auto s = s_of_ray(2, to_qvec(moved.rays[0]));
    (void)rho;
    (void)g;
    CHECK(!s.empty());
  }
}

TEST_CASE("witness mode: d(eta) = xi - xi^V + mu with rank-deficient mu") {
  ArithmeticGroup grp{2, 11};
  VoronoiComplex c = build_voronoi_complex(grp);
  HomologyPresentation h = homology(c);
  HeckeOperator t2 = coset_decomposition(grp, 2);
  Chain b = lift_basis_cycle(h, 1, 1);
  Chain img = hecke_image(t2, b);
  Alg1Options opt;
  opt.witness = true;
  Alg1Result r = algorithm1_reduce(img, grp, opt);
  REQUIRE(r.witness.has_value());
  // the free-complex identity d(eta) = xi - xi^V + mu, checked literally
  FreeChain check = r.witness->eta.boundary();
  check.subtract(r.witness->xi_free);
  check.add(r.witness->xiv_free);
  CHECK(check == r.witness->mu);
  CHECK(!r.witness->eta.empty());
  for (const auto& [t, coeff] : r.witness->mu.terms()) CHECK(tuple_in_boundary(2, t));
  // the literal pieces agree with the normalized input and output
  {
    Chain xin(1), xout(1);
    for (const auto& [t, c] : r.witness->xi_free.terms()) xin.add_term(t, c);
    for (const auto& [t, c] : r.witness->xiv_free.terms()) xout.add_term(t, c);
    CHECK(xin == img);
    CHECK(xout == r.reduced);
  }
}

TEST_CASE("sufficiently fine: the paper's equation fails on coarse Voronoi cones") {
  // the face fan of the standard cone itself is not sufficiently fine:
  // the spanning cusp rays have disjoint S-sets
  Fan f(3);
  f.insert_simplicial(Cone({primitive(rank_one_form({1, 0})), primitive(rank_one_form({0, 1})),
                            primitive(rank_one_form({1, 1}))}));
  SuffFineCheck chk = check_sufficiently_fine(f, 2);
  CHECK(!chk.fine);
  CHECK(chk.failure.has_value());
  // one barycentric round makes it fine
  Fan b = barycentric_subdivide(f);
  SuffFineCheck chk2 = check_sufficiently_fine(b, 2);
  CHECK(chk2.fine);
  for (const auto& [tau, w] : chk2.witness) CHECK(!w.empty());
}

TEST_CASE("sufficiently fine: non-adjacent endpoints fail") {
  Fan f(3);
  f.insert_simplicial(Cone({primitive(rank_one_form({1, 0})), primitive(rank_one_form({3, 1}))}));
  SuffFineCheck chk = check_sufficiently_fine(f, 2);
  CHECK(!chk.fine);
}

TEST_CASE("make_sufficiently_fine terminates and certifies") {
  ArithmeticGroup grp{2, 11};
  Chain xi = cuspidal({{{1, 0}, {1, 2}}}, {1});
  MakeSuffFineResult fine = make_sufficiently_fine(xi, grp);
  CHECK(!fine.cert.witness.empty());
  for (const auto& [tau, w] : fine.cert.witness) CHECK(!w.empty());
  CHECK(fine.cert.rounds.size() == 2);  // dimensions 1 and 2
  // iteration cap surfaces as a structured failure
  CHECK_THROWS_AS(make_sufficiently_fine(cuspidal({{{1, 0}, {500, 1}}}, {1}), grp, 0), Error);
}

TEST_CASE("algorithm 2 on a Voronoi cone: class preserved up to subdivision") {
  ArithmeticGroup grp{2, 11};
  VoronoiComplex c = build_voronoi_complex(grp);
  HomologyPresentation h = homology(c);
  Chain b = lift_basis_cycle(h, 1, 2);
  Chain red = algorithm2_reduce(b, grp);
  CHECK(is_relative_cycle(red, grp).is_cycle);
  CHECK(project_cycle(h, 1, red) == project_cycle(h, 1, b));
}

TEST_CASE("algorithm 2 on Hecke images agrees with algorithm 1 and AR") {
  ArithmeticGroup grp{2, 11};
  VoronoiComplex c = build_voronoi_complex(grp);
  HomologyPresentation h = homology(c);
  HeckeOperator t2 = coset_decomposition(grp, 2);
  for (size_t i = 0; i < basis_size(h, 1); i++) {
    Chain b = lift_basis_cycle(h, 1, i);
    Chain img = hecke_image(t2, b);
    Chain a2 = algorithm2_reduce(img, grp);
    CHECK(is_relative_cycle(a2, grp).is_cycle);
    Chain a1 = algorithm1_reduce(img, grp).reduced;
    Chain ar = ash_rudolph_reduce(img, grp);
    auto p2 = project_cycle(h, 1, a2);
    CHECK(p2 == project_cycle(h, 1, a1));
    CHECK(p2 == project_cycle(h, 1, ar));
  }
}

TEST_CASE("hecke matrix at level 11: T2 and T3 charpolys match the Manin oracle") {
  ArithmeticGroup grp{2, 11};
  VoronoiComplex c = build_voronoi_complex(grp);
  HomologyPresentation h = homology(c);
  oracles::ManinSpace manin(11);
  for (long p : {2L, 3L}) {
    HeckeMatrixResult mine = hecke_matrix(h, 1, p, Algorithm::AshRudolph);
    QMat theirs = manin.hecke_matrix(p);
    CHECK(charpoly(theirs) == mine.charpoly);
  }
}
