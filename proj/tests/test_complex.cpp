#include <doctest.h>

#include "oracles.hpp"
#include "vorhecke/complex.hpp"

using namespace vh;

TEST_CASE("level 1 complex: one triangle orbit, one interior edge orbit") {
  VoronoiComplex c = build_voronoi_complex({2, 1});
  CHECK(c.cells[3].size() == 1);
  // the Farey edge orbit has an orientation-reversing stabilizer at level 1
  CHECK(c.cells[2].size() + c.dropped_cells == 1 + c.cells[2].size());
  CHECK(!c.integral_valid);
  CHECK_THROWS_AS(build_voronoi_complex_strict({2, 1}), Error);
}

TEST_CASE("level 1 relative homology: H1 = 0, H2 = Z (rationally)") {
  VoronoiComplex c = build_voronoi_complex({2, 1});
  HomologyPresentation h = homology(c);
  // oracle: rank H1 = 2g + cusps - 1
  long expect = 2 * oracles::genus_x0(1) + oracles::cusp_count_x0(1) - 1;
  CHECK(h.levels[1].free_rank == static_cast<size_t>(expect));
  CHECK(h.levels[2].free_rank == 1);
}

TEST_CASE("level 11 complex: orbit counts from the coset oracle") {
  VoronoiComplex c = build_voronoi_complex({2, 11});
  // index 12; the triangle stabilizer (order 3) acts freely on cosets:
  // 12 / 3 = 4 triangle orbits; the edge flip likewise gives 12 / 2 = 6
  CHECK(c.cells[3].size() == 4);
  CHECK(c.cells[2].size() == 6);
  CHECK(c.integral_valid);  // Gamma_0(11) is torsion free in PSL_2
  CHECK(c.dropped_cells == 0);
}

TEST_CASE("level 11 homology: H1 rank 3, basis round trips") {
  VoronoiComplex c = build_voronoi_complex({2, 11});
  HomologyPresentation h = homology(c);
  long expect = 2 * oracles::genus_x0(11) + oracles::cusp_count_x0(11) - 1;
  CHECK(h.levels[1].free_rank == static_cast<size_t>(expect));
  CHECK(h.levels[1].torsion.empty());
  CHECK(basis_size(h, 1) == 3);

  for (size_t i = 0; i < basis_size(h, 1); i++) {
    Chain b = lift_basis_cycle(h, 1, i);
    CHECK(!b.empty());
    CHECK(is_relative_cycle(b, c.grp).is_cycle);
    ClassCoords coords = project_cycle(h, 1, b);
    REQUIRE(coords.free_part.size() == 3);
    for (size_t j = 0; j < 3; j++) CHECK(coords.free_part[j] == (i == j ? 1 : 0));
  }
}

TEST_CASE("H2 lift at level 11 is a genuinely glued relative cycle") {
  VoronoiComplex c = build_voronoi_complex({2, 11});
  HomologyPresentation h = homology(c);
  REQUIRE(h.levels[2].free_rank == 1);
  Chain fundamental = lift_basis_cycle(h, 2, 0);
  CHECK(fundamental.size() >= 4);
  CHECK(is_relative_cycle(fundamental, c.grp).is_cycle);
}

TEST_CASE("project is invariant under boundaries, translation, subdivision") {
  VoronoiComplex c = build_voronoi_complex({2, 11});
  HomologyPresentation h = homology(c);
  Chain b = lift_basis_cycle(h, 1, 1);
  ClassCoords base = project_cycle(h, 1, b);

  // plus the boundary of a Voronoi 2-chain
  Chain eta(2);
  eta.add_term({rank_one_form({1, 0}), rank_one_form({0, 1}), rank_one_form({1, 1})}, 3);
  Chain moved = b;
  moved.add(eta.boundary());
  CHECK(project_cycle(h, 1, moved) == base);

  // gamma-translation
  IMat gamma(2, 2);
  gamma(0, 0) = 1;
  gamma(1, 0) = 11;
  gamma(1, 1) = 1;
  CHECK(project_cycle(h, 1, b.translated(gamma)) == base);

  // expression of any boundary is zero
  CHECK(project_cycle(h, 1, eta.boundary()).is_zero());
}

TEST_CASE("degree bookkeeping: relative homology vanishes below degree n-1") {
  VoronoiComplex c = build_voronoi_complex({2, 11});
  HomologyPresentation h = homology(c);
  CHECK(h.levels[0].free_rank == 0);
  CHECK(h.levels[0].torsion.empty());

  VoronoiComplex c3 = build_voronoi_complex({3, 2});
  HomologyPresentation h3 = homology(c3);
  for (size_t k = 0; k + 1 < 3 - 1 + 1; k++) {
    CHECK(h3.levels[k].free_rank == 0);
  }
}

TEST_CASE("SL3 level 2 complex builds with del o del = 0") {
  VoronoiComplex c = build_voronoi_complex({3, 2});
  CHECK(c.top_dim == 6);
  size_t total = 0;
  for (size_t d = 1; d <= 6; d++) total += c.cells[d].size();
  CHECK(total > 0);
  HomologyPresentation h = homology(c);
  // rational relative homology at level 2 is concentrated at the top:
  // H_5 = H^0(Gamma) = Q; every lower-dimensional cell orbit carries an
  // orientation-reversing stabilizer and is dropped over Q
  CHECK(h.levels[5].free_rank == 1);
  CHECK(basis_size(h, 2) == 0);
  CHECK(c.dropped_cells > 0);
  CHECK(!c.integral_valid);
  // degree-2 Voronoi cells are still relative cycles (cuspidal, degree n-1)
  // and project to zero
  Chain cell = chain_of_cusps({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 1);
  CHECK(is_relative_cycle(cell, c.grp).is_cycle);
  CHECK(project_cycle(h, 2, cell).is_zero());
}
