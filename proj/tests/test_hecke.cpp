#include <doctest.h>

#include "vorhecke/hecke.hpp"

using namespace vh;

TEST_CASE("coset decomposition at n=2") {
  HeckeOperator t = coset_decomposition({2, 11}, 2);
  REQUIRE(t.cosets.size() == 3);
  // the classical representatives [[1,0],[0,2]], [[1,1],[0,2]], [[2,0],[0,1]]
  std::set<std::vector<long>> got;
  for (const auto& s : t.cosets)
    got.insert({s(0, 0).get_si(), s(0, 1).get_si(), s(1, 0).get_si(), s(1, 1).get_si()});
  std::set<std::vector<long>> expect = {{1, 0, 0, 2}, {1, 1, 0, 2}, {2, 0, 0, 1}};
  CHECK(got == expect);
  for (long p : {2L, 3L, 5L}) {
    CHECK(coset_decomposition({2, 11}, p).cosets.size() == static_cast<size_t>(p + 1));
    CHECK(coset_decomposition({2, 1}, p).cosets.size() == static_cast<size_t>(p + 1));
  }
}

TEST_CASE("coset decomposition at n=3: p^2 + p + 1") {
  CHECK(coset_decomposition({3, 1}, 2).cosets.size() == 7);
  CHECK(coset_decomposition({3, 5}, 2).cosets.size() == 7);
  CHECK(coset_decomposition({3, 2}, 3).cosets.size() == 13);
}

TEST_CASE("unsupported operators") {
  CHECK_THROWS_AS(coset_decomposition({2, 11}, 11), Error);
  CHECK_THROWS_AS(coset_decomposition({2, 11}, 4), Error);
  CHECK_THROWS_AS(coset_decomposition({2, 14}, 7), Error);
}

TEST_CASE("coset completeness on random double coset elements") {
  SplitMix64 rng(13);
  for (auto grp : {ArithmeticGroup{2, 11}, ArithmeticGroup{3, 2}}) {
    HeckeOperator t = coset_decomposition(grp, grp.n == 2 ? 3 : 3);
    IMat g = IMat::identity(grp.n);
    g(grp.n - 1, grp.n - 1) = t.p;
    for (int trial = 0; trial < 25; trial++) {
      auto rnd = [&](void) {
        IMat m = IMat::identity(grp.n);
        for (int w = 0; w < 5; w++) {
          size_t i = rng.range(0, grp.n - 1), j = rng.range(0, grp.n - 1);
          if (i == j) continue;
          IMat e = IMat::identity(grp.n);
          long v = rng.range(-2, 2);
          e(i, j) = (i > j && j == 0) ? v * grp.level : v;  // stay in Gamma_0(N)
          m = mul(m, e);
        }
        return m;
      };
      IMat elt = mul(mul(rnd(), g), rnd());
      auto idx = coset_of(t, elt);
      CHECK(idx.has_value());
    }
  }
}

TEST_CASE("hecke image basics") {
  HeckeOperator id = identity_operator({2, 11});
  Chain xi(1);
  xi.add_term({rank_one_form({1, 0}), rank_one_form({0, 1})}, 2);
  xi.add_term({rank_one_form({1, 0}), rank_one_form({1, 1})}, -1);
  CHECK(hecke_image(id, xi) == xi);

  HeckeOperator t2 = coset_decomposition({2, 11}, 2);
  Chain img = hecke_image(t2, xi);
  CHECK(img.size() <= t2.cosets.size() * xi.size());
  CHECK(!img.empty());
  // the image of a relative cycle is a relative cycle (degree n-1 cuspidal)
  CHECK(is_relative_cycle(img, t2.grp).is_cycle);
}

TEST_CASE("parallel hecke image equals the serial reference") {
  HeckeOperator t3 = coset_decomposition({2, 11}, 3);
  SplitMix64 rng(44);
  Chain xi(1);
  for (int i = 0; i < 8; i++) {
    IVec a = {rng.range(-6, 6), rng.range(-6, 6)};
    IVec b = {rng.range(-6, 6), rng.range(-6, 6)};
    if (is_zero(a) || is_zero(b)) continue;
    xi.add_term({rank_one_form(sign_normalize(primitive(a))), rank_one_form(sign_normalize(primitive(b)))},
                rng.range(-4, 4));
  }
  CHECK(hecke_image(t3, xi) == hecke_image_parallel(t3, xi));
}
