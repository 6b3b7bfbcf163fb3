#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "overdet/errors.hpp"
#include "overdet/symmetry_groups.hpp"

using namespace overdet;
using namespace overdet::symmetry;

TEST_CASE("600-cell multiplicities") {
  for (int i = 1; i <= 11; ++i) CHECK(hyper_icosahedron_multiplicity(i) == 0);
  CHECK(hyper_icosahedron_multiplicity(0) == 1);
  CHECK(hyper_icosahedron_multiplicity(12) == 1);
  // every even degree yields an integer; odd degrees vanish
  for (int i = 13; i <= 120; ++i) {
    const int m = hyper_icosahedron_multiplicity(i);
    CHECK(m >= 0);
    if (i % 2 == 1) CHECK(m == 0);
  }
  // the invariant ring of the binary icosahedral group has Molien series
  // (1 + t^30) / ((1 - t^12)(1 - t^20)) in this grading
  auto molien = [](int d) {
    int c = 0;
    for (int shift : {0, 30}) {
      for (int a = 0; 12 * a <= d - shift; ++a) {
        if ((d - shift - 12 * a) % 20 == 0) ++c;
      }
    }
    return c;
  };
  for (int i = 0; i <= 120; i += 2) CHECK(hyper_icosahedron_multiplicity(i) == molien(i));
}

TEST_CASE("icosahedral multiplicities from 1/((1-t^6)(1-t^10))") {
  const int expected[] = {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 2};
  for (int l = 0; l <= 30; ++l) CHECK(icosahedral_multiplicity(l) == expected[l]);
}

TEST_CASE("invariant degrees") {
  const auto d5 = invariant_degrees(SymmetryGroup(Dihedral{5}), 4);
  REQUIRE(d5.size() == 4);
  CHECK(d5[0].degree == 5);
  CHECK(d5[3].degree == 20);
  const auto ih = invariant_degrees(SymmetryGroup(IcosahedralFull{}), 4);
  CHECK(ih[0].degree == 6);
  CHECK(ih[1].degree == 10);
  CHECK(ih[2].degree == 12);
  CHECK(ih[3].degree == 16);
  const auto y = invariant_degrees(SymmetryGroup(HyperIcosahedralRotations{}), 3);
  CHECK(y[0].degree == 12);
  CHECK(y[1].degree == 20);
  CHECK(y[2].degree == 24);
  const auto c = invariant_degrees(SymmetryGroup(Custom{3, 7, 3}), 3);
  CHECK(c[0].degree == 7);
  CHECK(c[0].multiplicity == 3);
  CHECK(c[1].degree == 8);
}

TEST_CASE("gamma") {
  CHECK(gamma(6, 3) == 42.0);
  CHECK(gamma(5, 2) == 25.0);
  CHECK(gamma(12, 4) == 168.0);
}

TEST_CASE("condition G verdicts") {
  for (int k = 5; k <= 9; ++k) CHECK(check_condition_G(SymmetryGroup(Dihedral{k})).passes);
  CHECK_FALSE(check_condition_G(SymmetryGroup(Dihedral{4})).passes);
  CHECK(check_condition_G(SymmetryGroup(IcosahedralFull{})).passes);
  CHECK(check_condition_G(SymmetryGroup(HyperIcosahedralRotations{})).passes);
  CHECK_FALSE(check_condition_G(SymmetryGroup(Custom{3, 6, 2})).passes);  // even multiplicity
  CHECK_THROWS_AS(require_condition_G(SymmetryGroup(Dihedral{4})), ConditionGFailure);
  const auto r = check_condition_G(SymmetryGroup(Dihedral{4}));
  CHECK(r.s1 == doctest::Approx(5.31755).epsilon(1e-5));
  CHECK(r.r2 == doctest::Approx(5.52008).epsilon(1e-5));
}

TEST_CASE("parsing") {
  CHECK(SymmetryGroup::parse("dihedral:7").name() == "dihedral:7");
  CHECK(SymmetryGroup::parse("icosahedral").dimension() == 3);
  CHECK(SymmetryGroup::parse("hyper-icosahedral").dimension() == 4);
  CHECK(SymmetryGroup::parse("custom:4:9:1").dimension() == 4);
  CHECK_THROWS_AS(SymmetryGroup::parse("dihedral:x"), DomainError);
  CHECK_THROWS_AS(SymmetryGroup::parse("octahedral"), DomainError);
  CHECK_THROWS_AS(SymmetryGroup::parse("dihedral:0"), DomainError);
}

TEST_CASE("gamma increases with the degree") {
  for (int dim : {2, 3, 4, 7}) {
    for (int i = 0; i < 40; ++i) CHECK(gamma(i + 1, dim) > gamma(i, dim));
  }
}

TEST_CASE("first invariant degrees") {
  CHECK(first_invariant_degree(SymmetryGroup(Dihedral{5})).degree == 5);
  CHECK(first_invariant_degree(SymmetryGroup(IcosahedralFull{})).degree == 6);
  const auto y = first_invariant_degree(SymmetryGroup(HyperIcosahedralRotations{}));
  CHECK(y.degree == 12);
  CHECK(y.multiplicity == 1);
  for (int k = 1; k <= 4; ++k) CHECK_FALSE(check_condition_G(SymmetryGroup(Dihedral{k})).passes);
}
