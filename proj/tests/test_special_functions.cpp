#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "overdet/special_functions.hpp"

using namespace overdet;
using namespace overdet::special;

TEST_CASE("bessel_j matches the standard library on integer and half-integer orders") {
  double worst = 0.0;
  for (int twice = 0; twice <= 70; ++twice) {
    for (double x = 0.05; x <= 50.0; x += 0.37) {
      const double ref = std::cyl_bessel_j(0.5 * twice, x);
      const double got = bessel_j(BesselOrder::from_twice(twice), x);
      worst = std::max(worst, std::fabs(got - ref));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("half-integer closed forms") {
  for (double x : {0.3, 1.0, 4.2, 17.5, 33.0}) {
    const double s = std::sqrt(2.0 / (std::numbers::pi * x));
    CHECK(bessel_j(BesselOrder::from_twice(1), x) == doctest::Approx(s * std::sin(x)).epsilon(1e-13));
    CHECK(bessel_j(BesselOrder::from_twice(3), x) ==
          doctest::Approx(s * (std::sin(x) / x - std::cos(x))).epsilon(1e-12));
  }
}

TEST_CASE("order zero at the origin") {
  CHECK(bessel_j(BesselOrder::integer(0), 0.0) == 1.0);
  CHECK(bessel_j(BesselOrder::integer(3), 0.0) == 0.0);
}

TEST_CASE("derivative agrees with a centered difference") {
  for (int twice : {0, 1, 2, 5, 8, 25}) {
    for (double x : {0.7, 3.3, 9.1, 21.0}) {
      const auto o = BesselOrder::from_twice(twice);
      const double h = 1e-5;
      const double fd = (bessel_j(o, x + h) - bessel_j(o, x - h)) / (2 * h);
      CHECK(bessel_j_prime(o, x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("helmholtz profile solves the radial Helmholtz equation") {
  for (int dim : {2, 3, 4}) {
    for (int degree : {0, 1, 6}) {
      const double x = 3.7;
      const double h = 1e-4;
      const auto p = helmholtz_profile(dim, degree, x);
      const double fpp = (helmholtz_profile(dim, degree, x + h).derivative -
                          helmholtz_profile(dim, degree, x - h).derivative) /
                         (2 * h);
      const double gamma = degree * (degree + dim - 2.0);
      const double res = fpp + (dim - 1) * p.derivative / x - gamma * p.value / (x * x) + p.value;
      CHECK(std::fabs(res) < 1e-7);
    }
  }
}

TEST_CASE("radial zeros: N = 3 gives multiples of pi") {
  CHECK(radial_profile_zero(3, 1) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
  CHECK(std::fabs(radial_profile_zero(3, 2) - 2 * std::numbers::pi) < 1e-10);
  CHECK(radial_dirichlet_eigenvalue(3, 2) == doctest::Approx(4 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("radial zeros: N = 2 matches the zeros of J_0") {
  CHECK(radial_profile_zero(2, 1) == doctest::Approx(2.404825557695773).epsilon(1e-12));
  CHECK(radial_profile_zero(2, 2) == doctest::Approx(5.520078110286311).epsilon(1e-12));
}

TEST_CASE("first derivative zeros: N = 2 equals j'_{i,1}") {
  // j'_{1,1} and j'_{5,1}
  CHECK(first_derivative_zero(2, 1) == doctest::Approx(1.841183781340659).epsilon(1e-11));
  CHECK(first_derivative_zero(2, 5) == doctest::Approx(6.415616375700).epsilon(1e-10));
}

TEST_CASE("zero table shape and domain") {
  const auto t = appendix_table(4, 12);
  CHECK(t.rows.size() == 12);
  CHECK(t.rows.back().zero == doctest::Approx(14.631514).epsilon(1e-6));
  for (std::size_t k = 1; k < t.rows.size(); ++k) CHECK(t.rows[k].zero > t.rows[k - 1].zero);
  CHECK_THROWS_AS(appendix_table(5, 3), DomainError);
  CHECK_THROWS_AS(appendix_table(3, 0), DomainError);
}

TEST_CASE("find_zero") {
  const double r = find_zero([](double x) { return std::cos(x); }, {1.0, 2.0}, 1e-14);
  CHECK(r == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
  CHECK_THROWS_AS(find_zero([](double x) { return x * x + 1; }, {-1.0, 1.0}, 1e-12), BracketError);
  CHECK(find_zero([](double x) { return x; }, {0.0, 1.0}, 1e-12) == 0.0);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(BesselOrder::from_twice(-1), DomainError);
  CHECK_THROWS_AS(bessel_j(BesselOrder::integer(1), -1.0), DomainError);
  CHECK_THROWS_AS(helmholtz_profile(1, 0, 1.0), DomainError);
  CHECK_THROWS_AS(radial_profile_zero(3, 0), DomainError);
}

TEST_CASE("three-term recurrence") {
  double worst = 0.0;
  for (int twice = 2; twice <= 40; ++twice) {
    const double alpha = 0.5 * twice;
    for (double x = 0.1; x <= 40.0; x += 0.1) {
      const double lhs = bessel_j(BesselOrder::from_twice(twice - 2), x) +
                         bessel_j(BesselOrder::from_twice(twice + 2), x);
      const double rhs = 2.0 * alpha / x * bessel_j(BesselOrder::from_twice(twice), x);
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("helmholtz residual at random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xs(0.5, 30.0);
  std::uniform_int_distribution<int> dims(2, 4);
  std::uniform_int_distribution<int> degrees(0, 8);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int dim = dims(rng);
    const int degree = degrees(rng);
    const double x = xs(rng);
    const double h = 1e-4;
    const auto p = helmholtz_profile(dim, degree, x);
    const double fpp = (helmholtz_profile(dim, degree, x + h).derivative -
                        helmholtz_profile(dim, degree, x - h).derivative) /
                       (2 * h);
    const double gamma = degree * (degree + dim - 2.0);
    worst = std::max(worst, std::fabs(fpp + (dim - 1) * p.derivative / x -
                                      gamma * p.value / (x * x) + p.value));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("derivative zeros interlace with the degree") {
  for (int dim : {2, 3, 4}) {
    double prev = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double z = first_derivative_zero(dim, i);
      CHECK(z > prev);
      prev = z;
    }
  }
}

TEST_CASE("N = 3 first radial eigenvalue is pi^2") {
  CHECK(radial_dirichlet_eigenvalue(3, 1) ==
        doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-13));
}
