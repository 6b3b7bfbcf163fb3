#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "overdet/dirichlet_spectrum.hpp"
#include "overdet/special_functions.hpp"

using namespace overdet;
using namespace overdet::spectrum;

TEST_CASE("free radial channel in N = 3: rho (j pi)^2 - 1") {
  const double rho = 0.01;
  const auto mu = mode_eigenvalues(ModeOperator::free(3, rho, 0.0), 3);
  for (int j = 1; j <= 3; ++j) {
    const double z = j * std::numbers::pi;
    CHECK(mu[j - 1] == doctest::Approx(rho * z * z - 1.0).epsilon(1e-9));
  }
}

TEST_CASE("free nonradial channels against Bessel zeros") {
  for (int dim : {2, 4}) {
    for (int degree : {0, 3}) {
      const double rho = 0.02;
      const double gamma = symmetry::gamma(degree, dim);
      const auto zeros = special::scan_zeros(
          [&](double x) { return special::helmholtz_profile(dim, degree, x).value; }, 0.5, 40.0,
          special::kScanStep, 2, 1e-14);
      const auto mu = mode_eigenvalues(ModeOperator::free(dim, rho, gamma), 2);
      for (int j = 0; j < 2; ++j) {
        CHECK(mu[j] == doctest::Approx(rho * zeros[j] * zeros[j] - 1.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("finite-difference oracle converges") {
  const auto sol = radial::solve_radial(radial::ProblemParams::from_rho(2, 0.5 * radial::rho_max(2)));
  const auto op = ModeOperator::from_solution(sol, 0.0);
  const auto shoot = mode_eigenvalues(op, 3, {.cross_check = false});
  const auto fd = fd_eigenvalues_extrapolated(op, 3, 4096);
  for (int j = 0; j < 3; ++j) CHECK(std::fabs(shoot[j] - fd[j]) < 1e-6 * std::max(1.0, std::fabs(fd[j])));
}

TEST_CASE("Morse index two on the radial channel") {
  for (int dim : {2, 3}) {
    for (double frac : {0.1, 0.6, 0.95}) {
      const auto sol = radial::solve_radial(radial::ProblemParams::from_rho(dim, frac * radial::rho_max(dim)));
      const auto m = morse_check(sol);
      CHECK(m.mu_bar_1 < 0.0);
      CHECK(m.mu_bar_2 > 0.0);
    }
  }
}

TEST_CASE("first eigenvalue increases with gamma") {
  const auto sol = radial::solve_radial(radial::ProblemParams::from_rho(3, 0.4 * radial::rho_max(3)));
  double prev = -1e9;
  for (int degree : {1, 2, 6, 10}) {
    const auto mu = mode_eigenvalues(ModeOperator::from_solution(sol, symmetry::gamma(degree, 3)), 1);
    CHECK(mu[0] > prev);
    prev = mu[0];
  }
}

TEST_CASE("potential is 3 (u^+)^2") {
  const auto sol = radial::solve_radial(radial::ProblemParams::from_rho(3, 0.4 * radial::rho_max(3)));
  const auto op = ModeOperator::from_solution(sol, 0.0);
  for (double r : {0.0, 0.1, 0.3, 0.7, 1.0}) {
    const double u = std::max(0.0, sol.u(r));
    CHECK(op.potential(r) == doctest::Approx(3 * u * u).epsilon(1e-12));
  }
  CHECK(op.potential(0.95) == 0.0);
}

TEST_CASE("Rayleigh quotient reproduces eigenvalues") {
  const auto sol = radial::solve_radial(radial::ProblemParams::from_rho(2, 0.3 * radial::rho_max(2)));
  const auto op = ModeOperator::from_solution(sol, symmetry::gamma(5, 2));
  const auto mu = mode_eigenvalues(op, 2);
  for (int j = 1; j <= 2; ++j) {
    const auto f = mode_eigenfunction(op, j);
    // the endpoint zero may land on either side of r = 1; count interior nodes only
    int interior = 0;
    for (std::size_t k = 1; k + 1 < f.f.size(); ++k) interior += (f.f[k] > 0.0) != (f.f[k - 1] > 0.0);
    CHECK(interior == j - 1);
    CHECK(rayleigh_quotient(op, f) == doctest::Approx(mu[j - 1]).epsilon(1e-7));
  }
}

TEST_CASE("mu2_G changes sign across the admissible interval") {
  const symmetry::SymmetryGroup ih(symmetry::IcosahedralFull{});
  const auto near_top =
      radial::solve_radial(radial::ProblemParams::from_rho(3, 0.99 * radial::rho_max(3)));
  CHECK(mu2_G(near_top, ih).mu2_G > 0.0);
  const auto large_R = radial::solve_radial(radial::ProblemParams::from_radius(3, 40.0));
  CHECK(mu2_G(large_R, ih).mu2_G < 0.0);
}

TEST_CASE("limit form") {
  const double q = limit_form_value([](double x) { return x > 0.0 ? std::sin(x) : 0.0; },
                                    [](double x) { return x > 0.0 ? std::cos(x) : 0.0; });
  CHECK(std::fabs(q) < 1e-8);
  const auto bumps = scan_limit_form_bumps();
  bool negative = false;
  for (const auto& b : bumps) negative = negative || b.value < 0.0;
  CHECK(negative);
}

TEST_CASE("the potential never lowers an eigenvalue") {
  const int dim = 3;
  const auto sol = radial::solve_radial(radial::ProblemParams::from_rho(dim, 0.5 * radial::rho_max(dim)));
  const auto with = mode_eigenvalues(ModeOperator::from_solution(sol, 0.0), 3);
  const auto without = mode_eigenvalues(ModeOperator::free(dim, sol.rho(), 0.0), 3);
  for (int j = 0; j < 3; ++j) CHECK(with[j] >= without[j]);
}

TEST_CASE("lowest three eigenvalues agree with the oracle on every channel") {
  const auto sol = radial::solve_radial(radial::ProblemParams::from_rho(2, 0.3 * radial::rho_max(2)));
  const symmetry::SymmetryGroup d5(symmetry::Dihedral{5});
  std::vector<double> gammas{0.0};
  for (const auto& d : symmetry::invariant_degrees(d5, 4)) gammas.push_back(symmetry::gamma(d.degree, 2));
  for (double g : gammas) {
    const auto op = ModeOperator::from_solution(sol, g);
    const auto shoot = mode_eigenvalues(op, 3, {.cross_check = false});
    const auto fd = fd_eigenvalues(op, 3, 4096);
    for (int j = 0; j < 3; ++j) CHECK(std::fabs(shoot[j] - fd[j]) <= 1e-4 * std::max(1.0, std::fabs(fd[j])));
  }
}
