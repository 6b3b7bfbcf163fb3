#include "overdet/special_functions.hpp"

#include <array>
#include <limits>
#include <numbers>
#include <string>

namespace overdet::special {

namespace {

// Ascending series, summed in extended precision. Accurate when x <= 12 or
// when the order is not much smaller than x.
double series_j(double alpha, double x) {
  const long double hx = 0.5L * static_cast<long double>(x);
  const long double q = -hx * hx;
  long double term = std::pow(hx, static_cast<long double>(alpha)) /
                     std::tgamma(static_cast<long double>(alpha) + 1.0L);
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * (static_cast<long double>(k) + alpha));
    sum += term;
    if (std::fabs(term) <= 1e-21L * std::fabs(sum) && k > static_cast<int>(hx)) break;
  }
  return static_cast<double>(sum);
}

// Hankel asymptotic expansion for large x; used for x >= 17 where the
// smallest term is below 1e-14.
double asymptotic_j(double alpha, double x) {
  const double mu = 4.0 * alpha * alpha;
  double p = 0.0;
  double q = 0.0;
  double term = 1.0;  // a_k(alpha) / x^k
  double last = 1e300;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu - odd * odd) / (k * 8.0 * x);
    }
    const double mag = std::fabs(term);
    if (mag > last) break;
    last = mag;
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
    }
    if (mag < 1e-17) break;
  }
  const double chi = x - (0.5 * alpha + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double seed_integer(int n, double x) {
  return x < 17.0 ? series_j(n, x) : asymptotic_j(n, x);
}

// Miller's downward recurrence for orders above x. `twice` selects the
// family; the unnormalised sequence is rescaled against exactly known values.
double miller_j(int twice, double x) {
  const double alpha = 0.5 * twice;
  const int top = 2 * static_cast<int>(std::max(alpha, x) / 2.0 + 30.0 +
                                       std::sqrt(40.0 * std::max(alpha, x)) / 2.0);
  const bool integer = twice % 2 == 0;
  // order of element k is k (integer) or k - 1/2 (half-integer)
  auto order_of = [&](int k) { return integer ? static_cast<double>(k) : k - 0.5; };
  double above = 0.0;
  double here = 1e-300;
  double target = 0.0;
  double norm_sum = 0.0;  // integer: J0 + 2 sum J_2k
  double low0 = 0.0;      // half-integer: element k=0 -> J_{-1/2}
  double low1 = 0.0;      //               element k=1 -> J_{1/2}
  const int target_k = integer ? twice / 2 : (twice + 1) / 2;
  for (int k = top; k >= 1; --k) {
    const double below = 2.0 * order_of(k) / x * here - above;
    above = here;
    here = below;  // element k-1
    if (std::fabs(here) > 1e250) {
      here *= 1e-250;
      above *= 1e-250;
      target *= 1e-250;
      norm_sum *= 1e-250;
      low1 *= 1e-250;
    }
    const int km1 = k - 1;
    if (km1 == target_k) target = here;
    if (integer) {
      if (km1 > 0 && km1 % 2 == 0) norm_sum += 2.0 * here;
      if (km1 == 0) norm_sum += here;
    } else {
      if (km1 == 1) low1 = here;
      if (km1 == 0) low0 = here;
    }
  }
  if (target_k == top) target = 0.0;
  if (integer) return target / norm_sum;
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  const double exact0 = amp * std::cos(x);
  const double exact1 = amp * std::sin(x);
  const double m = std::max(std::fabs(low0), std::fabs(low1));
  const double l0 = low0 / m;
  const double l1 = low1 / m;
  const double scale = (exact0 * l0 + exact1 * l1) / (l0 * l0 + l1 * l1);
  return target / m * scale;
}

// J for twice_order >= -1 (the derivative formula needs J_{-1/2}).
double j_signed(int twice, double x) {
  if (twice < 0 && twice % 2 == 0) {
    const int n = -twice / 2;
    return (n % 2 == 0 ? 1.0 : -1.0) * j_signed(-twice, x);
  }
  const double alpha = 0.5 * twice;
  if (x == 0.0) {
    if (twice == 0) return 1.0;
    if (twice == -1) return std::numeric_limits<double>::infinity();
    return 0.0;
  }
  if (x <= 12.0 || alpha >= x) {
    if (x <= 12.0 || alpha >= 2.0 * x) return series_j(alpha, x);
    return miller_j(twice, x);
  }
  // Forward recurrence is stable while the order stays below x.
  double prev;
  double cur;
  double order;
  if (twice % 2 == 0) {
    prev = seed_integer(0, x);
    cur = seed_integer(1, x);
    order = 1.0;
    if (twice == 0) return prev;
  } else {
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    prev = amp * std::cos(x);  // J_{-1/2}
    cur = amp * std::sin(x);   // J_{1/2}
    order = 0.5;
    if (twice == -1) return prev;
  }
  while (order < alpha) {
    const double next = 2.0 * order / x * cur - prev;
    prev = cur;
    cur = next;
    order += 1.0;
  }
  return cur;
}

// Profiles make sense in any dimension; the tabulated cases are N = 2, 3, 4.
void require_dimension(int dim) {
  if (dim < 2 || dim > 32) {
    throw DomainError("dimension must lie in [2, 32] (got " + std::to_string(dim) + ")");
  }
}

}  // namespace

BesselOrder BesselOrder::from_twice(int twice_order) {
  if (twice_order < 0) throw DomainError("Bessel order must be non-negative");
  return BesselOrder(twice_order);
}

double bessel_j(BesselOrder order, double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_j: argument must be >= 0");
  return j_signed(order.twice_order(), x);
}

double bessel_j_prime(BesselOrder order, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_j_prime: argument must be > 0");
  const int twice = order.twice_order();
  if (twice == 0) return -j_signed(2, x);
  return 0.5 * (j_signed(twice - 2, x) - j_signed(twice + 2, x));
}

ProfileValue helmholtz_profile(int dim, int degree, double x) {
  require_dimension(dim);
  if (degree < 0) throw DomainError("helmholtz_profile: degree must be >= 0");
  if (!(x > 0.0)) throw DomainError("helmholtz_profile: argument must be > 0");
  const auto order = BesselOrder::from_twice(dim + 2 * degree - 2);
  const double expo = 1.0 - 0.5 * dim;
  const double j = bessel_j(order, x);
  const double jp = bessel_j_prime(order, x);
  const double scale = std::pow(x, expo);
  return {scale * j, scale * (jp + expo * j / x)};
}

double radial_profile_zero(int dim, int k) {
  require_dimension(dim);
  if (k < 1) throw DomainError("radial_profile_zero: k must be >= 1");
  auto f = [dim](double x) { return helmholtz_profile(dim, 0, x).value; };
  const auto zeros = scan_zeros(f, kScanStep, 10.0 + 4.0 * k, kScanStep, k, kZeroTol);
  if (static_cast<int>(zeros.size()) < k) {
    throw BracketError("radial_profile_zero: zero not bracketed", kScanStep, 10.0 + 4.0 * k,
                       0.0, 0.0);
  }
  return zeros[static_cast<std::size_t>(k - 1)];
}

double first_derivative_zero(int dim, int degree) {
  require_dimension(dim);
  if (degree < 1) throw DomainError("first_derivative_zero: degree must be >= 1");
  auto fp = [dim, degree](double x) { return helmholtz_profile(dim, degree, x).derivative; };
  const double limit = 10.0 + 2.0 * degree;
  const auto zeros = scan_zeros(fp, kScanStep, limit, kScanStep, 1, kZeroTol);
  if (zeros.empty()) {
    throw BracketError("first_derivative_zero: zero not bracketed", kScanStep, limit, 0.0, 0.0);
  }
  return zeros.front();
}

ZeroTable appendix_table(int dim, int i_max) {
  if (dim < 2 || dim > 4) {
    throw DomainError("appendix_table: dimension must be 2, 3 or 4 (got " + std::to_string(dim) +
                      ")");
  }
  if (i_max < 1) throw DomainError("appendix_table: i_max must be >= 1");
  ZeroTable table{dim, radial_profile_zero(dim, 2), {}};
  table.rows.reserve(static_cast<std::size_t>(i_max));
  for (int i = 1; i <= i_max; ++i) table.rows.push_back({i, first_derivative_zero(dim, i)});
  return table;
}

}  // namespace overdet::special
