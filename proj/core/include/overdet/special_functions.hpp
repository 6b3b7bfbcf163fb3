#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "overdet/errors.hpp"

// Bessel functions of the first kind for integer and half-integer orders, the
// radial Helmholtz profiles x^{1-N/2} J_{N/2-1+i}(x) and bracketing root finders.
namespace overdet::special {

/// Order of a Bessel function, stored as 2*alpha so that integer and
/// half-integer orders are represented exactly.
class BesselOrder {
 public:
  static BesselOrder from_twice(int twice_order);
  static BesselOrder integer(int n) { return from_twice(2 * n); }

  int twice_order() const noexcept { return twice_; }
  double value() const noexcept { return 0.5 * twice_; }
  bool is_integer() const noexcept { return twice_ % 2 == 0; }

 private:
  explicit BesselOrder(int twice) : twice_(twice) {}
  int twice_;
};

/// J_alpha(x) for x >= 0. Absolute accuracy ~1e-13 on x <= 50.
double bessel_j(BesselOrder order, double x);

/// d/dx J_alpha(x) for x > 0.
double bessel_j_prime(BesselOrder order, double x);

struct ProfileValue {
  double value;
  double derivative;
};

/// f(x) = x^{1-N/2} J_{N/2-1+i}(x) and f'(x). f solves
/// -f'' - (N-1) f'/x + i(i+N-2) f/x^2 = f, the radial Helmholtz equation in R^N.
ProfileValue helmholtz_profile(int dim, int degree, double x);

struct Bracket {
  double lo;
  double hi;
};

/// Brent's method on a sign-changing bracket. Iterates until the bracket
/// width is below `tol` (or the function vanishes exactly). Deterministic.
template <class F>
double find_zero(F&& f, Bracket bracket, double tol);

/// Positions of the first `count` sign changes of f on (start, limit], located
/// by a fixed-step scan and refined with find_zero.
template <class F>
std::vector<double> scan_zeros(F&& f, double start, double limit, double step, int count,
                               double tol);

struct ZeroRow {
  int degree;
  double zero;
};

struct ZeroTable {
  int dimension;
  double r2;  // second zero of the degree-0 profile
  std::vector<ZeroRow> rows;  // first zero of the derivative of the degree-i profile
};

/// k-th positive zero (k >= 1) of the degree-0 profile in dimension N.
double radial_profile_zero(int dim, int k);

/// First positive zero of d/dx of the degree-i profile (i >= 1).
double first_derivative_zero(int dim, int degree);

/// k-th radial Dirichlet eigenvalue of -Delta on the unit ball of R^N.
inline double radial_dirichlet_eigenvalue(int dim, int k) {
  const double z = radial_profile_zero(dim, k);
  return z * z;
}

ZeroTable appendix_table(int dim, int i_max);

inline constexpr double kScanStep = 0.1;
inline constexpr double kZeroTol = 1e-12;

// ---------------------------------------------------------------------------

template <class F>
double find_zero(F&& f, Bracket bracket, double tol) {
  double a = bracket.lo;
  double b = bracket.hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!(std::isfinite(fa) && std::isfinite(fb)) || (fa > 0) == (fb > 0)) {
    throw BracketError("find_zero: no sign change on bracket", a, b, fa, fb);
  }
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < 400; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * 2.220446049250313e-16 * std::fabs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) {
      if (std::fabs(c - b) <= tol || fb == 0.0) return b;
      // Brent's convergence test uses a relative floor; finish with plain bisection.
      double lo = std::min(b, c);
      double hi = std::max(b, c);
      double flo = (lo == b) ? fb : fc;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::fabs(p);
      const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
      const double min2 = std::fabs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw ConvergenceFailure("find_zero: iteration limit reached");
}

template <class F>
std::vector<double> scan_zeros(F&& f, double start, double limit, double step, int count,
                               double tol) {
  std::vector<double> zeros;
  double x0 = start;
  double f0 = f(x0);
  const auto n_steps = static_cast<std::int64_t>(std::ceil((limit - start) / step));
  for (std::int64_t k = 1; k <= n_steps && static_cast<int>(zeros.size()) < count; ++k) {
    const double x1 = std::min(limit, start + static_cast<double>(k) * step);
    const double f1 = f(x1);
    if (f1 == 0.0) {
      zeros.push_back(x1);
    } else if (f0 != 0.0 && (f0 > 0) != (f1 > 0)) {
      zeros.push_back(find_zero(f, {x0, x1}, tol));
    }
    x0 = x1;
    f0 = f1;
  }
  return zeros;
}

}  // namespace overdet::special
