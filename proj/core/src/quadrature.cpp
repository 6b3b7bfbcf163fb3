#include "overdet/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "overdet/errors.hpp"

namespace overdet::quad {

namespace {
constexpr unsigned kMaxDepth = 4;
constexpr double kPanelTol = 1e-13;
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) {
    if (b == a) return 0.0;
    throw DomainError("integrate: reversed interval");
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  return GK::integrate(f, a, b, kMaxDepth, kPanelTol);
}

double integrate(const std::function<double(double)>& f, std::span<const double> breaks) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    sum += integrate(f, breaks[j], breaks[j + 1]);
  }
  return sum;
}

}  // namespace overdet::quad
