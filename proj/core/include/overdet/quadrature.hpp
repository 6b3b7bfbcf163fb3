#pragma once

#include <functional>
#include <span>

namespace overdet::quad {

/// Integral of f over [breaks.front(), breaks.back()], one adaptive
/// Gauss-Kronrod (7/15) panel per sub-interval. Breaks must be increasing.
double integrate(const std::function<double(double)>& f, std::span<const double> breaks);

/// Convenience overload on a single interval.
double integrate(const std::function<double(double)>& f, double a, double b);

}  // namespace overdet::quad
