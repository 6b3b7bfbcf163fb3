#include "overdet/dtn_bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "overdet/parallel.hpp"
#include "overdet/quadrature.hpp"

namespace overdet::dtn {

namespace {

constexpr double kDegenerate = 1e-10;

double resolve_tol(double tol, double rho_max) { return tol > 0.0 ? tol : 1e-7 * rho_max; }

void require_group_dim(const symmetry::SymmetryGroup& group, int dim) {
  if (group.dimension() != dim) {
    throw DomainError("group " + group.name() + " does not act in dimension " +
                      std::to_string(dim));
  }
}

double channel_tau(const radial::RadialSolution& sol, double gamma) {
  return steklov_value(sol, gamma).tau;
}

}  // namespace

SteklovChannel steklov_value(const spectrum::ModeOperator& op) {
  if (!(op.gamma() > 0.0)) {
    throw DomainError("steklov_value: the radial channel carries no mean-zero boundary data");
  }
  auto factor = spectrum::integrate_mode(op, 0.0);
  const double sup = factor.sup_abs();
  const double f1 = factor.f.back();
  const double rel = std::fabs(f1) / sup;
  if (!(rel >= kDegenerate)) {
    std::ostringstream msg;
    msg << "channel gamma = " << op.gamma() << " is degenerate at rho = " << op.rho()
        << ": |f(1)|/sup|f| = " << rel;
    throw ChannelDegenerate(msg.str(), rel);
  }
  for (auto* v : {&factor.f, &factor.df, &factor.d2f}) {
    for (double& x : *v) x /= f1;
  }
  const double tau = factor.df.back() + (op.dim() - 1.0);
  const int degree = static_cast<int>(std::lround(op.exponent()));
  return {degree, op.gamma(), std::move(factor), tau, rel};
}

SteklovChannel steklov_value(const radial::RadialSolution& sol, double gamma) {
  return steklov_value(spectrum::ModeOperator::from_solution(sol, gamma));
}

double quadratic_form_Qk(const std::function<double(double)>& f,
                         const std::function<double(double)>& df,
                         const spectrum::ModeOperator& op) {
  const int dim = op.dim();
  const double rho = op.rho();
  const double gamma = op.gamma();
  auto integrand = [&](double r) {
    const double x = f(r);
    const double dx = df(r);
    const double w = std::pow(r, dim - 1);
    return (rho * dx * dx + (op.potential(r) - 1.0) * x * x) * w + rho * gamma * x * x * w / (r * r);
  };
  const auto breaks = op.nodes();
  const double f1 = f(1.0);
  return quad::integrate(integrand, breaks) + rho * (dim - 1.0) * f1 * f1;
}

double quadratic_form_Qk(const spectrum::RadialFactor& factor, const spectrum::ModeOperator& op) {
  return quadratic_form_Qk([&factor](double r) { return factor.value(r); },
                           [&factor](double r) { return factor.derivative(r); }, op);
}

Tau1Report tau1(const radial::RadialSolution& sol, const symmetry::SymmetryGroup& group,
                int channel_budget) {
  require_group_dim(group, sol.dim());
  if (channel_budget < 1) throw DomainError("tau1: channel budget must be >= 1");
  auto shared = std::make_shared<const radial::RadialSolution>(sol);
  Tau1Report report{sol.rho(), 0.0, {}, true};
  for (const auto& d : symmetry::invariant_degrees(group, channel_budget)) {
    const auto op = spectrum::ModeOperator::from_solution(shared, symmetry::gamma(d.degree, sol.dim()));
    const auto ch = steklov_value(op);
    const double q = quadratic_form_Qk(ch.factor, op);
    const double eta = sol.rho() * ch.tau;  // f(1) = 1
    const double err = std::fabs(q - eta) / std::max({std::fabs(q), std::fabs(eta), 1e-300});
    report.channels.push_back({d.degree, d.multiplicity, op.gamma(), ch.tau, q, err});
  }
  report.tau1 = report.channels.front().tau;
  for (std::size_t k = 1; k < report.channels.size(); ++k) {
    const double prev = report.channels[k - 1].tau;
    const double cur = report.channels[k].tau;
    if (!(cur > prev)) report.strictly_increasing = false;
    if (cur < report.tau1) {
      std::ostringstream msg;
      msg << "channel degree " << report.channels[k].degree << " undercuts the first invariant "
          << "channel at rho = " << sol.rho() << " (tau " << cur << " < " << report.tau1 << ")";
      throw MonotonicityViolation(msg.str());
    }
  }
  return report;
}

RhoStarResult find_rho_star(const symmetry::SymmetryGroup& group, double rho0,
                            const BifurcationOptions& options) {
  symmetry::require_condition_G(group);
  const int dim = group.dimension();
  const double rmax = radial::rho_max(dim);
  const double margin = options.margin * rmax;
  const double a = rho0 + margin;
  const double b = rmax - margin;
  if (!(a < b)) throw DomainError("find_rho_star: empty search interval");
  const double tol = resolve_tol(options.rho_star_tol, rmax);
  const int n = std::max(2, options.tau_samples);
  const double gamma1 =
      symmetry::gamma(symmetry::first_invariant_degree(group).degree, dim);

  auto solve = [&](double rho) {
    return radial::solve_radial(radial::ProblemParams::from_rho(dim, rho), options.sweep.solver);
  };
  RhoStarResult result{};
  result.sweep = parallel_map(static_cast<std::size_t>(n), options.sweep.jobs, [&](std::size_t k) {
    const double rho = a + (b - a) * static_cast<double>(k) / (n - 1);
    return tau1(solve(rho), group, options.channel_budget);
  });
  for (const auto& t : result.sweep) result.samples.emplace_back(t.rho, t.tau1);

  int changes = 0;
  std::size_t first = result.samples.size();
  for (std::size_t k = 0; k + 1 < result.samples.size(); ++k) {
    if ((result.samples[k].second < 0.0) != (result.samples[k + 1].second < 0.0)) {
      ++changes;
      if (first == result.samples.size()) first = k;
    }
  }
  result.sign_changes = changes;
  if (first == result.samples.size() || result.samples[first].second >= 0.0) {
    std::ostringstream msg;
    msg << "tau1 does not cross from negative to positive on (" << a << ", " << b << ") for "
        << group.name();
    throw NoSignChange(msg.str(), result.samples);
  }
  double lo = result.samples[first].first;
  double hi = result.samples[first + 1].first;
  double tau_lo = result.samples[first].second;
  double tau_hi = result.samples[first + 1].second;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double t = channel_tau(solve(mid), gamma1);
    if (t < 0.0) {
      lo = mid;
      tau_lo = t;
    } else {
      hi = mid;
      tau_hi = t;
    }
  }
  result.lo = lo;
  result.hi = hi;
  result.tau_lo = tau_lo;
  result.tau_hi = tau_hi;
  result.rho_star = 0.5 * (lo + hi);
  return result;
}

int dtn_index(const radial::RadialSolution& sol, const symmetry::SymmetryGroup& group,
              int channel_budget) {
  const auto report = tau1(sol, group, channel_budget);
  int index = 0;
  for (const auto& ch : report.channels) {
    if (ch.tau < 0.0) index += ch.multiplicity;
  }
  return index;
}

BifurcationReport bifurcation_report(const symmetry::SymmetryGroup& group,
                                     const BifurcationOptions& options) {
  symmetry::require_condition_G(group);
  const int dim = group.dimension();
  const double rmax = radial::rho_max(dim);
  BifurcationReport report{dim,   group, rmax,  {},  {},    0,
                           0.0,   -1,    -1,    0.0, false, {}};
  report.kernel_multiplicity = symmetry::first_invariant_degree(group).multiplicity;
  report.rho0 = spectrum::find_rho0(group, resolve_tol(options.rho0_tol, rmax), options.sweep);
  try {
    report.rho_star = find_rho_star(group, report.rho0.rho0, options);
    const double rs = report.rho_star.rho_star;
    report.delta = 0.01 * std::min(rs - report.rho0.rho0, rmax - rs);
    auto solve = [&](double rho) {
      return radial::solve_radial(radial::ProblemParams::from_rho(dim, rho), options.sweep.solver);
    };
    report.index_below = dtn_index(solve(rs - report.delta), group, options.channel_budget);
    report.index_above = dtn_index(solve(rs + report.delta), group, options.channel_budget);
    report.boundary_slope = solve(rs).boundary_slope();
    report.complete = true;
    if (report.rho_star.sign_changes != 1) {
      report.note = "tau1 changes sign " + std::to_string(report.rho_star.sign_changes) +
                    " times on the sweep";
    }
  } catch (const Error& e) {
    report.complete = false;
    report.note = e.what();
  }
  return report;
}

}  // namespace overdet::dtn
