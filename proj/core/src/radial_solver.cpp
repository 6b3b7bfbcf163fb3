#include "overdet/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "overdet/ode.hpp"
#include "overdet/special_functions.hpp"

namespace overdet::radial {

namespace {

using ode::State;

void require_dimension(int dim) {
  if (dim < 2 || dim > 4) {
    throw DomainError("radial solver supports N = 2, 3, 4 (got " + std::to_string(dim) + ")");
  }
}

// State is (w, w') with w = 1 - v; this keeps the centre defect 1 - a
// resolvable when it is far below machine epsilon (large R).
struct DefectRhs {
  int dim;
  State operator()(double s, const State& y) const {
    const double w = y[0];
    const double g = w < 1.0 ? w * (1.0 - w) * (2.0 - w) : 1.0 - w;
    return {y[1], -(dim - 1) * y[1] / s + g};
  }
};

struct Recorder {
  std::vector<double> defect;  // at uniform nodes
  std::vector<double> slope;   // v' at uniform nodes
  bool have_zero = false;
  ode::Step zero_step{};
};

struct ShotOutcome {
  bool short_orbit;
  double v_end;
};

std::vector<double> uniform_nodes(double radius, int count) {
  std::vector<double> s(static_cast<std::size_t>(count));
  const double h = radius / (count - 1);
  for (int j = 0; j < count; ++j) s[static_cast<std::size_t>(j)] = j * h;
  s.back() = radius;
  return s;
}

State series_start(int dim, double eps, double r0) {
  const double g = eps * (1.0 - eps) * (2.0 - eps);
  return {eps + g * r0 * r0 / (2.0 * dim), g * r0 / dim};
}

ShotOutcome shoot(int dim, double eps, const std::vector<double>& nodes,
                  const SolverOptions& opt, Recorder* rec) {
  ode::Tolerances tol;
  tol.rel = opt.ode_rel;
  tol.abs = opt.ode_abs * std::min(1.0, eps);
  tol.length_scale = 1.0;
  tol.max_step = nodes[1] - nodes[0];
  ode::Integrator<DefectRhs> integ(DefectRhs{dim}, opt.start_radius,
                                   series_start(dim, eps, opt.start_radius), tol);
  int zeros = 0;
  bool abandoned = false;
  auto observer = [&](const ode::Step& st) {
    const double v0 = 1.0 - st.y0[0];
    const double v1 = 1.0 - st.y1[0];
    if (st.y1[0] < 0.0) {  // v > 1
      abandoned = true;
      return rec != nullptr;
    }
    if (zeros == 0 && v0 > 0.0 && v1 <= 0.0) {
      zeros = 1;
      if (rec != nullptr && !rec->have_zero) {
        rec->have_zero = true;
        rec->zero_step = st;
      }
    } else if (zeros == 1 && v0 < 0.0 && v1 >= 0.0) {
      zeros = 2;
      return rec != nullptr;
    }
    return true;
  };
  if (rec != nullptr) {
    rec->defect.assign(nodes.size(), 0.0);
    rec->slope.assign(nodes.size(), 0.0);
    rec->defect[0] = eps;
    rec->slope[0] = 0.0;
  }
  for (std::size_t j = 1; j < nodes.size(); ++j) {
    const bool go_on = integ.advance_to(nodes[j], observer);
    if (rec != nullptr) {
      rec->defect[j] = integ.y()[0];
      rec->slope[j] = -integ.y()[1];
    }
    if (!go_on) break;
  }
  const bool short_orbit = zeros >= 2 && !abandoned;
  return {short_orbit, 1.0 - integ.y()[0]};
}

struct ScanPoint {
  double a;
  double eps;
};

std::vector<ScanPoint> scan_grid(int points) {
  // Half the samples resolve small centre values, half resolve the
  // exponentially small defect 1 - a that large radii require.
  const int n_small = points / 2;
  const int n_defect = points - n_small;
  std::vector<ScanPoint> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < n_small; ++k) {
    const double t = n_small > 1 ? static_cast<double>(k) / (n_small - 1) : 0.0;
    const double a = 1e-4 * std::pow(0.5 / 1e-4, t);
    grid.push_back({a, 1.0 - a});
  }
  for (int k = 1; k <= n_defect; ++k) {
    const double t = static_cast<double>(k) / n_defect;
    const double eps = 0.5 * std::pow(1e-300 / 0.5, t);
    grid.push_back({1.0 - eps, eps});
  }
  std::sort(grid.begin(), grid.end(), [](const auto& l, const auto& r) { return l.eps > r.eps; });
  return grid;
}

void check_options(const SolverOptions& opt) {
  if (!(opt.ode_rel > 0.0) || !(opt.ode_abs > 0.0) || !(opt.boundary_tol > 0.0)) {
    throw DomainError("solver tolerances must be positive");
  }
  if (opt.grid_nodes < 16) throw DomainError("grid_nodes must be >= 16");
  if (opt.scan_points < 4) throw DomainError("scan_points must be >= 4");
}

double hermite_value(double x0, double x1, double f0, double f1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
         (t3 - t2) * h * d1;
}

double hermite_slope(double x0, double x1, double f0, double f1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * f1 +
          (3 * t2 - 2 * t) * h * d1) /
         h;
}

}  // namespace

double lambda_bar_2(int dim) { return special::radial_dirichlet_eigenvalue(dim, 2); }

double rho_max(int dim) { return 1.0 / lambda_bar_2(dim); }

ProblemParams ProblemParams::from_rho(int dim, double rho) {
  require_dimension(dim);
  const double limit = rho_max(dim);
  if (!(rho > 0.0) || !(rho < limit)) {
    std::ostringstream msg;
    msg << "no sign-changing radial solution: rho = " << rho << " outside (0, " << limit
        << ") for N = " << dim;
    throw NoSolution(msg.str());
  }
  return {dim, rho, 1.0 / std::sqrt(rho)};
}

ProblemParams ProblemParams::from_radius(int dim, double radius) {
  require_dimension(dim);
  if (!(radius > 0.0)) throw NoSolution("radius must be positive");
  ProblemParams p = from_rho(dim, 1.0 / (radius * radius));
  p.radius = radius;
  return p;
}

RadialSolution::RadialSolution(ProblemParams params, double center_defect,
                               std::vector<double> grid, std::vector<double> values,
                               std::vector<double> slopes, std::vector<double> defect,
                               std::size_t zero_index)
    : params_(params),
      center_defect_(center_defect),
      grid_(std::move(grid)),
      values_(std::move(values)),
      slopes_(std::move(slopes)),
      defect_(std::move(defect)),
      zero_index_(zero_index) {
  const std::size_t n = grid_.size();
  if (n < 3 || values_.size() != n || slopes_.size() != n || defect_.size() != n) {
    throw DomainError("RadialSolution: inconsistent sample arrays");
  }
  if (zero_index_ == 0 || zero_index_ + 1 >= n) {
    throw DomainError("RadialSolution: zero node must be interior");
  }
  if (!(center_defect_ > 0.0 && center_defect_ < 1.0)) {
    throw DomainError("RadialSolution: centre value must lie in (0, 1)");
  }
  for (std::size_t j = 1; j < n; ++j) {
    if (!(grid_[j] > grid_[j - 1])) throw DomainError("RadialSolution: grid not increasing");
  }
}

std::size_t RadialSolution::locate(double s) const {
  if (s <= grid_.front()) return 0;
  if (s >= grid_.back()) return grid_.size() - 2;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), s);
  return static_cast<std::size_t>(it - grid_.begin()) - 1;
}

double RadialSolution::v(double s) const {
  const std::size_t j = locate(s);
  return hermite_value(grid_[j], grid_[j + 1], values_[j], values_[j + 1], slopes_[j],
                       slopes_[j + 1], s);
}

double RadialSolution::dv(double s) const {
  const std::size_t j = locate(s);
  return hermite_slope(grid_[j], grid_[j + 1], values_[j], values_[j + 1], slopes_[j],
                       slopes_[j + 1], s);
}

double RadialSolution::sup_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::fabs(x));
  return m;
}

double RadialSolution::min_gap_to_one() const {
  double gap = 1.0;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    const double g = values_[j] > 0.0 ? defect_[j] : 1.0 + values_[j];
    gap = std::min(gap, g);
  }
  return gap;
}

std::vector<ShootingSample> scan_shooting_map(const ProblemParams& params,
                                              const SolverOptions& options) {
  check_options(options);
  const auto nodes = uniform_nodes(params.radius, options.grid_nodes);
  std::vector<ShootingSample> scan;
  for (const auto& pt : scan_grid(options.scan_points)) {
    const auto out = shoot(params.dim, pt.eps, nodes, options, nullptr);
    scan.push_back({pt.a, pt.eps, out.short_orbit});
  }
  return scan;
}

RadialSolution solve_radial(const ProblemParams& params, const SolverOptions& options) {
  require_dimension(params.dim);
  (void)ProblemParams::from_rho(params.dim, params.rho);
  check_options(options);
  const int dim = params.dim;
  const double radius = params.radius;
  const auto nodes = uniform_nodes(radius, options.grid_nodes);

  auto scan = scan_shooting_map(params, options);
  std::vector<std::size_t> changes;
  for (std::size_t k = 0; k + 1 < scan.size(); ++k) {
    if (scan[k].short_orbit != scan[k + 1].short_orbit) changes.push_back(k);
  }
  if (changes.size() != 1 || !scan[changes[0]].short_orbit) {
    std::ostringstream msg;
    msg << "shooting map for N = " << dim << ", R = " << radius << " crosses R "
        << changes.size() << " times (expected exactly one short-to-long transition)";
    throw ShootingFailure(msg.str(), std::move(scan));
  }
  // Bisection in log(1 - a); short orbits sit on the large-defect side.
  double eps_short = scan[changes[0]].center_defect;
  double eps_long = scan[changes[0] + 1].center_defect;
  double best_eps = eps_short;
  double best_v = 1e300;
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = std::sqrt(eps_short) * std::sqrt(eps_long);
    if (!(mid < eps_short && mid > eps_long)) break;
    const auto out = shoot(dim, mid, nodes, options, nullptr);
    if (std::fabs(out.v_end) < std::fabs(best_v)) {
      best_v = out.v_end;
      best_eps = mid;
    }
    if (std::fabs(out.v_end) <= 0.01 * options.boundary_tol) break;
    if (out.short_orbit) {
      eps_short = mid;
    } else {
      eps_long = mid;
    }
  }

  Recorder rec;
  const auto final_shot = shoot(dim, best_eps, nodes, options, &rec);
  if (!(std::fabs(final_shot.v_end) <= options.boundary_tol) || !rec.have_zero) {
    std::ostringstream msg;
    msg << "shooting bisection stalled: |v(R)| = " << std::fabs(final_shot.v_end)
        << " > boundary tolerance " << options.boundary_tol;
    throw ShootingFailure(msg.str(), std::move(scan));
  }

  // Locate p_R inside the recorded step by re-stepping from its left end.
  const auto& zs = rec.zero_step;
  const DefectRhs rhs{dim};
  auto v_after = [&](double h) {
    State y1, f1, err;
    ode::dopri_step(rhs, zs.r0, zs.y0, zs.f0, h, y1, f1, err);
    return 1.0 - y1[0];
  };
  const double h_zero = special::find_zero(v_after, {0.0, zs.r1 - zs.r0}, 1e-14 * radius);
  State yz, fz, ez;
  ode::dopri_step(rhs, zs.r0, zs.y0, zs.f0, h_zero, yz, fz, ez);
  const double p = zs.r0 + h_zero;

  const auto ins = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), p) -
                                            nodes.begin());
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> slopes;
  std::vector<double> defect;
  grid.reserve(nodes.size() + 1);
  values.reserve(nodes.size() + 1);
  slopes.reserve(nodes.size() + 1);
  defect.reserve(nodes.size() + 1);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (j == ins) {
      grid.push_back(p);
      values.push_back(0.0);
      slopes.push_back(-yz[1]);
      defect.push_back(1.0);
    }
    grid.push_back(nodes[j]);
    values.push_back(1.0 - rec.defect[j]);
    slopes.push_back(rec.slope[j]);
    defect.push_back(rec.defect[j]);
  }
  values.back() = final_shot.v_end;
  return RadialSolution(params, best_eps, std::move(grid), std::move(values), std::move(slopes),
                        std::move(defect), ins);
}

double limit_profile(double r) {
  if (r > std::numbers::pi) throw DomainError("limit_profile: defined for r <= pi");
  if (r <= 0.0) return -std::tanh(r / std::numbers::sqrt2);
  return -std::sin(r) / std::numbers::sqrt2;
}

double limit_profile_derivative(double r) {
  if (r > std::numbers::pi) throw DomainError("limit_profile_derivative: defined for r <= pi");
  if (r <= 0.0) {
    const double c = std::cosh(r / std::numbers::sqrt2);
    return -1.0 / (std::numbers::sqrt2 * c * c);
  }
  return -std::cos(r) / std::numbers::sqrt2;
}

double recentered_profile(const RadialSolution& sol, double r) {
  const double s = r + sol.zero_radius();
  if (s < 0.0 || s > sol.radius()) {
    throw DomainError("recentered_profile: r + p_R outside [0, R]");
  }
  if (r == 0.0) return 0.0;
  return sol.v(s);
}

std::vector<double> energy(std::span<const double> values, std::span<const double> slopes) {
  if (values.size() != slopes.size()) throw DomainError("energy: size mismatch");
  std::vector<double> h(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double v = values[j];
    const double vp = std::max(v, 0.0);
    h[j] = slopes[j] * slopes[j] + v * v - 0.5 * vp * vp * vp * vp;
  }
  return h;
}

std::vector<double> energy(const RadialSolution& sol) {
  // Inside the positive region use v^2 - v^4/2 = 1/2 - (w(2-w))^2/2 with
  // w = 1 - v, which stays accurate when v is within rounding of 1.
  auto h = energy(sol.values(), sol.slopes());
  const auto v = sol.values();
  const auto w = sol.defect();
  const auto dv = sol.slopes();
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (v[j] > 0.5) {
      const double q = w[j] * (2.0 - w[j]);
      h[j] = dv[j] * dv[j] + 0.5 - 0.5 * q * q;
    }
  }
  return h;
}

double continuity_probe(const ProblemParams& params, double delta, const SolverOptions& options) {
  if (delta == 0.0) return 0.0;
  const auto a = solve_radial(params, options);
  const auto b = solve_radial(ProblemParams::from_rho(params.dim, params.rho + delta), options);
  // Both grids share the uniform unit-ball nodes j/(M-1); skip the inserted zero node.
  auto uniform_values = [](const RadialSolution& s) {
    std::vector<double> out;
    out.reserve(s.uniform_nodes());
    for (std::size_t j = 0; j < s.values().size(); ++j) {
      if (j != s.zero_index()) out.push_back(s.values()[j]);
    }
    return out;
  };
  const auto ua = uniform_values(a);
  const auto ub = uniform_values(b);
  double sup = 0.0;
  for (std::size_t j = 0; j < ua.size(); ++j) sup = std::max(sup, std::fabs(ua[j] - ub[j]));
  return sup;
}

double outer_linear_mismatch(const RadialSolution& sol) {
  const int dim = sol.dim();
  const auto grid = sol.grid();
  const auto vals = sol.values();
  auto rhs = [dim](double s, const State& y) -> State {
    return {y[1], -(dim - 1) * y[1] / s - y[0]};
  };
  State y{0.0, sol.slopes()[sol.zero_index()]};
  double s = sol.zero_radius();
  double worst = 0.0;
  for (std::size_t j = sol.zero_index() + 1; j < grid.size(); ++j) {
    const double target = grid[j];
    const int sub = std::max(1, static_cast<int>(std::ceil((target - s) / 1e-3)));
    const double h = (target - s) / sub;
    for (int k = 0; k < sub; ++k) {
      const State k1 = rhs(s, y);
      const State k2 = rhs(s + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
      const State k3 = rhs(s + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
      const State k4 = rhs(s + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
      for (int i = 0; i < 2; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      s += h;
    }
    s = target;
    worst = std::max(worst, std::fabs(y[0] - vals[j]));
  }
  return worst;
}

double ode_residual(const RadialSolution& sol) {
  const int dim = sol.dim();
  const auto grid = sol.grid();
  const auto v = sol.values();
  const auto dv = sol.slopes();
  const std::size_t q = sol.zero_index();
  double worst = 0.0;
  // five-point stencil on uniform stretches; skip any stencil that touches the zero node
  for (std::size_t j = 2; j + 2 < grid.size(); ++j) {
    if (j + 2 >= q && j <= q + 2) continue;
    const double h = grid[j + 1] - grid[j];
    const double d2 = (-dv[j + 2] + 8 * dv[j + 1] - 8 * dv[j - 1] + dv[j - 2]) / (12 * h);
    const double vp = std::max(v[j], 0.0);
    const double res = d2 + (dim - 1) * dv[j] / grid[j] + v[j] - vp * vp * vp;
    worst = std::max(worst, std::fabs(res));
  }
  return worst;
}

}  // namespace overdet::radial
