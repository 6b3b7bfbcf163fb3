#include "overdet/dirichlet_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "overdet/ode.hpp"
#include "overdet/parallel.hpp"
#include "overdet/quadrature.hpp"
#include "overdet/special_functions.hpp"

namespace overdet::spectrum {

namespace {

using ode::State;

constexpr int kFreeNodes = 2048;
constexpr double kRescaleAbove = 1e200;

double exponent_for(double gamma, int dim) {
  const double b = dim - 2.0;
  return 0.5 * (-b + std::sqrt(b * b + 4.0 * gamma));
}

double hermite(double x0, double x1, double f0, double f1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
         (t3 - t2) * h * d1;
}

struct ModeRhs {
  const ModeOperator* op;
  double mu;
  State operator()(double r, const State& y) const {
    const double n1 = op->dim() - 1.0;
    const double w = op->potential(r);
    return {y[1],
            -n1 * y[1] / r + op->gamma() * y[0] / (r * r) + (w - 1.0 - mu) * y[0] / op->rho()};
  }
};

struct ModeEnd {
  int sign_changes;
  double f;
  double flux;  // rho * r^{N-1} f' at r = 1
};

// Shoots the channel ODE from the regular start; optionally records samples.
ModeEnd run_mode(const ModeOperator& op, double mu, double ode_rel, RadialFactor* out) {
  const double i = op.exponent();
  const int dim = op.dim();
  const double r0 = kModeStart;
  const double c = (op.potential(0.0) - 1.0 - mu) / op.rho() / (2.0 * (2.0 * i + dim));
  // f / r0^i and f' / r0^i of the series r^i (1 + c r^2)
  const State y0{1.0 + c * r0 * r0, (i + (i + 2.0) * c * r0 * r0) / r0};

  ode::Tolerances tol;
  tol.rel = ode_rel;
  tol.abs = 1e-300;
  tol.length_scale = std::sqrt(op.rho() / std::max(1.0, 1.0 + mu));
  tol.max_step = 0.01;
  const ModeRhs rhs{&op, mu};
  ode::Integrator<ModeRhs> integ(rhs, r0, y0, tol);

  int changes = 0;
  auto observer = [&changes](const ode::Step& st) {
    if ((st.y0[0] > 0.0) != (st.y1[0] > 0.0)) ++changes;
    return true;
  };
  const auto nodes = op.nodes();
  if (out != nullptr) {
    out->r = nodes;
    out->f.assign(nodes.size(), 0.0);
    out->df.assign(nodes.size(), 0.0);
    out->d2f.assign(nodes.size(), 0.0);
    out->f[0] = y0[0];
    out->df[0] = y0[1];
    out->d2f[0] = rhs(r0, y0)[1];
  }
  for (std::size_t j = 1; j < nodes.size(); ++j) {
    integ.advance_to(nodes[j], observer);
    double scale = 1.0;
    const double mag = std::fabs(integ.y()[0]) + std::fabs(integ.y()[1]);
    if (mag > kRescaleAbove) {
      scale = 1.0 / mag;
      integ.rescale(scale);
    }
    if (out != nullptr) {
      if (scale != 1.0) {
        for (std::size_t q = 0; q < j; ++q) {
          out->f[q] *= scale;
          out->df[q] *= scale;
          out->d2f[q] *= scale;
        }
      }
      out->f[j] = integ.y()[0];
      out->df[j] = integ.y()[1];
      out->d2f[j] = integ.slope()[1];
    }
  }
  if (out != nullptr) out->sign_changes = changes;
  return {changes, integ.y()[0], op.rho() * integ.y()[1]};
}

double angle_from(const ModeEnd& end) {
  const double sign = end.sign_changes % 2 == 0 ? 1.0 : -1.0;
  return end.sign_changes * std::numbers::pi + std::atan2(sign * end.f, sign * end.flux);
}

// Number of eigenvalues of the symmetric tridiagonal (d, e) below x.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int count = 0;
  double q = 1.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double off = j == 0 ? 0.0 : e[j - 1] * e[j - 1] / q;
    q = d[j] - x - off;
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::fabs(d[j]) + std::fabs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

double power_integral(double a, double b, int p) {
  // int_a^b r^p dr for integer p (p = -1 gives the logarithm)
  if (p == -1) return std::log(b / a);
  return (std::pow(b, p + 1) - std::pow(a, p + 1)) / (p + 1);
}

}  // namespace

ModeOperator::ModeOperator(int dim, double rho, double gamma,
                           std::shared_ptr<const radial::RadialSolution> sol)
    : dim_(dim), rho_(rho), gamma_(gamma), exponent_(exponent_for(gamma, dim)), sol_(std::move(sol)) {
  if (dim < 2) throw DomainError("ModeOperator: dimension must be >= 2");
  if (!(rho > 0.0)) throw DomainError("ModeOperator: rho must be positive");
  if (!(gamma >= 0.0)) throw DomainError("ModeOperator: gamma must be >= 0");
}

ModeOperator ModeOperator::from_solution(std::shared_ptr<const radial::RadialSolution> sol,
                                         double gamma) {
  if (!sol) throw DomainError("ModeOperator: null solution");
  const int dim = sol->dim();
  const double rho = sol->rho();
  return ModeOperator(dim, rho, gamma, std::move(sol));
}

ModeOperator ModeOperator::from_solution(const radial::RadialSolution& sol, double gamma) {
  return from_solution(std::make_shared<const radial::RadialSolution>(sol), gamma);
}

ModeOperator ModeOperator::free(int dim, double rho, double gamma) {
  return ModeOperator(dim, rho, gamma, nullptr);
}

ModeOperator ModeOperator::with_gamma(double gamma) const {
  return ModeOperator(dim_, rho_, gamma, sol_);
}

double ModeOperator::potential(double r) const {
  if (!sol_) return 0.0;
  const double u = sol_->u(std::clamp(r, 0.0, 1.0));
  return u > 0.0 ? 3.0 * u * u : 0.0;
}

std::vector<double> ModeOperator::breakpoints() const {
  if (!sol_) return {};
  return {sol_->zero_unit()};
}

std::vector<double> ModeOperator::nodes() const {
  std::vector<double> out;
  if (sol_) {
    const auto grid = sol_->grid();
    out.reserve(grid.size());
    out.push_back(kModeStart);
    for (std::size_t j = 1; j < grid.size(); ++j) out.push_back(grid[j] / sol_->radius());
    out.back() = 1.0;
  } else {
    out.reserve(kFreeNodes);
    out.push_back(kModeStart);
    for (int j = 1; j < kFreeNodes; ++j) out.push_back(static_cast<double>(j) / (kFreeNodes - 1));
  }
  return out;
}

double RadialFactor::value(double x) const {
  if (r.size() < 2) throw DomainError("RadialFactor: empty");
  auto it = std::upper_bound(r.begin(), r.end(), x);
  std::size_t j = it == r.begin() ? 0 : static_cast<std::size_t>(it - r.begin()) - 1;
  j = std::min(j, r.size() - 2);
  return hermite(r[j], r[j + 1], f[j], f[j + 1], df[j], df[j + 1], x);
}

double RadialFactor::derivative(double x) const {
  if (r.size() < 2) throw DomainError("RadialFactor: empty");
  auto it = std::upper_bound(r.begin(), r.end(), x);
  std::size_t j = it == r.begin() ? 0 : static_cast<std::size_t>(it - r.begin()) - 1;
  j = std::min(j, r.size() - 2);
  return hermite(r[j], r[j + 1], df[j], df[j + 1], d2f[j], d2f[j + 1], x);
}

double RadialFactor::sup_abs() const {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::fabs(x));
  return m;
}

RadialFactor integrate_mode(const ModeOperator& op, double mu, double ode_rel) {
  RadialFactor out;
  run_mode(op, mu, ode_rel, &out);
  return out;
}

double prufer_angle(const ModeOperator& op, double mu) {
  return angle_from(run_mode(op, mu, 1e-11, nullptr));
}

std::vector<double> fd_eigenvalues(const ModeOperator& op, int count, int cells) {
  if (count < 1) throw DomainError("fd_eigenvalues: count must be >= 1");
  if (cells < 8) throw DomainError("fd_eigenvalues: too few cells");
  const int dim = op.dim();
  const double h = 1.0 / cells;
  const double rho = op.rho();
  const bool regular_at_origin = op.gamma() == 0.0;
  const int first = regular_at_origin ? 0 : 1;
  const int n = cells - first;
  std::vector<double> vol(static_cast<std::size_t>(n));
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> flux(static_cast<std::size_t>(cells));  // between node j and j+1
  for (int j = 0; j < cells; ++j) {
    flux[static_cast<std::size_t>(j)] = rho * std::pow((j + 0.5) * h, dim - 1) / h;
  }
  for (int k = 0; k < n; ++k) {
    const int j = k + first;
    const double a = std::max(0.0, (j - 0.5) * h);
    const double b = (j + 0.5) * h;
    const double v = power_integral(a, b, dim - 1);
    double g = 0.0;
    if (op.gamma() != 0.0) g = rho * op.gamma() * power_integral(a, b, dim - 3);
    const double left = j > 0 ? flux[static_cast<std::size_t>(j - 1)] : 0.0;
    const double right = flux[static_cast<std::size_t>(j)];
    vol[static_cast<std::size_t>(k)] = v;
    diag[static_cast<std::size_t>(k)] = left + right + g + (op.potential(j * h) - 1.0) * v;
  }
  std::vector<double> d(static_cast<std::size_t>(n));
  std::vector<double> e(static_cast<std::size_t>(std::max(0, n - 1)));
  for (int k = 0; k < n; ++k) d[static_cast<std::size_t>(k)] = diag[static_cast<std::size_t>(k)] / vol[static_cast<std::size_t>(k)];
  for (int k = 0; k + 1 < n; ++k) {
    const int j = k + first;
    e[static_cast<std::size_t>(k)] = -flux[static_cast<std::size_t>(j)] /
                                     std::sqrt(vol[static_cast<std::size_t>(k)] * vol[static_cast<std::size_t>(k + 1)]);
  }
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (int k = 0; k < n; ++k) {
    const double rad = (k > 0 ? std::fabs(e[static_cast<std::size_t>(k - 1)]) : 0.0) +
                       (k + 1 < n ? std::fabs(e[static_cast<std::size_t>(k)]) : 0.0);
    lo = std::min(lo, d[static_cast<std::size_t>(k)] - rad);
    hi = std::max(hi, d[static_cast<std::size_t>(k)] + rad);
  }
  std::vector<double> out;
  for (int idx = 0; idx < count && idx < n; ++idx) {
    double a = lo;
    double b = hi;
    while (b - a > 1e-13 * std::max(1.0, std::fabs(a) + std::fabs(b))) {
      const double m = 0.5 * (a + b);
      if (m == a || m == b) break;
      if (sturm_count(d, e, m) > idx) {
        b = m;
      } else {
        a = m;
      }
    }
    out.push_back(0.5 * (a + b));
    lo = a;
  }
  return out;
}

std::vector<double> fd_eigenvalues_extrapolated(const ModeOperator& op, int count, int cells) {
  const auto coarse = fd_eigenvalues(op, count, cells);
  const auto fine = fd_eigenvalues(op, count, 2 * cells);
  std::vector<double> out(coarse.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
  return out;
}

std::vector<double> mode_eigenvalues(const ModeOperator& op, int count,
                                     const EigenOptions& options) {
  if (count < 1) throw DomainError("mode_eigenvalues: count must be >= 1");
  std::vector<double> out;
  double lo = -1.0;  // -rho Delta >= 0 and W >= 0 bound the spectrum below by -1
  for (int j = 1; j <= count; ++j) {
    const double target = j * std::numbers::pi;
    auto defect = [&](double mu) { return prufer_angle(op, mu) - target; };
    double width = 1.0;
    double hi = lo + width;
    int guard = 0;
    while (defect(hi) <= 0.0) {
      lo = hi;
      width *= 2.0;
      hi = lo + width;
      if (++guard > 200) throw ConvergenceFailure("mode_eigenvalues: no upper bracket");
    }
    const double tol = options.tol * std::max(1.0, std::fabs(hi));
    const double mu = special::find_zero(defect, {lo, hi}, tol);
    out.push_back(mu);
    lo = mu;
  }
  if (options.cross_check) {
    const auto oracle = fd_eigenvalues_extrapolated(op, count, options.fd_cells);
    for (int k = 0; k < count; ++k) {
      const double a = out[static_cast<std::size_t>(k)];
      const double b = oracle[static_cast<std::size_t>(k)];
      if (std::fabs(a - b) > options.agreement * std::max(1.0, std::fabs(a))) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "eigenvalue " << k + 1 << " of channel gamma = " << op.gamma()
            << ": shooting " << a << " vs finite differences " << b;
        throw ConvergenceFailure(msg.str());
      }
    }
  }
  return out;
}

RadialFactor mode_eigenfunction(const ModeOperator& op, int index, const EigenOptions& options) {
  if (index < 1) throw DomainError("mode_eigenfunction: index must be >= 1");
  const auto mus = mode_eigenvalues(op, index, options);
  auto factor = integrate_mode(op, mus.back());
  const int dim = op.dim();
  const auto& breaks = factor.r;  // contains p_rho when a potential is present
  const double norm2 = quad::integrate(
      [&](double r) {
        const double f = factor.value(r);
        return f * f * std::pow(r, dim - 1);
      },
      breaks);
  const double s = 1.0 / std::sqrt(norm2);
  for (auto* v : {&factor.f, &factor.df, &factor.d2f}) {
    for (double& x : *v) x *= s;
  }
  return factor;
}

double rayleigh_quotient(const ModeOperator& op, const RadialFactor& factor) {
  const int dim = op.dim();
  const double rho = op.rho();
  const double gamma = op.gamma();
  const auto& breaks = factor.r;
  const double num = quad::integrate(
      [&](double r) {
        const double f = factor.value(r);
        const double df = factor.derivative(r);
        const double w = std::pow(r, dim - 1);
        return (rho * df * df + (op.potential(r) - 1.0) * f * f) * w +
               rho * gamma * f * f * w / (r * r);
      },
      breaks);
  const double den = quad::integrate(
      [&](double r) {
        const double f = factor.value(r);
        return f * f * std::pow(r, dim - 1);
      },
      breaks);
  return num / den;
}

MorseReport morse_check(const radial::RadialSolution& sol, const EigenOptions& options) {
  const auto op = ModeOperator::from_solution(sol, 0.0);
  const auto mu = mode_eigenvalues(op, 2, options);
  if (!(mu[0] < 0.0 && mu[1] > 0.0)) {
    std::ostringstream msg;
    msg << "Morse index check failed at rho = " << sol.rho() << ": mu_1 = " << mu[0]
        << ", mu_2 = " << mu[1];
    throw PropertyViolation(msg.str());
  }
  return {mu[0], mu[1]};
}

SpectrumReport mu2_G(const radial::RadialSolution& sol, const symmetry::SymmetryGroup& group,
                     const EigenOptions& options) {
  if (group.dimension() != sol.dim()) {
    throw DomainError("mu2_G: group " + group.name() + " does not act in dimension " +
                      std::to_string(sol.dim()));
  }
  symmetry::require_condition_G(group);
  auto shared = std::make_shared<const radial::RadialSolution>(sol);
  const auto radial_op = ModeOperator::from_solution(shared, 0.0);
  const auto radial_mu = mode_eigenvalues(radial_op, 2, options);
  const auto degrees = symmetry::invariant_degrees(group, 3);
  std::vector<double> firsts;
  for (const auto& d : degrees) {
    const auto op = ModeOperator::from_solution(shared, symmetry::gamma(d.degree, sol.dim()));
    firsts.push_back(mode_eigenvalues(op, 1, options).front());
  }
  for (std::size_t k = 1; k < firsts.size(); ++k) {
    if (!(firsts[k] > firsts[0])) {
      std::ostringstream msg;
      msg << "channel degree " << degrees[k].degree << " undercuts degree " << degrees[0].degree
          << " at rho = " << sol.rho() << " (" << firsts[k] << " <= " << firsts[0] << ")";
      throw PropertyViolation(msg.str());
    }
  }
  SpectrumReport report{sol.rho(),
                        radial_mu[0],
                        radial_mu[1],
                        firsts[0],
                        std::min(radial_mu[1], firsts[0]),
                        group,
                        {firsts.begin() + 1, firsts.end()}};
  return report;
}

double default_radius_max(int dim) { return dim >= 4 ? 60.0 : 40.0; }

double mu2_at(int dim, const symmetry::SymmetryGroup& group, double rho,
              const SweepOptions& options) {
  const auto sol = radial::solve_radial(radial::ProblemParams::from_rho(dim, rho), options.solver);
  return mu2_G(sol, group, options.eigen).mu2_G;
}

Rho0Result find_rho0(const symmetry::SymmetryGroup& group, double tol,
                     const SweepOptions& options) {
  symmetry::require_condition_G(group);
  if (!(tol > 0.0)) throw DomainError("find_rho0: tolerance must be positive");
  const int dim = group.dimension();
  const double rmax = radial::rho_max(dim);
  const double big_r = options.radius_max > 0.0 ? options.radius_max : default_radius_max(dim);
  const double rho_lo = 1.0 / (big_r * big_r);
  const int n = std::max(4, options.samples);

  struct Probe {
    double rho = 0.0;
    double mu2 = 0.0;
    bool ok = false;
  };
  const auto probes = parallel_map(static_cast<std::size_t>(n), options.jobs, [&](std::size_t k) {
    Probe p;
    p.rho = rho_lo + (rmax - rho_lo) * static_cast<double>(k) / n;
    try {
      p.mu2 = mu2_at(dim, group, p.rho, options);
      p.ok = true;
    } catch (const ShootingFailure&) {
      p.ok = false;  // below the solver's reach; rho_lo moves up
    }
    return p;
  });

  Rho0Result result{};
  for (const auto& p : probes) {
    if (p.ok) result.samples.emplace_back(p.rho, p.mu2);
  }
  int changes = 0;
  std::size_t last = result.samples.size();
  for (std::size_t k = 0; k + 1 < result.samples.size(); ++k) {
    const bool neg_here = result.samples[k].second <= 0.0;
    const bool neg_next = result.samples[k + 1].second <= 0.0;
    if (neg_here != neg_next) {
      ++changes;
      if (neg_here) last = k;
    }
  }
  if (last == result.samples.size()) {
    std::ostringstream msg;
    msg << "mu_2 does not change sign from <= 0 to > 0 on the sampled range (" << rho_lo << ", "
        << rmax << ") for " << group.name();
    throw NoSignChange(msg.str(), result.samples);
  }
  double lo = result.samples[last].first;
  double hi = result.samples[last + 1].first;
  double mu_lo = result.samples[last].second;
  double mu_hi = result.samples[last + 1].second;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double m = mu2_at(dim, group, mid, options);
    if (m <= 0.0) {
      lo = mid;
      mu_lo = m;
    } else {
      hi = mid;
      mu_hi = m;
    }
  }
  result.lo = lo;
  result.hi = hi;
  result.mu2_lo = mu_lo;
  result.mu2_hi = mu_hi;
  result.rho0 = 0.5 * (lo + hi);
  result.mu2_mid = mu2_at(dim, group, result.rho0, options);
  result.slope = (mu_hi - mu_lo) / (hi - lo);
  result.sign_changes = changes;
  return result;
}

double limit_form_value(const std::function<double(double)>& xi,
                        const std::function<double(double)>& dxi, double truncation) {
  if (truncation < 20.0) throw DomainError("limit_form_value: truncation must be >= 20");
  auto integrand = [&](double r) {
    const double v0 = std::max(radial::limit_profile(r), 0.0);
    const double x = xi(r);
    const double dx = dxi(r);
    return dx * dx - x * x + 3.0 * v0 * v0 * x * x;
  };
  std::vector<double> breaks;
  const int pieces = static_cast<int>(std::ceil(truncation));
  for (int k = 0; k <= pieces; ++k) breaks.push_back(-truncation + truncation * k / pieces);
  for (int k = 1; k <= 8; ++k) breaks.push_back(std::numbers::pi * k / 8.0);
  return quad::integrate(integrand, breaks);
}

std::vector<BumpSample> scan_limit_form_bumps(double truncation) {
  std::vector<BumpSample> out;
  const double lefts[] = {-6.0, -4.0, -3.0, -2.0, -1.5, -1.0, -0.5, 0.0};
  const double rights[] = {2.0, 2.5, 3.0, std::numbers::pi};
  for (double left : lefts) {
    for (double right : rights) {
      const double half = 0.5 * (right - left);
      const double mid = 0.5 * (right + left);
      auto xi = [=](double r) {
        const double x = (r - mid) / half;
        if (std::fabs(x) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - x * x));
      };
      auto dxi = [=](double r) {
        const double x = (r - mid) / half;
        if (std::fabs(x) >= 1.0) return 0.0;
        const double q = 1.0 - x * x;
        return std::exp(-1.0 / q) * (-2.0 * x / (q * q)) / half;
      };
      // Breakpoints of limit_form_value do not align with the support; the
      // adaptive panels absorb the flat tails.
      out.push_back({left, right, limit_form_value(xi, dxi, truncation)});
    }
  }
  return out;
}

}  // namespace overdet::spectrum
