#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "overdet/radial_solver.hpp"
#include "overdet/symmetry_groups.hpp"

// Channel-wise spectrum of L = -rho*Delta - 1 + 3(u^+)^2 on the unit ball.
// Separating against a spherical harmonic with eigenvalue gamma = i(i+N-2)
// leaves the radial problem
//   -rho (f'' + (N-1) f'/r - gamma f / r^2) - f + W(r) f = mu f,  f(1) = 0,
// with W = 3 (u^+)^2 and f ~ r^i at the origin.
namespace overdet::spectrum {

/// The reduced operator for one channel, in unit-ball coordinates.
class ModeOperator {
 public:
  /// Potential 3 (u_rho^+)^2 from a computed radial solution.
  static ModeOperator from_solution(std::shared_ptr<const radial::RadialSolution> sol,
                                    double gamma);
  static ModeOperator from_solution(const radial::RadialSolution& sol, double gamma);
  /// W = 0: the shifted radial Laplacian, used by oracle tests.
  static ModeOperator free(int dim, double rho, double gamma);

  ModeOperator with_gamma(double gamma) const;

  int dim() const noexcept { return dim_; }
  double rho() const noexcept { return rho_; }
  double gamma() const noexcept { return gamma_; }
  /// Exponent i of the regular solution f ~ r^i, from gamma = i(i+N-2).
  double exponent() const noexcept { return exponent_; }
  bool has_potential() const noexcept { return sol_ != nullptr; }
  const radial::RadialSolution* solution() const noexcept { return sol_.get(); }

  double potential(double r) const;
  /// Interior breakpoints of the potential (the zero p_rho), for integrators and quadrature.
  std::vector<double> breakpoints() const;
  /// Sampling nodes in (0, 1]: the solution grid mapped to the unit ball, or
  /// 2048 uniform nodes without a potential. The first node is the series start.
  std::vector<double> nodes() const;

 private:
  ModeOperator(int dim, double rho, double gamma,
               std::shared_ptr<const radial::RadialSolution> sol);

  int dim_;
  double rho_;
  double gamma_;
  double exponent_;
  std::shared_ptr<const radial::RadialSolution> sol_;
};

/// Left end of every channel integration: f ~ r^i (1 + c r^2) is imposed here.
inline constexpr double kModeStart = 1e-4;

/// Solution of the channel ODE sampled with f, f', f'' on a fixed grid.
/// f and f' are reconstructed by cubic Hermite interpolation.
struct RadialFactor {
  std::vector<double> r;
  std::vector<double> f;
  std::vector<double> df;
  std::vector<double> d2f;
  int sign_changes = 0;  // interior zeros of f on (r_0, 1)

  double value(double x) const;
  double derivative(double x) const;
  double sup_abs() const;
};

/// Integrates the channel ODE at spectral parameter mu from the regular start,
/// returning the factor sampled on op.nodes() (arbitrary overall scale).
RadialFactor integrate_mode(const ModeOperator& op, double mu, double ode_rel = 1e-11);

/// Prufer angle at r = 1: zero count * pi + phase of (f, rho r^{N-1} f').
/// Increasing in mu; the j-th Dirichlet eigenvalue is where it equals j*pi.
double prufer_angle(const ModeOperator& op, double mu);

struct EigenOptions {
  double tol = 1e-11;         // absolute bracket width in mu, scaled by max(1, |mu|)
  bool cross_check = true;    // compare against the finite-difference oracle
  double agreement = 1e-4;    // |mu_shoot - mu_fd| <= agreement * max(1, |mu|)
  int fd_cells = 4096;        // coarse oracle grid; the fine grid doubles it
};

/// Lowest `count` Dirichlet eigenvalues of the channel, ascending. Throws
/// ConvergenceFailure if shooting and the oracle disagree.
std::vector<double> mode_eigenvalues(const ModeOperator& op, int count,
                                     const EigenOptions& options = {});

/// Finite-difference oracle: conservative three-point discretization on
/// `cells` uniform cells, eigenvalues by Sturm-sequence bisection.
std::vector<double> fd_eigenvalues(const ModeOperator& op, int count, int cells);
/// Richardson extrapolation of fd_eigenvalues over cells and 2*cells.
std::vector<double> fd_eigenvalues_extrapolated(const ModeOperator& op, int count, int cells);

/// Normalized eigenfunction for eigenvalue index j >= 1: int f^2 r^{N-1} = 1, f'(0+) sign positive.
RadialFactor mode_eigenfunction(const ModeOperator& op, int index, const EigenOptions& options = {});

/// Q_D(f) / int f^2 r^{N-1} for a factor with f(1) = 0, channel form of
/// int rho |grad phi|^2 - phi^2 + 3 (u^+)^2 phi^2.
double rayleigh_quotient(const ModeOperator& op, const RadialFactor& factor);

struct MorseReport {
  double mu_bar_1;
  double mu_bar_2;
};

/// Two lowest radial eigenvalues; throws PropertyViolation unless mu_1 < 0 < mu_2.
MorseReport morse_check(const radial::RadialSolution& sol, const EigenOptions& options = {});

struct SpectrumReport {
  double rho;
  double mu_bar_1;
  double mu_bar_2;
  double mu_mode1;  // first eigenvalue of the gamma_1 channel
  double mu2_G;     // min(mu_bar_2, mu_mode1)
  symmetry::SymmetryGroup group;
  std::vector<double> higher_modes;  // first eigenvalues of the next invariant channels
};

/// G-symmetric second eigenvalue. Also checks that the next two invariant
/// channels do not undercut gamma_1 (PropertyViolation otherwise).
SpectrumReport mu2_G(const radial::RadialSolution& sol, const symmetry::SymmetryGroup& group,
                     const EigenOptions& options = {});

struct SweepOptions {
  radial::SolverOptions solver{};
  EigenOptions eigen{};
  int samples = 32;
  double radius_max = 0.0;  // 0: per-dimension default
  int jobs = 1;
};

/// Largest radius used when sampling small rho (rho_lo = 1 / radius_max^2).
double default_radius_max(int dim);

struct Rho0Result {
  double rho0;
  double lo;               // mu_2(lo) <= 0
  double hi;               // mu_2(hi) > 0
  double mu2_lo;
  double mu2_hi;
  double mu2_mid;          // mu_2 at rho0
  double slope;            // d mu_2 / d rho across the bracket
  int sign_changes;        // on the coarse sweep; 1 expected
  std::vector<std::pair<double, double>> samples;  // (rho, mu_2)
};

double mu2_at(int dim, const symmetry::SymmetryGroup& group, double rho,
              const SweepOptions& options);

/// rho_0 = sup { rho : mu_2(rho) <= 0 }: coarse sweep then bisection to `tol`.
/// Throws NoSignChange if mu_2 keeps one sign on the sampled range.
Rho0Result find_rho0(const symmetry::SymmetryGroup& group, double tol,
                     const SweepOptions& options = {});

/// One-dimensional limit of the Dirichlet form,
/// int_{-T}^{pi} xi'^2 - xi^2 + 3 (v0^+)^2 xi^2, with v0 the interface limit profile.
double limit_form_value(const std::function<double(double)>& xi,
                        const std::function<double(double)>& dxi, double truncation = 20.0);

struct BumpSample {
  double left;
  double right;
  double value;
};

/// Smooth compactly supported bumps exp(-1/(1-x^2)) on [left, right] subset (-T, pi),
/// scanned over a grid of supports.
std::vector<BumpSample> scan_limit_form_bumps(double truncation = 20.0);

}  // namespace overdet::spectrum
