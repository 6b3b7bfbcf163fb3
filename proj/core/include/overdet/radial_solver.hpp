#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "overdet/errors.hpp"

// Sign-changing radial solutions of -rho*Delta u = u - (u^+)^3 on the unit
// ball with u = 0 on the boundary. Internally everything is solved in the
// rescaled variable v_R(s) = u(s / R), R = rho^{-1/2}, on the ball of radius R.
namespace overdet::radial {

/// lambda_bar_2: second radial Dirichlet eigenvalue of -Delta on the unit ball.
double lambda_bar_2(int dim);
/// Right end of the admissible interval, 1 / lambda_bar_2.
double rho_max(int dim);

struct ProblemParams {
  int dim;
  double rho;
  double radius;  // R = rho^{-1/2}

  /// Throws NoSolution unless 0 < rho < 1/lambda_bar_2.
  static ProblemParams from_rho(int dim, double rho);
  static ProblemParams from_radius(int dim, double radius);
};

struct SolverOptions {
  double ode_rel = 1e-10;
  double ode_abs = 1e-10;
  double boundary_tol = 1e-10;  // |v(R)| accepted at the end of the shooting bisection
  int scan_points = 200;
  int grid_nodes = 2048;        // uniform nodes on [0, R]; the zero is inserted on top
  double start_radius = 1e-6;   // series start away from the regular singular point
};

class RadialSolution {
 public:
  /// Assembles a solution from raw samples (used by the solver and the cache).
  /// `defect` holds 1 - v to full precision; `zero_index` points at the node s = p_R.
  RadialSolution(ProblemParams params, double center_defect, std::vector<double> grid,
                 std::vector<double> values, std::vector<double> slopes,
                 std::vector<double> defect, std::size_t zero_index);

  const ProblemParams& params() const noexcept { return params_; }
  int dim() const noexcept { return params_.dim; }
  double rho() const noexcept { return params_.rho; }
  double radius() const noexcept { return params_.radius; }

  double center() const noexcept { return 1.0 - center_defect_; }
  double center_defect() const noexcept { return center_defect_; }

  /// Nodes in the rescaled variable s in [0, R], values v_R, v_R' and 1 - v_R.
  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> slopes() const noexcept { return slopes_; }
  std::span<const double> defect() const noexcept { return defect_; }
  std::size_t zero_index() const noexcept { return zero_index_; }
  /// Number of uniform nodes (the grid holds one extra node at p_R).
  std::size_t uniform_nodes() const noexcept { return grid_.size() - 1; }

  double zero_radius() const noexcept { return grid_[zero_index_]; }    // p_R
  double zero_unit() const noexcept { return zero_radius() / radius(); }  // p_rho
  double boundary_slope() const noexcept { return radius() * slopes_.back(); }  // c_rho

  /// Cubic Hermite interpolation of v_R and v_R' on [0, R].
  double v(double s) const;
  double dv(double s) const;
  /// Unit-ball profile u_rho(r) = v_R(R r) and its derivative.
  double u(double r) const { return v(r * radius()); }
  double du(double r) const { return radius() * dv(r * radius()); }

  double sup_abs() const;
  /// min over nodes of 1 - |v|, evaluated from the stored defect where v > 0.
  double min_gap_to_one() const;

 private:
  std::size_t locate(double s) const;

  ProblemParams params_;
  double center_defect_;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  std::vector<double> defect_;
  std::size_t zero_index_;
};

/// Shoots from the centre with v(0) = a, v'(0) = 0 and selects a in (0, 1) so
/// that the second zero of the trajectory sits at R. Throws NoSolution for
/// inadmissible rho and ShootingFailure (with the scanned shooting map) when
/// the scan does not certify a single crossing.
RadialSolution solve_radial(const ProblemParams& params, const SolverOptions& options = {});

/// The shooting-map scan alone: for each sampled centre value, whether the
/// trajectory's second zero falls before R.
std::vector<ShootingSample> scan_shooting_map(const ProblemParams& params,
                                              const SolverOptions& options = {});

/// Interface limit profile: -tanh(r/sqrt 2) for r <= 0, -sin(r)/sqrt 2 on (0, pi].
double limit_profile(double r);
double limit_profile_derivative(double r);

/// v_R(r + p_R), so that the zero sits at r = 0.
double recentered_profile(const RadialSolution& sol, double r);

/// H(r) = v'^2 + v^2 - (v^+)^4 / 2 sampled along a trajectory.
std::vector<double> energy(std::span<const double> values, std::span<const double> slopes);
std::vector<double> energy(const RadialSolution& sol);

/// sup_r |u_{rho+delta}(r) - u_rho(r)| over the shared uniform unit-ball nodes.
double continuity_probe(const ProblemParams& params, double delta,
                        const SolverOptions& options = {});

/// Max deviation, on nodes beyond p_R, between the trajectory and the solution of
/// the linear equation -f'' - (N-1) f'/s = f started from (p_R, 0, v'(p_R)).
/// The reference is integrated with a fixed-step classical RK4.
double outer_linear_mismatch(const RadialSolution& sol);

/// Max |v'' + (N-1) v'/s + v - (v^+)^3| over interior nodes away from s = 0 and
/// p_R, with v'' taken from a five-point difference of the stored slopes.
double ode_residual(const RadialSolution& sol);

}  // namespace overdet::radial
