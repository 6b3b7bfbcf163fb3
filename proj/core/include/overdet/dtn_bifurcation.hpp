#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "overdet/dirichlet_spectrum.hpp"
#include "overdet/radial_solver.hpp"
#include "overdet/symmetry_groups.hpp"

// Linearized Dirichlet-to-Neumann operator H_rho(w) = d_nu psi_w + (N-1) w,
// where psi_w solves the linearized equation with boundary value w. On
// boundary data proportional to a degree-i harmonic it acts as multiplication
// by tau = f'(1) + N - 1, f being the regular channel solution with f(1) = 1.
namespace overdet::dtn {

struct SteklovChannel {
  int degree;
  double gamma;
  spectrum::RadialFactor factor;  // f(1) = 1
  double tau;
  double relative_boundary_value;  // |f(1)| / sup|f| before scaling
};

/// Throws ChannelDegenerate when |f(1)| / sup|f| < 1e-10, i.e. zero is (numerically)
/// a Dirichlet eigenvalue of the channel.
SteklovChannel steklov_value(const spectrum::ModeOperator& op);
SteklovChannel steklov_value(const radial::RadialSolution& sol, double gamma);

/// Channel form
///   int (rho f'^2 - f^2 + 3 (u^+)^2 f^2) r^{N-1} + rho gamma int f^2 r^{N-3} + rho (N-1) f(1)^2
/// integrated over [r_start, 1] with breakpoints at the sampling nodes and p_rho.
double quadratic_form_Qk(const std::function<double(double)>& f,
                         const std::function<double(double)>& df,
                         const spectrum::ModeOperator& op);
double quadratic_form_Qk(const spectrum::RadialFactor& factor, const spectrum::ModeOperator& op);

struct ChannelValue {
  int degree;
  int multiplicity;
  double gamma;
  double tau;
  double form;            // Q_k(f)
  double duality_error;   // |Q_k(f) - rho tau f(1)^2| / max(|Q_k|, |rho tau|)
};

struct Tau1Report {
  double rho;
  double tau1;  // tau of the first invariant channel, the minimum over the tested ones
  std::vector<ChannelValue> channels;
  bool strictly_increasing;
};

/// tau over the first `channel_budget` invariant channels. The radial channel
/// never enters (mean-zero boundary data). Throws MonotonicityViolation if a
/// higher channel undercuts the first.
Tau1Report tau1(const radial::RadialSolution& sol, const symmetry::SymmetryGroup& group,
                int channel_budget = 4);

struct BifurcationOptions {
  spectrum::SweepOptions sweep{};
  double rho0_tol = 0.0;       // 0: 1e-7 * rho_max
  double rho_star_tol = 0.0;   // 0: 1e-7 * rho_max
  int tau_samples = 24;
  int channel_budget = 4;
  double margin = 1e-3;        // relative to rho_max, at both ends of the rho_star sweep
};

struct RhoStarResult {
  double rho_star;
  double lo;       // tau1(lo) < 0
  double hi;       // tau1(hi) > 0
  double tau_lo;
  double tau_hi;
  int sign_changes;
  std::vector<std::pair<double, double>> samples;  // (rho, tau1)
  std::vector<Tau1Report> sweep;                   // full channel data at the samples
};

/// Bisection on the sign of tau1 over (rho0 + margin, rho_max - margin).
/// Throws NoSignChange with the sampled curve when tau1 keeps one sign.
RhoStarResult find_rho_star(const symmetry::SymmetryGroup& group, double rho0,
                            const BifurcationOptions& options = {});

struct BifurcationReport {
  int dim;
  symmetry::SymmetryGroup group;
  double lambda_bar_2_inv;
  spectrum::Rho0Result rho0;
  RhoStarResult rho_star;
  int kernel_multiplicity;
  double delta;            // offset used for the index evaluation
  int index_below;         // negative H_rho eigenvalues (with multiplicity) at rho_star - delta
  int index_above;         // same at rho_star + delta
  double boundary_slope;   // c_rho at rho_star
  bool complete;
  std::string note;        // why the report is incomplete, if it is
};

/// Negative-eigenvalue count of H_rho over the tested channels, with multiplicity.
int dtn_index(const radial::RadialSolution& sol, const symmetry::SymmetryGroup& group,
              int channel_budget = 4);

/// Runs rho0, rho_star and the parity check. Upstream failures after rho0 is
/// known yield an incomplete report instead of an exception.
BifurcationReport bifurcation_report(const symmetry::SymmetryGroup& group,
                                     const BifurcationOptions& options = {});

}  // namespace overdet::dtn
