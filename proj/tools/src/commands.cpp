#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "overdet/dirichlet_spectrum.hpp"
#include "overdet/dtn_bifurcation.hpp"
#include "overdet/io.hpp"
#include "overdet/radial_solver.hpp"
#include "overdet/special_functions.hpp"
#include "overdet/symmetry_groups.hpp"
#include "overdet_cli/cli.hpp"

namespace overdet::cli {

namespace {

namespace fs = std::filesystem;

// Published five-decimal values of r2 and the first zeros of the derivative profiles.
struct GoldenTable {
  int dim;
  double r2;
  std::vector<double> rows;  // degree 1, 2, ...
};

const std::vector<GoldenTable>& golden_tables() {
  static const std::vector<GoldenTable> tables = {
      {2, 5.52008, {1.84118, 3.05424, 4.20119, 5.31755, 6.41562}},
      {3, 2.0 * 3.14159265358979323846, {2.08158, 3.34209, 4.51410, 5.64670, 6.75646}},
      {4, 7.01559, {2.29991, 3.61126, 4.81128, 5.96235, 7.08548, 8.19039}},
  };
  return tables;
}

constexpr double kGoldenTol = 1e-4;

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  io::RunConfig config;
  std::ostream& out;
  std::ostream& err;

  radial::SolverOptions solver() const {
    radial::SolverOptions o;
    o.ode_rel = config.tol_ode;
    o.ode_abs = config.tol_ode;
    return o;
  }

  spectrum::SweepOptions sweep() const {
    spectrum::SweepOptions o;
    o.solver = solver();
    o.eigen.tol = config.tol_eig;
    o.jobs = config.jobs;
    return o;
  }

  std::optional<io::SolutionCache> cache() const {
    std::string dir = config.cache_dir;
    if (dir.empty()) {
      if (const char* env = std::getenv(io::kCacheEnv)) dir = env;
    }
    if (dir.empty()) return std::nullopt;
    return io::SolutionCache(dir);
  }

  radial::RadialSolution solve(double rho) const {
    if (auto c = cache()) return c->get_or_solve(config.dim, rho, solver());
    return radial::solve_radial(radial::ProblemParams::from_rho(config.dim, rho), solver());
  }

  bool writes_files() const { return !config.out_dir.empty(); }

  void write(const std::string& name, const std::string& text) const {
    const fs::path path = fs::path(config.out_dir) / name;
    io::write_text_atomic(path, text);
    out << "wrote " << path.string() << "\n";
  }

  symmetry::SymmetryGroup group() const {
    auto g = symmetry::SymmetryGroup::parse(config.group_or_default());
    if (g.dimension() != config.dim) {
      throw UsageError("group " + g.name() + " acts in dimension " +
                       std::to_string(g.dimension()) + ", not " + std::to_string(config.dim));
    }
    return g;
  }
};

std::string group_slug(const std::string& name) {
  std::string s = name;
  std::replace(s.begin(), s.end(), ':', '-');
  return s;
}

int cmd_bessel_tables(Context& ctx) {
  const int dim = ctx.config.dim;
  if (dim < 2 || dim > 4) throw UsageError("bessel-tables supports --dim 2, 3 or 4");
  if (ctx.config.imax < 1) throw UsageError("--imax must be >= 1");
  const auto table = special::appendix_table(dim, ctx.config.imax);
  const auto& golden = *std::find_if(golden_tables().begin(), golden_tables().end(),
                                     [dim](const GoldenTable& g) { return g.dim == dim; });
  bool mismatch = false;
  io::Table csv{"first zeros of derivative profiles, N = " + std::to_string(dim),
                {{"N", std::to_string(dim)}, {"golden_tolerance", io::format_double(kGoldenTol)}},
                {"degree", "zero", "golden", "diff"},
                {}};
  auto line = [&](const std::string& label, double value, std::optional<double> ref) {
    ctx.out << label << "  " << fmt("%12.6f", value);
    if (ref) {
      const double diff = value - *ref;
      const bool bad = std::fabs(diff) > kGoldenTol;
      mismatch = mismatch || bad;
      ctx.out << "  " << fmt("%10.5f", *ref) << "  " << fmt("%+10.2e", diff) << (bad ? "  MISMATCH" : "");
    }
    ctx.out << "\n";
  };
  ctx.out << "N = " << dim << "\n";
  ctx.out << "  i          zero      golden        diff\n";
  line(" r2", table.r2, golden.r2);
  csv.rows.push_back({0.0, table.r2, golden.r2, table.r2 - golden.r2});
  for (const auto& row : table.rows) {
    std::optional<double> ref;
    if (row.degree <= static_cast<int>(golden.rows.size())) {
      ref = golden.rows[static_cast<std::size_t>(row.degree - 1)];
    }
    char label[16];
    std::snprintf(label, sizeof label, "%3d", row.degree);
    line(label, row.zero, ref);
    csv.rows.push_back({static_cast<double>(row.degree), row.zero, ref.value_or(NAN),
                        ref ? row.zero - *ref : NAN});
  }
  if (ctx.writes_files()) ctx.write("bessel_N" + std::to_string(dim) + ".csv", io::render_csv(csv));
  if (mismatch) {
    ctx.err << "golden mismatch beyond " << kGoldenTol << "\n";
    return kGoldenMismatch;
  }
  return kOk;
}

int cmd_check_group(Context& ctx) {
  const auto group = ctx.group();
  const auto report = symmetry::check_condition_G(group);
  ctx.out << "group        " << group.name() << "\n"
          << "dimension    " << group.dimension() << "\n"
          << "i1           " << report.i1 << "\n"
          << "gamma1       " << report.gamma1 << "\n"
          << "multiplicity " << report.multiplicity << "\n"
          << "r2           " << fmt("%.6f", report.r2) << "\n"
          << "s1           " << fmt("%.6f", report.s1) << "\n"
          << "condition G  " << (report.passes ? "pass" : "fail") << "\n";
  return report.passes ? kOk : kPrecondition;
}

int cmd_radial(Context& ctx) {
  ctx.config.validate(true);
  std::vector<io::Series> curves;
  for (double rho : ctx.config.rho_values()) {
    const auto sol = ctx.solve(rho);
    const auto h = radial::energy(sol);
    ctx.out << "N = " << sol.dim() << "  rho = " << fmt("%.10g", sol.rho())
            << "  R = " << fmt("%.10g", sol.radius()) << "  a = " << fmt("%.12g", sol.center())
            << "  1-a = " << fmt("%.6e", sol.center_defect())
            << "  p_R = " << fmt("%.10g", sol.zero_radius())
            << "  c_rho = " << fmt("%.10g", sol.boundary_slope()) << "\n";
    io::Table t{"radial solution",
                {{"N", std::to_string(sol.dim())},
                 {"rho", io::format_double(sol.rho())},
                 {"R", io::format_double(sol.radius())},
                 {"a", io::format_double(sol.center())},
                 {"one_minus_a", io::format_double(sol.center_defect())},
                 {"p_R", io::format_double(sol.zero_radius())},
                 {"c_rho", io::format_double(sol.boundary_slope())},
                 {"units", "r is the rescaled radius s in [0, R]"}},
                {"r", "v", "dv", "H"},
                {}};
    const auto s = sol.grid();
    for (std::size_t j = 0; j < s.size(); ++j) {
      t.rows.push_back({s[j], sol.values()[j], sol.slopes()[j], h[j]});
    }
    if (ctx.writes_files()) {
      ctx.write("radial_N" + std::to_string(sol.dim()) + "_R" + fmt("%.6g", sol.radius()) + ".csv",
                io::render_csv(t));
    }
    curves.push_back({"R = " + fmt("%.4g", sol.radius()),
                      {s.begin(), s.end()},
                      {sol.values().begin(), sol.values().end()}});
  }
  if (ctx.config.svg && ctx.writes_files()) {
    ctx.write("radial_N" + std::to_string(ctx.config.dim) + ".svg",
              io::render_svg("v_R in dimension " + std::to_string(ctx.config.dim), "r", "v_R(r)",
                             curves));
  }
  return kOk;
}

int cmd_profile_limit(Context& ctx) {
  if (ctx.config.rho.empty() && ctx.config.radius.empty() && ctx.config.sweep.empty()) {
    ctx.config.radius = "10,20,30";
  }
  ctx.config.validate(true);
  std::vector<io::Series> curves;
  std::vector<double> rs;
  for (int k = 0; k <= 400; ++k) rs.push_back(-5.0 + 8.0 * k / 400);
  io::Series limit{"limit", rs, {}};
  for (double r : rs) limit.y.push_back(radial::limit_profile(r));
  ctx.out << "       R        R - p_R    sup|v~_R - v~_0| on [-5, 3]\n";
  for (double rho : ctx.config.rho_values()) {
    const auto sol = ctx.solve(rho);
    io::Series cur{"R = " + fmt("%.4g", sol.radius()), {}, {}};
    double sup = 0.0;
    for (double r : rs) {
      if (r + sol.zero_radius() < 0.0) continue;
      const double v = radial::recentered_profile(sol, r);
      sup = std::max(sup, std::fabs(v - radial::limit_profile(r)));
      cur.x.push_back(r);
      cur.y.push_back(v);
    }
    ctx.out << fmt("%8.3f", sol.radius()) << "  " << fmt("%12.8f", sol.radius() - sol.zero_radius())
            << "  " << fmt("%12.6e", sup) << "\n";
    curves.push_back(std::move(cur));
  }
  curves.push_back(std::move(limit));
  if (ctx.writes_files()) {
    io::Table t{"recentered profiles", {{"N", std::to_string(ctx.config.dim)}}, {"r"}, {}};
    for (const auto& c : curves) t.columns.push_back(c.label == "limit" ? "limit" : "v_" + c.label.substr(4));
    for (std::size_t k = 0; k < rs.size(); ++k) {
      std::vector<double> row{rs[k]};
      for (const auto& c : curves) {
        const auto it = std::find(c.x.begin(), c.x.end(), rs[k]);
        row.push_back(it == c.x.end() ? NAN : c.y[static_cast<std::size_t>(it - c.x.begin())]);
      }
      t.rows.push_back(std::move(row));
    }
    ctx.write("profile_limit_N" + std::to_string(ctx.config.dim) + ".csv", io::render_csv(t));
    if (ctx.config.svg) {
      ctx.write("profile_limit_N" + std::to_string(ctx.config.dim) + ".svg",
                io::render_svg("recentered profiles and interface limit", "r", "v", curves));
    }
  }
  return kOk;
}

int cmd_spectrum(Context& ctx) {
  ctx.config.validate(true);
  const auto group = ctx.group();
  symmetry::require_condition_G(group);
  const auto sweep = ctx.sweep();
  io::Table t{"G-symmetric Dirichlet spectrum",
              {{"N", std::to_string(ctx.config.dim)}, {"group", group.name()}},
              {"rho", "mu_bar_1", "mu_bar_2", "mu_gamma1", "mu2"},
              {}};
  ctx.out << "         rho      mu_bar_1      mu_bar_2     mu_gamma1           mu2\n";
  for (double rho : ctx.config.rho_values()) {
    const auto sol = ctx.solve(rho);
    const auto rep = spectrum::mu2_G(sol, group, sweep.eigen);
    ctx.out << fmt("%12.8f", rho) << fmt("%14.8f", rep.mu_bar_1) << fmt("%14.8f", rep.mu_bar_2)
            << fmt("%14.8f", rep.mu_mode1) << fmt("%14.8f", rep.mu2_G) << "\n";
    t.rows.push_back({rho, rep.mu_bar_1, rep.mu_bar_2, rep.mu_mode1, rep.mu2_G});
  }
  if (ctx.writes_files()) {
    ctx.write("spectrum_N" + std::to_string(ctx.config.dim) + "_" + group_slug(group.name()) + ".csv",
              io::render_csv(t));
  }
  return kOk;
}

double bracket_tol(const io::RunConfig& c) {
  return c.tol_bracket > 0.0 ? c.tol_bracket : 1e-7 * radial::rho_max(c.dim);
}

int cmd_rho0(Context& ctx) {
  ctx.config.validate(false);
  const auto group = ctx.group();
  symmetry::require_condition_G(group);
  const auto res = spectrum::find_rho0(group, bracket_tol(ctx.config), ctx.sweep());
  ctx.out << "group      " << group.name() << "\n"
          << "rho_max    " << fmt("%.12g", radial::rho_max(ctx.config.dim)) << "\n"
          << "rho0       " << fmt("%.12g", res.rho0) << "\n"
          << "bracket    [" << fmt("%.12g", res.lo) << ", " << fmt("%.12g", res.hi) << "]\n"
          << "mu2(lo)    " << fmt("%.6e", res.mu2_lo) << "\n"
          << "mu2(hi)    " << fmt("%.6e", res.mu2_hi) << "\n"
          << "mu2(rho0)  " << fmt("%.6e", res.mu2_mid) << "\n"
          << "slope      " << fmt("%.6g", res.slope) << "\n"
          << "changes    " << res.sign_changes << "\n";
  if (ctx.writes_files()) {
    io::Table t{"mu2 sweep", {{"N", std::to_string(ctx.config.dim)}, {"group", group.name()},
                              {"rho0", io::format_double(res.rho0)}},
                {"rho", "mu2"}, {}};
    for (const auto& [r, m] : res.samples) t.rows.push_back({r, m});
    ctx.write("rho0_N" + std::to_string(ctx.config.dim) + "_" + group_slug(group.name()) + ".csv",
              io::render_csv(t));
  }
  return kOk;
}

std::string render_report(const dtn::BifurcationReport& r, double tol) {
  std::ostringstream o;
  o << "# overdet bifurcation report\n";
  o << "version            " << io::version_tag() << "\n";
  o << "N                  " << r.dim << "\n";
  o << "group              " << r.group.name() << "\n";
  o << "complete           " << (r.complete ? "true" : "false") << "\n";
  if (!r.note.empty()) o << "note               " << r.note << "\n";
  o << "bracket_tol        " << io::format_double(tol) << "\n";
  o << "lambda_bar_2_inv   " << io::format_double(r.lambda_bar_2_inv) << "\n";
  o << "rho0               " << io::format_double(r.rho0.rho0) << "\n";
  o << "rho0_bracket       " << io::format_double(r.rho0.lo) << " " << io::format_double(r.rho0.hi) << "\n";
  o << "rho0_sign_changes  " << r.rho0.sign_changes << "\n";
  if (r.complete) {
    o << "rho_star           " << io::format_double(r.rho_star.rho_star) << "\n";
    o << "rho_star_bracket   " << io::format_double(r.rho_star.lo) << " "
      << io::format_double(r.rho_star.hi) << "\n";
    o << "tau_at_bracket     " << io::format_double(r.rho_star.tau_lo) << " "
      << io::format_double(r.rho_star.tau_hi) << "\n";
    o << "tau_sign_changes   " << r.rho_star.sign_changes << "\n";
    o << "kernel_multiplicity " << r.kernel_multiplicity << "\n";
    o << "index_delta        " << io::format_double(r.delta) << "\n";
    o << "index_below        " << r.index_below << "\n";
    o << "index_above        " << r.index_above << "\n";
    o << "c_rho_at_rho_star  " << io::format_double(r.boundary_slope) << "\n";
  }
  return o.str();
}

int cmd_bifurcate(Context& ctx) {
  ctx.config.validate(false);
  const auto group = ctx.group();
  symmetry::require_condition_G(group);
  dtn::BifurcationOptions opts;
  opts.sweep = ctx.sweep();
  opts.rho0_tol = bracket_tol(ctx.config);
  opts.rho_star_tol = bracket_tol(ctx.config);
  const auto report = dtn::bifurcation_report(group, opts);
  const std::string text = render_report(report, opts.rho_star_tol);
  ctx.out << text;
  const std::string stem = "bifurcate_N" + std::to_string(ctx.config.dim) + "_" + group_slug(group.name());
  if (ctx.writes_files()) {
    ctx.write(stem + (report.complete ? "_report.txt" : "_partial.txt"), text);
    if (report.complete) {
      io::Table t{"tau curve",
                  {{"N", std::to_string(ctx.config.dim)},
                   {"group", group.name()},
                   {"eta", "rho * tau (reported alongside tau)"}},
                  {"rho", "tau1", "eta1"},
                  {}};
      const auto& sweep = report.rho_star.sweep;
      if (!sweep.empty()) {
        for (const auto& ch : sweep.front().channels) t.columns.push_back("tau_deg" + std::to_string(ch.degree));
      }
      io::Series curve{"tau1", {}, {}};
      for (const auto& s : sweep) {
        std::vector<double> row{s.rho, s.tau1, s.rho * s.tau1};
        for (const auto& ch : s.channels) row.push_back(ch.tau);
        t.rows.push_back(std::move(row));
        curve.x.push_back(s.rho);
        curve.y.push_back(std::clamp(s.tau1, -20.0, 1e300));
      }
      ctx.write(stem + "_tau.csv", io::render_csv(t));
      if (ctx.config.svg) {
        ctx.write(stem + "_tau.svg", io::render_svg("tau1 (clipped below at -20), " + group.name(),
                                                    "rho", "tau1", {curve}));
      }
    }
  }
  if (!report.complete) {
    ctx.err << "bifurcation report incomplete: " << report.note << "\n";
    return kSolverFailure;
  }
  return kOk;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const ConditionGFailure*>(&e) != nullptr) return kPrecondition;
  if (e.kind() == ErrorKind::precondition) return kPrecondition;
  return kSolverFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"overdet: sign-changing radial solutions, spectra and bifurcation points"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::version_tag());

  struct Flags {
    int dim = 0;
    std::string group, rho, radius, sweep, out_dir, cache, config;
    double tol_ode = 0, tol_eig = 0, tol_bracket = 0;
    int jobs = 0, imax = 0;
    bool svg = false;
  } f;
  std::map<std::string, CLI::Option*> opts;
  using Handler = std::function<int(Context&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto add = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    opts[name + "dim"] = sub->add_option("--dim", f.dim, "dimension N");
    opts[name + "group"] = sub->add_option("--group", f.group,
                                           "dihedral:K | icosahedral | hyper-icosahedral | custom:N:I1:MULT");
    opts[name + "rho"] = sub->add_option("--rho", f.rho, "rho value(s), comma separated; suffix invL2 scales by 1/lambda_bar_2");
    opts[name + "R"] = sub->add_option("--R", f.radius, "radius value(s) R = rho^{-1/2}, comma separated");
    opts[name + "sweep"] = sub->add_option("--sweep", f.sweep, "rho sweep lo:hi:n");
    opts[name + "tol-ode"] = sub->add_option("--tol-ode", f.tol_ode, "ODE tolerance");
    opts[name + "tol-eig"] = sub->add_option("--tol-eig", f.tol_eig, "eigenvalue bracket tolerance");
    opts[name + "tol-bracket"] = sub->add_option("--tol-bracket", f.tol_bracket, "rho bracket width");
    opts[name + "out"] = sub->add_option("--out", f.out_dir, "output directory");
    opts[name + "cache"] = sub->add_option("--cache", f.cache, std::string("solution cache directory (default $") + io::kCacheEnv + ")");
    opts[name + "jobs"] = sub->add_option("--jobs", f.jobs, "worker threads");
    opts[name + "svg"] = sub->add_flag("--svg", f.svg, "also write SVG plots");
    opts[name + "imax"] = sub->add_option("--imax", f.imax, "largest degree in bessel-tables");
    opts[name + "config"] = sub->add_option("--config", f.config, "key = value config file");
    commands.emplace_back(sub, std::move(h));
  };
  add("bessel-tables", "zeros of the radial profiles against the published table", cmd_bessel_tables);
  add("check-group", "condition (G) for a symmetry group", cmd_check_group);
  add("radial", "sign-changing radial solutions", cmd_radial);
  add("profile-limit", "recentered profiles against the interface limit", cmd_profile_limit);
  add("spectrum", "radial and G-invariant Dirichlet eigenvalues", cmd_spectrum);
  add("rho0", "critical value rho0", cmd_rho0);
  add("bifurcate", "rho0, rho*, tau curve and parity check", cmd_bifurcate);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  for (auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    const std::string name = sub->get_name();
    auto given = [&](const std::string& key) { return opts[name + key]->count() > 0; };
    try {
      io::RunConfig config;
      if (given("config")) io::apply_config(config, io::read_config_file(f.config));
      if (given("group")) config.group = f.group;
      if (given("dim")) {
        config.dim = f.dim;
      } else if (given("group") || !config.group.empty()) {
        config.dim = symmetry::SymmetryGroup::parse(config.group).dimension();
      }
      if (given("rho")) config.rho = f.rho;
      if (given("R")) config.radius = f.radius;
      if (given("sweep")) config.sweep = f.sweep;
      if (given("tol-ode")) config.tol_ode = f.tol_ode;
      if (given("tol-eig")) config.tol_eig = f.tol_eig;
      if (given("tol-bracket")) config.tol_bracket = f.tol_bracket;
      if (given("out")) config.out_dir = f.out_dir;
      if (given("cache")) config.cache_dir = f.cache;
      if (given("jobs")) config.jobs = f.jobs;
      if (given("svg")) config.svg = f.svg;
      if (given("imax")) config.imax = f.imax;
      if (name != "bessel-tables" && name != "check-group") config.validate(false);
      Context ctx{config, out, err};
      return handler(ctx);
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << "\n";
      return kUsage;
    } catch (const DomainError& e) {
      err << "usage error: " << e.what() << "\n";
      return kUsage;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return exit_code_for(e);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kSolverFailure;
    }
  }
  return kUsage;
}

}  // namespace overdet::cli
