#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "overdet/radial_solver.hpp"

// Run configuration, the on-disk solution cache and the text emitters (CSV, SVG).
namespace overdet::io {

/// Version tag written into every artifact and folded into cache keys.
std::string version_tag();

/// "0.9invL2" -> 0.9 / lambda_bar_2(dim); plain numbers pass through.
double parse_scalar(const std::string& text, int dim);
/// Comma-separated list of scalars.
std::vector<double> parse_list(const std::string& text, int dim);

struct SweepRange {
  double lo;
  double hi;
  int count;
  std::vector<double> values() const;  // count points, both ends included
};
/// "lo:hi:n" with lo < hi and n >= 2.
SweepRange parse_sweep(const std::string& text, int dim);

struct RunConfig {
  int dim = 3;
  std::string group;      // empty: the shipped group for the dimension
  std::string rho;        // raw text, resolved once dim is known
  std::string radius;
  std::string sweep;
  double tol_ode = 1e-10;
  double tol_eig = 1e-11;
  double tol_bracket = 0.0;  // 0: 1e-7 * rho_max
  std::string out_dir;       // empty: print only, write no files
  std::string cache_dir;     // empty: $OVERDET_CACHE_DIR or no cache
  int jobs = 1;
  bool svg = false;
  int imax = 5;

  /// Throws DomainError unless exactly one of rho / radius / sweep is set
  /// (when `needs_parameter`) and tolerances are positive.
  void validate(bool needs_parameter) const;
  /// The rho values selected by rho, radius or sweep, in input order.
  std::vector<double> rho_values() const;
  std::string group_or_default() const;
};

/// key = value lines; '#' starts a comment. Unknown keys are rejected.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
void apply_config(RunConfig& config, const std::map<std::string, std::string>& entries);

/// Environment variable naming the default cache directory.
inline constexpr const char* kCacheEnv = "OVERDET_CACHE_DIR";

struct CacheKey {
  int dim;
  double rho;      // rounded to 12 significant digits
  double ode_tol;
  std::string version;

  static CacheKey make(int dim, double rho, double ode_tol);
  std::string filename() const;
};

/// One file per key: a '#' header followed by CSV rows (s, v, dv, defect).
/// Writes go to a temporary file in the same directory and are renamed into place.
class SolutionCache {
 public:
  explicit SolutionCache(std::filesystem::path dir);

  std::optional<radial::RadialSolution> load(const CacheKey& key) const;
  void store(const CacheKey& key, const radial::RadialSolution& sol) const;
  /// Solves at the key's rounded rho on a miss and stores the result.
  radial::RadialSolution get_or_solve(int dim, double rho,
                                      const radial::SolverOptions& options) const;
  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  std::filesystem::path path_for(const CacheKey& key) const;
  std::filesystem::path dir_;
};

std::string serialize_solution(const radial::RadialSolution& sol, const CacheKey& key);
radial::RadialSolution deserialize_solution(const std::string& text);

struct Table {
  std::string title;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// '#'-prefixed header (title, version, parameters), a column line, then rows
/// printed with 17 significant digits.
std::string render_csv(const Table& table);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line chart: one polyline per series, axes with min/max ticks, zero line if in range.
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series);

/// %.17g formatting shared by every writer.
std::string format_double(double x);

}  // namespace overdet::io
