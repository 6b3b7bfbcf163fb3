#include "overdet/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "overdet/errors.hpp"

#ifndef OVERDET_VERSION
#define OVERDET_VERSION "unknown"
#endif

namespace overdet::io {

namespace {

constexpr const char* kInvToken = "invL2";
constexpr int kCacheFormat = 1;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw DomainError("cannot parse number '" + text + "' in " + context);
  }
  return v;
}

int parse_integer(const std::string& text, const std::string& context) {
  const double v = parse_number(text, context);
  if (v != std::floor(v) || std::fabs(v) > 1e9) {
    throw DomainError("expected an integer, got '" + text + "' in " + context);
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw DomainError("expected a boolean, got '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace

std::string version_tag() { return OVERDET_VERSION; }

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_scalar(const std::string& text, int dim) {
  const std::string t = trim(text);
  const auto pos = t.find(kInvToken);
  if (pos == std::string::npos) return parse_number(t, "scalar");
  if (pos + std::string(kInvToken).size() != t.size()) {
    throw DomainError("'" + std::string(kInvToken) + "' must end the value: '" + text + "'");
  }
  const std::string factor = trim(t.substr(0, pos));
  const double f = factor.empty() ? 1.0 : parse_number(factor, "scalar");
  return f * radial::rho_max(dim);
}

std::vector<double> parse_list(const std::string& text, int dim) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_scalar(part, dim));
  if (out.empty()) throw DomainError("empty value list");
  return out;
}

std::vector<double> SweepRange::values() const {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(lo + (hi - lo) * k / (count - 1));
  return out;
}

SweepRange parse_sweep(const std::string& text, int dim) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw DomainError("sweep must read lo:hi:n, got '" + text + "'");
  SweepRange s{parse_scalar(parts[0], dim), parse_scalar(parts[1], dim),
               parse_integer(parts[2], "sweep count")};
  if (!(s.lo < s.hi)) throw DomainError("sweep needs lo < hi");
  if (s.count < 2) throw DomainError("sweep needs n >= 2");
  return s;
}

void RunConfig::validate(bool needs_parameter) const {
  if (dim < 2 || dim > 4) throw DomainError("--dim must be 2, 3 or 4");
  if (!(tol_ode > 0.0) || !(tol_eig > 0.0) || tol_bracket < 0.0) {
    throw DomainError("tolerances must be positive");
  }
  if (jobs < 1) throw DomainError("--jobs must be >= 1");
  if (needs_parameter) {
    const int given = static_cast<int>(!rho.empty()) + static_cast<int>(!radius.empty()) +
                      static_cast<int>(!sweep.empty());
    if (given != 1) throw DomainError("exactly one of --rho, --R or --sweep is required");
  }
}

std::vector<double> RunConfig::rho_values() const {
  if (!rho.empty()) return parse_list(rho, dim);
  if (!radius.empty()) {
    std::vector<double> out;
    for (double r : parse_list(radius, dim)) {
      if (!(r > 0.0)) throw DomainError("radius must be positive");
      out.push_back(1.0 / (r * r));
    }
    return out;
  }
  if (!sweep.empty()) return parse_sweep(sweep, dim).values();
  return {};
}

std::string RunConfig::group_or_default() const {
  if (!group.empty()) return group;
  switch (dim) {
    case 2: return "dihedral:5";
    case 3: return "icosahedral";
    default: return "hyper-icosahedral";
  }
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError(path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_config(RunConfig& config, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "dim") {
      config.dim = parse_integer(value, key);
    } else if (key == "group") {
      config.group = value;
    } else if (key == "rho") {
      config.rho = value;
    } else if (key == "R") {
      config.radius = value;
    } else if (key == "sweep") {
      config.sweep = value;
    } else if (key == "tol-ode") {
      config.tol_ode = parse_number(value, key);
    } else if (key == "tol-eig") {
      config.tol_eig = parse_number(value, key);
    } else if (key == "tol-bracket") {
      config.tol_bracket = parse_number(value, key);
    } else if (key == "out") {
      config.out_dir = value;
    } else if (key == "cache") {
      config.cache_dir = value;
    } else if (key == "jobs") {
      config.jobs = parse_integer(value, key);
    } else if (key == "svg") {
      config.svg = parse_bool(value);
    } else if (key == "imax") {
      config.imax = parse_integer(value, key);
    } else {
      throw DomainError("unknown config key '" + key + "'");
    }
  }
}

CacheKey CacheKey::make(int dim, double rho, double ode_tol) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", rho);
  return {dim, std::strtod(buf, nullptr), ode_tol, version_tag()};
}

std::string CacheKey::filename() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "radial_N%d_rho%.11e_tol%.3e_v%s.csv", dim, rho, ode_tol,
                version.c_str());
  return buf;
}

SolutionCache::SolutionCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path SolutionCache::path_for(const CacheKey& key) const {
  return dir_ / key.filename();
}

std::optional<radial::RadialSolution> SolutionCache::load(const CacheKey& key) const {
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    auto sol = deserialize_solution(buf.str());
    if (sol.dim() != key.dim || sol.rho() != key.rho) return std::nullopt;
    return sol;
  } catch (const Error&) {
    return std::nullopt;  // unreadable entry: recompute and overwrite
  }
}

void SolutionCache::store(const CacheKey& key, const radial::RadialSolution& sol) const {
  write_text_atomic(path_for(key), serialize_solution(sol, key));
}

radial::RadialSolution SolutionCache::get_or_solve(int dim, double rho,
                                                   const radial::SolverOptions& options) const {
  const auto key = CacheKey::make(dim, rho, options.ode_rel);
  if (auto hit = load(key)) return *hit;
  auto sol = radial::solve_radial(radial::ProblemParams::from_rho(dim, key.rho), options);
  store(key, sol);
  return sol;
}

std::string serialize_solution(const radial::RadialSolution& sol, const CacheKey& key) {
  std::ostringstream out;
  out << "# overdet radial solution\n";
  out << "# format = " << kCacheFormat << "\n";
  out << "# version = " << key.version << "\n";
  out << "# N = " << sol.dim() << "\n";
  out << "# rho = " << format_double(sol.rho()) << "\n";
  out << "# R = " << format_double(sol.radius()) << "\n";
  out << "# ode_tol = " << format_double(key.ode_tol) << "\n";
  out << "# center_defect = " << format_double(sol.center_defect()) << "\n";
  out << "# zero_index = " << sol.zero_index() << "\n";
  out << "# nodes = " << sol.grid().size() << "\n";
  out << "# a = " << format_double(sol.center()) << "\n";
  out << "# p_R = " << format_double(sol.zero_radius()) << "\n";
  out << "# c_rho = " << format_double(sol.boundary_slope()) << "\n";
  out << "s,v,dv,defect\n";
  const auto s = sol.grid();
  const auto v = sol.values();
  const auto dv = sol.slopes();
  const auto w = sol.defect();
  for (std::size_t j = 0; j < s.size(); ++j) {
    out << format_double(s[j]) << ',' << format_double(v[j]) << ',' << format_double(dv[j]) << ','
        << format_double(w[j]) << '\n';
  }
  return out.str();
}

radial::RadialSolution deserialize_solution(const std::string& text) {
  std::istringstream in(text);
  std::map<std::string, std::string> header;
  std::string line;
  bool saw_columns = false;
  std::vector<double> s, v, dv, w;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) header[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
      continue;
    }
    if (!saw_columns) {
      if (trim(line) != "s,v,dv,defect") throw DomainError("cache: unexpected column line");
      saw_columns = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw DomainError("cache: malformed row");
    s.push_back(parse_number(cells[0], "cache row"));
    v.push_back(parse_number(cells[1], "cache row"));
    dv.push_back(parse_number(cells[2], "cache row"));
    w.push_back(parse_number(cells[3], "cache row"));
  }
  auto need = [&header](const std::string& k) -> const std::string& {
    const auto it = header.find(k);
    if (it == header.end()) throw DomainError("cache: missing header field '" + k + "'");
    return it->second;
  };
  if (parse_integer(need("format"), "format") != kCacheFormat) {
    throw DomainError("cache: unsupported format");
  }
  const auto nodes = static_cast<std::size_t>(parse_integer(need("nodes"), "nodes"));
  if (s.size() != nodes) throw DomainError("cache: truncated file");
  radial::ProblemParams params{parse_integer(need("N"), "N"), parse_number(need("rho"), "rho"),
                               parse_number(need("R"), "R")};
  return radial::RadialSolution(params, parse_number(need("center_defect"), "center_defect"),
                                std::move(s), std::move(v), std::move(dv), std::move(w),
                                static_cast<std::size_t>(parse_integer(need("zero_index"), "zero_index")));
}

std::string render_csv(const Table& table) {
  std::ostringstream out;
  if (!table.title.empty()) out << "# " << table.title << "\n";
  out << "# version = " << version_tag() << "\n";
  for (const auto& [k, v] : table.meta) out << "# " << k << " = " << v << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << "\n";
  }
  return out.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp" + std::to_string(counter.fetch_add(1)) + "_" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw DomainError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series) {
  constexpr double W = 720, H = 440, L = 70, Rm = 150, T = 40, B = 50;
  double x0 = std::numeric_limits<double>::max(), x1 = std::numeric_limits<double>::lowest();
  double y0 = x0, y1 = x1;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      x0 = std::min(x0, s.x[k]);
      x1 = std::max(x1, s.x[k]);
      y0 = std::min(y0, s.y[k]);
      y1 = std::max(y1, s.y[k]);
    }
  }
  if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - Rm); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - Rm << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  if (y0 < 0.0 && y1 > 0.0) {
    out << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << W - Rm << "\" y2=\"" << py(0)
        << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4;
    const double yv = y0 + (y1 - y0) * k / 4;
    out << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
        << short_number(xv) << "</text>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
        << short_number(yv) << "</text>\n";
  }
  out << "<text x=\"" << (L + W - Rm) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
      << xml_escape(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (T + H - B) / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % std::size(colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    const auto& ser = series[s];
    for (std::size_t k = 0; k < ser.x.size() && k < ser.y.size(); ++k) {
      if (!std::isfinite(ser.x[k]) || !std::isfinite(ser.y[k])) continue;
      out << short_number(px(ser.x[k])) << ',' << short_number(py(ser.y[k])) << ' ';
    }
    out << "\"/>\n";
    const double ly = T + 18.0 * static_cast<double>(s);
    out << "<line x1=\"" << W - Rm + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - Rm + 36 << "\" y2=\""
        << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << W - Rm + 42 << "\" y=\"" << ly + 4 << "\">" << xml_escape(ser.label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace overdet::io
