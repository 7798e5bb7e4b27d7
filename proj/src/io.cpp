#include "vstate/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

#include "vstate/error.hpp"
#include "vstate/riemann_hilbert.hpp"

namespace vstate {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::config, what); }

// ---- config ------------------------------------------------------------

double as_double(const toml::node& n, const std::string& key) {
  if (auto v = n.as_floating_point()) return v->get();
  if (auto v = n.as_integer()) return static_cast<double>(v->get());
  config_error("'" + key + "' must be a number");
}

int as_int(const toml::node& n, const std::string& key) {
  if (auto v = n.as_integer()) {
    const auto x = v->get();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      config_error("'" + key + "' is out of range");
    }
    return static_cast<int>(x);
  }
  config_error("'" + key + "' must be an integer");
}

std::string as_string(const toml::node& n, const std::string& key) {
  if (auto v = n.as_string()) return v->get();
  config_error("'" + key + "' must be a string");
}

const toml::table& as_table(const toml::node& n, const std::string& key) {
  if (auto t = n.as_table()) return *t;
  config_error("'" + key + "' must be a table");
}

void apply_override(toml::table& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) config_error("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  toml::table parsed;
  try {
    parsed = toml::parse("v = " + value);
  } catch (const toml::parse_error&) {
    parsed.insert_or_assign("v", value);  // bare words are taken as strings
  }

  toml::table* target = &root;
  std::string rest = key;
  for (auto dot = rest.find('.'); dot != std::string::npos; dot = rest.find('.')) {
    const std::string part = rest.substr(0, dot);
    rest = rest.substr(dot + 1);
    auto* node = target->get(part);
    if (node == nullptr) {
      target->insert_or_assign(part, toml::table{});
      node = target->get(part);
    }
    target = node->as_table();
    if (target == nullptr) config_error("override '" + key + "': '" + part + "' is not a table");
  }
  parsed.get("v")->visit([&](auto&& v) { target->insert_or_assign(rest, v); });
}

template <class Fn>
void each_key(const toml::table& t, const std::string& scope, const std::set<std::string>& known, Fn&& fn) {
  for (auto&& [k, node] : t) {
    const std::string key(k.str());
    if (!known.contains(key)) config_error("unknown config key '" + scope + key + "'");
    fn(key, node);
  }
}

ContinuationConfig config_from_table(const toml::table& root) {
  ContinuationConfig c;
  auto& r = c.run;
  const std::set<std::string> top{"pair_kind", "l", "N", "M", "eps_seed", "seed_points", "ds_min", "ds_init",
                                  "ds_max", "ds_grow", "fast_iterations", "floor_refinements", "eps_max",
                                  "truncation_tol", "max_modes", "quadrature_tol", "max_nodes", "max_steps", "floors", "newton", "local", "output"};
  each_key(root, "", top, [&](const std::string& key, const toml::node& n) {
    if (key == "pair_kind") {
      try {
        r.kind = pair_kind_from_string(as_string(n, key));
      } catch (const Error& e) {
        config_error(e.what());
      }
    } else if (key == "l") r.l = as_double(n, key);
    else if (key == "N") r.n_modes = as_int(n, key);
    else if (key == "M") r.M = as_int(n, key);
    else if (key == "eps_seed") r.eps_seed = as_double(n, key);
    else if (key == "seed_points") r.seed_points = as_int(n, key);
    else if (key == "ds_min") r.ds_min = as_double(n, key);
    else if (key == "ds_init") r.ds_init = as_double(n, key);
    else if (key == "ds_max") r.ds_max = as_double(n, key);
    else if (key == "ds_grow") r.ds_grow = as_double(n, key);
    else if (key == "fast_iterations") r.fast_iterations = as_int(n, key);
    else if (key == "floor_refinements") r.floor_refinements = as_int(n, key);
    else if (key == "eps_max") r.eps_max = as_double(n, key);
    else if (key == "truncation_tol") r.truncation_tol = as_double(n, key);
    else if (key == "max_modes") r.max_modes = as_int(n, key);
    else if (key == "quadrature_tol") r.quadrature_tol = as_double(n, key);
    else if (key == "max_nodes") r.max_nodes = as_int(n, key);
    else if (key == "max_steps") r.max_steps = as_int(n, key);
    else if (key == "floors") {
      const std::set<std::string> names(MonitorVector::names.begin(), MonitorVector::names.end());
      each_key(as_table(n, key), "floors.", names, [&](const std::string& k, const toml::node& v) {
        const auto it = std::find(MonitorVector::names.begin(), MonitorVector::names.end(), k);
        r.floors[it - MonitorVector::names.begin()] = as_double(v, "floors." + k);
      });
    } else if (key == "newton") {
      auto& s = r.newton;
      each_key(as_table(n, key), "newton.",
               {"tol_residual", "max_iter", "fd_step", "damping", "max_backtracks", "min_rcond"},
               [&](const std::string& k, const toml::node& v) {
                 const std::string full = "newton." + k;
                 if (k == "tol_residual") s.tol_residual = as_double(v, full);
                 else if (k == "max_iter") s.max_iter = as_int(v, full);
                 else if (k == "fd_step") s.fd_step = as_double(v, full);
                 else if (k == "damping") s.damping = as_double(v, full);
                 else if (k == "max_backtracks") s.max_backtracks = as_int(v, full);
                 else s.min_rcond = as_double(v, full);
               });
    } else if (key == "local") {
      each_key(as_table(n, key), "local.", {"eps"}, [&](const std::string&, const toml::node& v) {
        const auto* arr = v.as_array();
        if (arr == nullptr) config_error("'local.eps' must be an array");
        c.local_eps.clear();
        for (auto&& x : *arr) c.local_eps.push_back(as_double(x, "local.eps"));
      });
    } else if (key == "output") {
      each_key(as_table(n, key), "output.", {"dir", "prefix"}, [&](const std::string& k, const toml::node& v) {
        if (k == "dir") c.out_dir = as_string(v, "output.dir");
        else c.prefix = as_string(v, "output.prefix");
      });
    }
  });
  validate(c);
  return c;
}

// ---- json ----------------------------------------------------------------

ojson num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double get_num(const ojson& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorKind::io, std::string("field '") + key + "' is not a number");
}

const char* speed_key(PairKind kind) { return kind == PairKind::corotating ? "omega" : "V"; }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

int exit_for(const Error& e) {
  return e.kind() == ErrorKind::config ? exit_config : exit_solver;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

fs::path output_path(const ContinuationConfig& c, const std::string& suffix) {
  return c.out_dir / (c.prefix + suffix);
}

void write_summary(const fs::path& path, const std::string& command, const ContinuationConfig& c,
                   const std::vector<BranchRow>& rows, const std::string& termination, const std::string& monitor,
                   const std::string& message, int code) {
  ojson j;
  j["command"] = command;
  j["pair_kind"] = std::string(to_string(c.run.kind));
  j["l"] = c.run.l;
  j["N"] = c.run.n_modes;
  j["M"] = c.run.M;
  j["points"] = rows.size();
  j["termination"] = termination;
  j["monitor"] = monitor;
  j["message"] = message;
  j["exit_code"] = code;
  if (!rows.empty()) {
    const auto& last = rows.back();
    j["final_eps"] = last.eps;
    j[std::string("final_") + speed_key(last.kind)] = last.speed;
    ojson m = ojson::object();
    for (std::size_t i = 0; i < 6; ++i) m[std::string(MonitorVector::names[i])] = num(last.monitors[i]);
    j["final_monitors"] = m;
  }
  write_text(path, j.dump(2) + "\n");
}

// ---- svg -----------------------------------------------------------------

struct Box {
  double x0, x1, y0, y1;
};

std::string polyline(const std::vector<std::pair<double, double>>& pts, const std::string& style, bool closed) {
  std::ostringstream os;
  os << (closed ? "<polygon" : "<polyline") << " fill=\"none\" " << style << " points=\"";
  char buf[64];
  for (const auto& [x, y] : pts) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f ", x, y);
    os << buf;
  }
  os << "\"/>\n";
  return os.str();
}

}  // namespace

// ---- config API ----------------------------------------------------------

void validate(const ContinuationConfig& c) {
  c.run.validate();
  if (c.local_eps.empty()) config_error("local.eps must not be empty");
  if (c.local_eps.front() > 0.05) config_error("local.eps must start at or below 0.05 (units of l)");
  for (std::size_t i = 0; i < c.local_eps.size(); ++i) {
    if (!(c.local_eps[i] > 0.0 && c.local_eps[i] < 1.0)) config_error("local.eps entries must lie in (0, 1)");
    if (i > 0 && !(c.local_eps[i] > c.local_eps[i - 1])) config_error("local.eps must increase");
  }
  if (c.prefix.empty()) config_error("output.prefix must not be empty");
}

ContinuationConfig config_from_toml(const std::string& text, const std::vector<std::string>& overrides) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    config_error(std::string("config parse error: ") + std::string(e.description()));
  }
  for (const auto& o : overrides) apply_override(root, o);
  return config_from_table(root);
}

ContinuationConfig load_config(const std::optional<fs::path>& file, const std::vector<std::string>& overrides) {
  std::string text;
  if (file) {
    std::ifstream in(*file, std::ios::binary);
    if (!in) config_error("cannot read config " + file->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return config_from_toml(text, overrides);
}

// ---- rows ----------------------------------------------------------------

BranchRow row_from_point(const SolutionPoint& p, double s) {
  BranchRow r;
  r.l = p.boundary.l();
  r.kind = p.boundary.kind();
  r.M = p.M;
  r.s = s;
  r.eps = p.boundary.eps();
  r.speed = p.speed.value;
  r.residual = p.residual_norm;
  r.monitors = p.diagnostics.monitors.as_array();
  r.winding = p.diagnostics.winding_A;
  r.koebe_sup = p.diagnostics.koebe_sup;
  r.truncation = p.diagnostics.truncation;
  r.coeffs.assign(p.boundary.coeffs().begin(), p.boundary.coeffs().end());
  r.iterations = p.iterations;
  r.condition = p.jacobian_condition;
  return r;
}

BranchRow row_from_entry(const BranchEntry& e) {
  BranchRow r = row_from_point(e.point, e.s);
  r.ds = e.ds;
  r.ds_next = e.ds_next;
  r.step = e.step;
  r.refinements = e.refinements;
  r.seed = e.seed;
  return r;
}

FourierBoundary boundary_of(const BranchRow& r) { return FourierBoundary(r.l, r.eps, r.kind, r.coeffs); }

BranchEntry entry_from_row(const BranchRow& r) {
  auto p = finalize_point(boundary_of(r), r.M, r.iterations, r.condition, {});
  return BranchEntry{std::move(p), r.s, r.ds, r.ds_next, r.step, r.refinements, r.seed};
}

std::string to_json_line(const BranchRow& r) {
  ojson j;
  j["l"] = r.l;
  j["kind"] = std::string(to_string(r.kind));
  j["M"] = r.M;
  j["N"] = r.coeffs.size();
  j["s"] = r.s;
  j["eps"] = r.eps;
  j[speed_key(r.kind)] = r.speed;
  j["residual"] = r.residual;
  ojson m = ojson::object();
  for (std::size_t i = 0; i < 6; ++i) m[std::string(MonitorVector::names[i])] = num(r.monitors[i]);
  j["monitors"] = m;
  j["winding"] = r.winding;
  j["koebe_sup"] = r.koebe_sup;
  j["truncation"] = r.truncation;
  j["ds"] = r.ds;
  j["ds_next"] = r.ds_next;
  j["step"] = r.step;
  j["refinements"] = r.refinements;
  j["seed"] = r.seed;
  j["iterations"] = r.iterations;
  j["condition"] = num(r.condition);
  j["coeffs"] = r.coeffs;
  return j.dump();
}

BranchRow row_from_json_line(const std::string& line) {
  try {
    const auto j = ojson::parse(line);
    BranchRow r;
    r.l = get_num(j, "l");
    r.kind = pair_kind_from_string(j.at("kind").get<std::string>());
    r.M = j.at("M").get<int>();
    r.s = get_num(j, "s");
    r.eps = get_num(j, "eps");
    r.speed = get_num(j, speed_key(r.kind));
    r.residual = get_num(j, "residual");
    const auto& m = j.at("monitors");
    for (std::size_t i = 0; i < 6; ++i) r.monitors[i] = get_num(m, std::string(MonitorVector::names[i]).c_str());
    r.winding = j.at("winding").get<int>();
    r.koebe_sup = get_num(j, "koebe_sup");
    r.truncation = get_num(j, "truncation");
    r.ds = get_num(j, "ds");
    r.ds_next = get_num(j, "ds_next");
    r.step = j.at("step").get<int>();
    r.refinements = j.at("refinements").get<int>();
    r.seed = j.at("seed").get<bool>();
    r.iterations = j.at("iterations").get<int>();
    r.condition = get_num(j, "condition");
    r.coeffs = j.at("coeffs").get<std::vector<double>>();
    if (static_cast<int>(r.coeffs.size()) != j.at("N").get<int>()) {
      throw Error(ErrorKind::io, "coefficient count does not match N");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::io, std::string("malformed branch row: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    throw Error(ErrorKind::io, std::string("malformed branch row: ") + e.what());
  }
}

void write_jsonl(const fs::path& path, const std::vector<BranchRow>& rows) {
  std::string text;
  for (const auto& r : rows) text += to_json_line(r) + "\n";
  write_text(path, text);
}

std::vector<BranchRow> read_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::vector<BranchRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(row_from_json_line(line));
  }
  return rows;
}

void write_csv(const fs::path& path, const std::vector<BranchRow>& rows) {
  std::ostringstream os;
  const char* sk = rows.empty() ? "speed" : speed_key(rows.front().kind);
  os << "step,s,eps," << sk << ",residual";
  for (auto n : MonitorVector::names) os << ',' << n;
  os << ",winding,koebe_sup,truncation,N,M\n";
  for (const auto& r : rows) {
    os << r.step << ',' << fmt17(r.s) << ',' << fmt17(r.eps) << ',' << fmt17(r.speed) << ',' << fmt17(r.residual);
    for (double m : r.monitors) os << ',' << fmt17(m);
    os << ',' << r.winding << ',' << fmt17(r.koebe_sup) << ',' << fmt17(r.truncation) << ',' << r.coeffs.size()
       << ',' << r.M << '\n';
  }
  write_text(path, os.str());
}

void write_error_record(const fs::path& path, std::string_view kind, const std::string& message) {
  ojson j;
  j["error"] = std::string(kind);
  j["message"] = message;
  write_text(path, j.dump(2) + "\n");
}

// ---- plots ---------------------------------------------------------------

std::string contour_svg(const BranchRow& r, int samples) {
  const auto b = boundary_of(r);
  int M = std::max(samples, 4 * (b.n_modes() + 1));
  M += M % 2;
  const auto phi = eval_phi(b, M);
  std::vector<cplx> z(M);
  double reach = 0.0;
  for (int j = 0; j < M; ++j) {
    z[j] = b.eps() * phi.values[j] + b.l();
    reach = std::max(reach, std::abs(z[j]));
  }
  const double half = 1.1 * std::max(reach, b.l());
  const double size = 600.0;
  auto map = [&](cplx p) {
    return std::pair<double, double>{(p.real() + half) / (2 * half) * size, (half - p.imag()) / (2 * half) * size};
  };
  std::vector<std::pair<double, double>> right, left;
  for (const auto& p : z) {
    right.push_back(map(p));
    left.push_back(map(-p));
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"640\" viewBox=\"0 0 600 640\">\n";
  os << "<rect width=\"600\" height=\"640\" fill=\"white\"/>\n";
  os << "<line x1=\"0\" y1=\"300\" x2=\"600\" y2=\"300\" stroke=\"#ccc\"/>\n";
  os << "<line x1=\"300\" y1=\"0\" x2=\"300\" y2=\"600\" stroke=\"#ccc\"/>\n";
  os << polyline(right, "stroke=\"#b2182b\" stroke-width=\"1.5\"", true);
  os << polyline(left, r.kind == PairKind::corotating ? "stroke=\"#b2182b\" stroke-width=\"1.5\""
                                                      : "stroke=\"#2166ac\" stroke-width=\"1.5\"",
                 true);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s  eps = %.6g  %s = %.10g  step %d", std::string(to_string(r.kind)).c_str(),
                r.eps, speed_key(r.kind), r.speed, r.step);
  os << "<text x=\"10\" y=\"625\" font-family=\"monospace\" font-size=\"13\">" << buf << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string monitor_svg(const std::vector<BranchRow>& rows) {
  const double W = 800, H = 480, left = 60, right = 170, top = 20, bottom = 50;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"480\" viewBox=\"0 0 800 480\">\n";
  os << "<rect width=\"800\" height=\"480\" fill=\"white\"/>\n";
  if (rows.empty()) {
    os << "</svg>\n";
    return os.str();
  }
  double eps_seed = rows.front().eps;
  for (const auto& r : rows) {
    if (r.seed) eps_seed = std::max(eps_seed, r.eps);
  }
  ContinuationSettings s;
  s.l = rows.front().l;
  s.eps_seed = eps_seed;

  const double smin = rows.front().s;
  const double smax = std::max(rows.back().s, smin + 1e-12);
  const double lo = -3.0, hi = 2.0;  // log10 range
  auto px = [&](double sv) { return left + (sv - smin) / (smax - smin) * (W - left - right); };
  auto py = [&](double v) {
    const double lv = std::clamp(std::log10(std::max(v, 1e-300)), lo, hi);
    return top + (hi - lv) / (hi - lo) * (H - top - bottom);
  };
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
     << H - top - bottom << "\" fill=\"none\" stroke=\"#888\"/>\n";
  for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); ++e) {
    const double y = py(std::pow(10.0, e));
    os << "<text x=\"8\" y=\"" << y + 4 << "\" font-family=\"monospace\" font-size=\"11\">1e" << e << "</text>\n";
  }
  const double yf = py(0.05);
  os << "<line x1=\"" << left << "\" y1=\"" << yf << "\" x2=\"" << W - right << "\" y2=\"" << yf
     << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  static const char* colors[6] = {"#d73027", "#fc8d59", "#91bfdb", "#4575b4", "#1a9850", "#762a83"};
  for (int m = 0; m < 6; ++m) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) {
      MonitorVector mv{r.monitors[0], r.monitors[1], r.monitors[2], r.monitors[3], r.monitors[4], r.monitors[5]};
      const auto scaled = scaled_monitors(mv, s);
      pts.emplace_back(px(r.s), py(scaled[m]));
    }
    os << polyline(pts, std::string("stroke=\"") + colors[m] + "\" stroke-width=\"1.5\"", false);
    os << "<text x=\"" << W - right + 10 << "\" y=\"" << top + 16 * (m + 1) << "\" fill=\"" << colors[m]
       << "\" font-family=\"monospace\" font-size=\"12\">" << MonitorVector::names[m] << "</text>\n";
  }
  os << "<text x=\"" << (W - right) / 2 << "\" y=\"" << H - 15
     << "\" font-family=\"monospace\" font-size=\"12\">arclength s</text>\n";
  os << "</svg>\n";
  return os.str();
}

// ---- commands ------------------------------------------------------------

int cmd_local(const ContinuationConfig& c, std::ostream& log) {
  std::vector<BranchRow> rows;
  int code = exit_ok;
  std::string message = "ok";
  try {
    validate(c);
    auto guess = FourierBoundary::trivial(c.run.l, c.local_eps.front() * c.run.l, c.run.kind, c.run.n_modes);
    double s = 0.0;
    for (std::size_t i = 0; i < c.local_eps.size(); ++i) {
      const double eps = c.local_eps[i] * c.run.l;
      SolutionPoint p = [&] {
        try {
          return newton_solve(guess.with_eps(eps), c.run.newton, c.run.M);
        } catch (const Error& e) {
          throw Error(e.kind(), "solve failed at eps = " + fmt17(eps) + ": " + e.what());
        }
      }();
      if (i > 0) s += (state_vector(p.boundary) - state_vector(guess)).norm();
      auto row = row_from_point(p, s);
      row.seed = true;
      rows.push_back(row);
      log << "eps " << fmt17(eps) << "  " << speed_key(c.run.kind) << ' ' << fmt17(p.speed.value) << "  residual "
          << p.residual_norm << "  iterations " << p.iterations << '\n';
      guess = p.boundary;
    }
  } catch (const Error& e) {
    code = exit_for(e);
    message = e.what();
    log << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    try {
      write_error_record(output_path(c, ".error.json"), to_string(e.kind()), e.what());
    } catch (const Error&) {
    }
    if (code == exit_config) return code;
  }
  write_jsonl(output_path(c, ".jsonl"), rows);
  write_csv(output_path(c, ".csv"), rows);
  write_summary(output_path(c, ".summary.json"), "local", c, rows, code == exit_ok ? "complete" : "solver_failure",
                "", message, code);
  return code;
}

int cmd_continue(const ContinuationConfig& c, const std::optional<fs::path>& seed_from, std::ostream& log) {
  std::vector<BranchRow> rows;
  std::vector<BranchEntry> resume;
  try {
    validate(c);
    if (seed_from) {
      rows = read_jsonl(*seed_from);
      if (rows.size() < 2) config_error("--seed-from needs at least two branch rows");
      for (const auto& r : rows) {
        if (r.l != c.run.l || r.kind != c.run.kind || r.M < c.run.M ||
            static_cast<int>(r.coeffs.size()) < c.run.n_modes) {
          config_error("--seed-from rows do not match the configured l, pair_kind, M or N");
        }
      }
      resume.push_back(entry_from_row(rows[rows.size() - 2]));
      resume.push_back(entry_from_row(rows.back()));
    }
  } catch (const Error& e) {
    log << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    try {
      write_error_record(output_path(c, ".error.json"), to_string(e.kind()), e.what());
    } catch (const Error&) {
    }
    return e.kind() == ErrorKind::config || e.kind() == ErrorKind::io ? exit_config : exit_solver;
  }

  const auto jsonl = output_path(c, ".jsonl");
  fs::create_directories(c.out_dir);
  std::ofstream out(jsonl, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + jsonl.string());
  for (const auto& r : rows) out << to_json_line(r) << '\n';
  out.flush();

  auto observer = [&](const BranchEntry& e) {
    rows.push_back(row_from_entry(e));
    out << to_json_line(rows.back()) << '\n';
    out.flush();
    log << (e.seed ? "seed" : "step") << ' ' << e.step << "  s " << fmt17(e.s) << "  eps " << fmt17(e.point.boundary.eps())
        << "  " << speed_key(c.run.kind) << ' ' << fmt17(e.point.speed.value) << "  separation "
        << e.point.diagnostics.monitors.separation << "  minA " << e.point.diagnostics.monitors.minA << '\n';
  };

  int code = exit_ok;
  std::string termination, monitor, message;
  try {
    const auto rec = run_continuation(c.run, resume, observer);
    termination = std::string(to_string(rec.termination));
    monitor = rec.monitor;
    message = rec.message;
    if (rec.termination == Termination::monitor_floor) code = exit_floor;
    if (rec.termination == Termination::solver_failure) code = exit_solver;
  } catch (const Error& e) {
    code = exit_for(e);
    termination = "solver_failure";
    message = e.what();
    write_error_record(output_path(c, ".error.json"), to_string(e.kind()), e.what());
  }
  out.close();
  log << "termination " << termination << (monitor.empty() ? "" : " (" + monitor + ")") << ": " << message << '\n';
  write_csv(output_path(c, ".csv"), rows);
  write_summary(output_path(c, ".summary.json"), "continue", c, rows, termination, monitor, message, code);
  return code;
}

int cmd_diagnose(const fs::path& branch, const std::optional<fs::path>& report, std::ostream& log) {
  std::vector<BranchRow> rows;
  try {
    rows = read_jsonl(branch);
  } catch (const Error& e) {
    log << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_config;
  }
  ojson all = ojson::array();
  bool ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    ojson j;
    j["index"] = i;
    j["eps"] = r.eps;
    try {
      const auto b = boundary_of(r);
      const auto ev = evaluate_residual(b, r.M);
      const auto d = compute_diagnostics(b, ev.speed, r.M);
      j[speed_key(r.kind)] = ev.speed.value;
      j["residual"] = ev.series.sup_norm();
      j["residual_recheck"] = d.residual_recheck;
      j["b1_monitor"] = d.b1_monitor;
      j["im_A_dphi"] = d.im_A_dphi;
      j["winding_A"] = d.winding_A;
      j["koebe_sup"] = d.koebe_sup;
      j["polar_margin"] = d.polar_margin;
      j["symmetry_ok"] = d.symmetry_ok;
      j["omega_bounds_ok"] = d.omega_bounds_ok;
      j["speed_excess"] = d.speed_excess;
      ojson m = ojson::object();
      const auto mv = d.monitors.as_array();
      for (std::size_t k = 0; k < 6; ++k) m[std::string(MonitorVector::names[k])] = num(mv[k]);
      j["monitors"] = m;
      if (b.eps() > 0.0) {
        const auto rh = rh_cross_check(b, ev.speed, r.M);
        j["rh_deviation"] = rh.max_deviation;
        j["rh_koebe_sup"] = rh.koebe_sup;
        j["steadiness"] = steadiness_residual(b, ev.speed, r.M);
      }
      const auto bad = admissibility_failure(d);
      j["admissible"] = !bad.has_value();
      if (bad) {
        j["failure"] = *bad;
        ok = false;
      }
      log << "row " << i << "  eps " << fmt17(r.eps) << "  residual " << ev.series.sup_norm() << "  winding "
          << d.winding_A << "  koebe " << d.koebe_sup << (bad ? "  NOT admissible: " + *bad : "") << '\n';
    } catch (const Error& e) {
      j["admissible"] = false;
      j["failure"] = e.what();
      ok = false;
      log << "row " << i << "  error: " << e.what() << '\n';
    }
    all.push_back(j);
  }
  if (report) write_text(*report, all.dump(2) + "\n");
  return ok ? exit_ok : exit_solver;
}

int cmd_plot(const fs::path& branch, const std::vector<int>& indices, const fs::path& out_dir, std::ostream& log) {
  std::vector<BranchRow> rows;
  try {
    rows = read_jsonl(branch);
    for (int i : indices) {
      const int n = static_cast<int>(rows.size());
      if (i >= n || i < -n) config_error("plot index " + std::to_string(i) + " out of range");
    }
  } catch (const Error& e) {
    log << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_config;
  }
  const auto stem = branch.stem().string();
  for (int i : indices) {
    const int k = i < 0 ? static_cast<int>(rows.size()) + i : i;
    const auto path = out_dir / (stem + ".contour_" + std::to_string(k) + ".svg");
    write_text(path, contour_svg(rows[k]));
    log << "wrote " << path.string() << '\n';
  }
  const auto path = out_dir / (stem + ".monitors.svg");
  write_text(path, monitor_svg(rows));
  log << "wrote " << path.string() << '\n';
  return exit_ok;
}

}  // namespace vstate
