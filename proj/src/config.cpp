#include "pff/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace pff {

std::string_view to_string(ProblemKind problem) {
  switch (problem) {
    case ProblemKind::tensile: return "tensile";
    case ProblemKind::shear: return "shear";
    case ProblemKind::lshape: return "lshape";
    case ProblemKind::bar1d: return "bar1d";
  }
  return "?";
}

ProblemKind parse_problem(std::string_view text) {
  if (text == "tensile") return ProblemKind::tensile;
  if (text == "shear") return ProblemKind::shear;
  if (text == "lshape") return ProblemKind::lshape;
  if (text == "bar1d") return ProblemKind::bar1d;
  throw std::invalid_argument("unknown problem '" + std::string(text) + "'");
}

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         message),
      line_(line) {}

RunConfig default_config(ProblemKind problem) {
  RunConfig c;
  c.problem = problem;
  switch (problem) {
    case ProblemKind::tensile:
      c.rate = 3e-5;
      c.schedule = {{170.0, 170.0}, {1.0, 220.0}};
      break;
    case ProblemKind::shear:
      c.rate = 3e-5;
      c.schedule = {{250.0, 250.0}, {1.0, 380.0}};
      break;
    case ProblemKind::lshape:
      c.material.mu = 1.095e4;
      c.material.lambda = 6.161e3;
      c.material.length_l = 10.0;
      c.material.eta = 1e-6;
      c.material.g_c = 0.095;
      c.rate = 1.0;
      c.schedule = {{0.01, 0.2}, {0.001, 0.6}};
      break;
    case ProblemKind::bar1d:
      c.rate = 0.01;
      c.schedule = {{1.0, 260.0}};
      break;
  }
  return c;
}

std::vector<double> RunConfig::step_times() const {
  std::vector<double> times;
  double start = 0.0;
  for (const auto& seg : schedule) {
    const auto n = static_cast<long>(std::llround((seg.t_end - start) / seg.dt));
    for (long j = 1; j < n; ++j) times.push_back(start + static_cast<double>(j) * seg.dt);
    times.push_back(seg.t_end);
    start = seg.t_end;
  }
  return times;
}

void RunConfig::validate() const {
  if (schedule.empty()) throw std::invalid_argument("loading schedule is empty");
  double start = 0.0;
  for (const auto& seg : schedule) {
    if (!(seg.dt > 0.0)) throw std::invalid_argument("step size must be positive");
    if (!(seg.t_end > start)) throw std::invalid_argument("schedule times must increase strictly");
    const double n = (seg.t_end - start) / seg.dt;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
      throw std::invalid_argument("step size " + std::to_string(seg.dt) +
                                  " does not divide the segment ending at " +
                                  std::to_string(seg.t_end));
    }
    start = seg.t_end;
  }
  if (!(rate != 0.0 && std::isfinite(rate))) throw std::invalid_argument("rate must be non-zero");
  if (problem == ProblemKind::bar1d) {
    bar.validate();
    if (bar_elements < 2) throw std::invalid_argument("bar needs at least 2 elements");
  } else {
    material.validate();
  }
  if (problem == ProblemKind::tensile || problem == ProblemKind::shear) {
    if (nx < 2 || ny < 2 || nx % 2 != 0 || ny % 2 != 0) {
      throw std::invalid_argument("nx and ny must be even and at least 2");
    }
  }
  if (problem == ProblemKind::lshape && !(lshape_h > 0.0)) {
    throw std::invalid_argument("h must be positive");
  }
  if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be non-negative");
  solver.validate();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

int to_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw std::invalid_argument("expected a boolean, got '" + std::string(s) + "'");
}

std::vector<LoadSegment> to_schedule(std::string_view s) {
  std::vector<LoadSegment> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const std::string_view item = trim(s.substr(0, comma));
    s = comma == std::string_view::npos ? std::string_view() : s.substr(comma + 1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("schedule entries are written dt:t_end, got '" +
                                  std::string(item) + "'");
    }
    out.push_back({to_double(item.substr(0, colon)), to_double(item.substr(colon + 1))});
  }
  return out;
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"problem.type", [](RunConfig&, std::string_view) {}},
      {"problem.scheme", [](RunConfig& c, std::string_view v) { c.scheme = parse_scheme(v); }},
      {"problem.at_model",
       [](RunConfig& c, std::string_view v) {
         if (v == "AT1") {
           c.material.at_model = AtModel::AT1;
         } else if (v == "AT2") {
           c.material.at_model = AtModel::AT2;
         } else {
           throw std::invalid_argument("at_model must be AT1 or AT2");
         }
       }},
      {"material.mu", [](RunConfig& c, std::string_view v) { c.material.mu = to_double(v); }},
      {"material.lambda",
       [](RunConfig& c, std::string_view v) { c.material.lambda = to_double(v); }},
      {"material.young", [](RunConfig& c, std::string_view v) { c.bar.young = to_double(v); }},
      {"material.g_c",
       [](RunConfig& c, std::string_view v) { c.material.g_c = c.bar.g_c = to_double(v); }},
      {"material.length_l",
       [](RunConfig& c, std::string_view v) {
         c.material.length_l = c.bar.length_l = to_double(v);
       }},
      {"material.eta",
       [](RunConfig& c, std::string_view v) { c.material.eta = c.bar.eta = to_double(v); }},
      {"material.tol_ir",
       [](RunConfig& c, std::string_view v) { c.material.tol_ir = c.bar.tol_ir = to_double(v); }},
      {"mesh.nx", [](RunConfig& c, std::string_view v) { c.nx = to_int(v); }},
      {"mesh.ny", [](RunConfig& c, std::string_view v) { c.ny = to_int(v); }},
      {"mesh.h", [](RunConfig& c, std::string_view v) { c.lshape_h = to_double(v); }},
      {"mesh.elements", [](RunConfig& c, std::string_view v) { c.bar_elements = to_int(v); }},
      {"mesh.widen_length",
       [](RunConfig& c, std::string_view v) { c.widen_length = to_bool(v); }},
      {"loading.rate", [](RunConfig& c, std::string_view v) { c.rate = to_double(v); }},
      {"loading.steps", [](RunConfig& c, std::string_view v) { c.schedule = to_schedule(v); }},
      {"solver.tol_nr", [](RunConfig& c, std::string_view v) { c.solver.tol_nr = to_double(v); }},
      {"solver.tol_st", [](RunConfig& c, std::string_view v) { c.solver.tol_st = to_double(v); }},
      {"solver.max_nr", [](RunConfig& c, std::string_view v) { c.solver.max_nr = to_int(v); }},
      {"solver.max_stag",
       [](RunConfig& c, std::string_view v) { c.solver.max_stag = to_int(v); }},
      {"solver.d_cap", [](RunConfig& c, std::string_view v) { c.solver.d_cap = to_double(v); }},
      {"solver.linear",
       [](RunConfig& c, std::string_view v) {
         if (v == "direct") {
           c.solver.linear = LinearSolverKind::direct;
         } else if (v == "cg") {
           c.solver.linear = LinearSolverKind::cg;
         } else {
           throw std::invalid_argument("linear must be direct or cg");
         }
       }},
      {"solver.exec",
       [](RunConfig& c, std::string_view v) {
         if (v == "serial") {
           c.solver.exec = Exec::serial;
         } else if (v == "parallel") {
           c.solver.exec = Exec::parallel;
         } else {
           throw std::invalid_argument("exec must be serial or parallel");
         }
       }},
      {"output.directory", [](RunConfig& c, std::string_view v) { c.output_dir = v; }},
      {"output.snapshot_every",
       [](RunConfig& c, std::string_view v) { c.snapshot_every = to_int(v); }},
      {"output.vtk", [](RunConfig& c, std::string_view v) { c.write_vtk = to_bool(v); }},
      {"output.profiles",
       [](RunConfig& c, std::string_view v) { c.write_profiles = to_bool(v); }},
  };
  return table;
}

bool applies_to(const std::string& key, ProblemKind problem) {
  const bool bar = problem == ProblemKind::bar1d;
  if (key == "material.young" || key == "mesh.elements" || key == "output.profiles") return bar;
  if (key == "material.mu" || key == "material.lambda" || key == "problem.at_model") return !bar;
  if (key == "mesh.nx" || key == "mesh.ny") {
    return problem == ProblemKind::tensile || problem == ProblemKind::shear;
  }
  if (key == "mesh.h") return problem == ProblemKind::lshape;
  if (key == "mesh.widen_length") return !bar;
  return true;
}

}  // namespace

RunConfig parse_config_text(std::string_view text, const std::string& source) {
  std::vector<Entry> entries;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  static const std::vector<std::string> kSections{"problem", "material", "mesh",
                                                  "loading", "solver",   "output"};
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) {
      line = line.substr(0, c);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
        throw ConfigError(source, line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, line_no, "expected key = value");
    if (section.empty()) throw ConfigError(source, line_no, "key outside of a section");
    Entry e{section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
            line_no};
    if (e.value.empty()) throw ConfigError(source, line_no, "empty value for '" + e.key + "'");
    for (const auto& prior : entries) {
      if (prior.section == e.section && prior.key == e.key) {
        throw ConfigError(source, line_no,
                          "duplicate key '" + e.key + "' (first set on line " +
                              std::to_string(prior.line) + ")");
      }
    }
    entries.push_back(std::move(e));
  }

  ProblemKind problem = ProblemKind::tensile;
  for (const auto& e : entries) {
    if (e.section == "problem" && e.key == "type") {
      try {
        problem = parse_problem(e.value);
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(source, e.line, ex.what());
      }
    }
  }
  RunConfig config = default_config(problem);
  int schedule_line = 0;
  for (const auto& e : entries) {
    const std::string full = e.section + "." + e.key;
    const auto it = setters().find(full);
    if (it == setters().end()) {
      throw ConfigError(source, e.line, "unknown key '" + e.key + "' in [" + e.section + "]");
    }
    if (!applies_to(full, problem)) {
      throw ConfigError(source, e.line,
                        "key '" + e.key + "' is not used by problem " +
                            std::string(to_string(problem)));
    }
    try {
      it->second(config, e.value);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(source, e.line, ex.what());
    }
    if (full == "loading.steps") schedule_line = e.line;
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& ex) {
    const std::string what = ex.what();
    const bool schedule_error = what.find("schedule") != std::string::npos ||
                                what.find("step size") != std::string::npos;
    throw ConfigError(source, schedule_error ? schedule_line : 0, what);
  }
  return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

}  // namespace pff
