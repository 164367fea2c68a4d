#include "pff/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "pff/oned.hpp"

namespace pff {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<PrescribedDof> fix(std::span<const Index> nodes, int component, double value) {
  std::vector<PrescribedDof> out;
  out.reserve(nodes.size());
  for (Index n : nodes) out.push_back({2 * n + component, value});
  return out;
}

void append(std::vector<PrescribedDof>& to, const std::vector<PrescribedDof>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

std::string stem(const RunConfig& config) {
  return std::string(to_string(config.problem)) + "_" + std::string(to_string(config.scheme));
}

std::string step_tag(int step) {
  std::string s = std::to_string(step);
  return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

void write_timings(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "step,time,wall_time,time_u,time_d,fallbacks,gated_points,min_increment\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    const auto& x = report.extras[i];
    out << i + 1 << ',' << format_double(r.time) << ',' << format_double(r.wall_time) << ','
        << format_double(x.time_u) << ',' << format_double(x.time_d) << ',' << x.fallbacks << ','
        << x.gated_points << ',' << format_double(x.min_increment) << '\n';
  }
}

void write_profiles(const Mesh& mesh, int step, const std::vector<Eigen::VectorXd>& profiles,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "step,iteration,x,d\n";
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    for (Eigen::Index i = 0; i < profiles[k].size(); ++i) {
      out << step << ',' << k + 1 << ',' << format_double(mesh.nodes[i].x[0]) << ','
          << format_double(profiles[k][i]) << '\n';
    }
  }
}

StepExtra extra_of(const StaggeredStats& s) {
  return {s.fallbacks,        s.gated_points,     s.min_increment, s.final_residual_u,
          s.final_residual_d, s.time_u,           s.time_d};
}

bool snapshot_due(const RunConfig& config, int step, int last) {
  if (!config.write_vtk) return false;
  if (step == last) return true;
  return config.snapshot_every > 0 && step % config.snapshot_every == 0;
}

RunReport run_bar(const RunConfig& config, const RunOptions& options) {
  RunReport report;
  report.problem = config.problem;
  report.scheme = config.scheme;
  report.effective_length = config.bar.length_l;
  report.mesh = build_line_mesh(config.bar_elements, 1.0);
  Bar1D bar(report.mesh, config.bar, config.solver);
  Bar1DState state = bar.initial_state();
  const auto times = config.step_times();
  const std::filesystem::path dir = config.output_dir;

  std::vector<Eigen::VectorXd> profiles;
  std::vector<Eigen::VectorXd> best_profiles;
  int best_step = 0;
  int best_count = 0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const int step = static_cast<int>(j) + 1;
    const double applied = config.rate * times[j];
    profiles.clear();
    const auto t0 = Clock::now();
    StaggeredStats stats;
    try {
      stats = bar.evolve_1d(state, config.scheme, applied,
                            config.write_profiles ? &profiles : nullptr);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("step " + std::to_string(step) + " (t = " + format_double(times[j]) +
                                 "): " + e.what(),
                             e.history());
    }
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    report.rows.push_back(
        {times[j], applied, stats.reaction, stats.n_stag, stats.n_nr_u, stats.n_nr_d, wall});
    report.extras.push_back(extra_of(stats));
    if (stats.n_stag > best_count) {
      best_count = stats.n_stag;
      best_step = step;
      best_profiles = profiles;
    }
    if (options.observer) {
      options.observer({step, times[j], applied, report.mesh, state.u, state.d, stats});
    }
    if (options.write_files && snapshot_due(config, step, static_cast<int>(times.size()))) {
      const auto path = dir / (stem(config) + "_" + step_tag(step) + ".vtk");
      write_vtk_snapshot(report.mesh, state.u, state.d, path);
      report.files.push_back(path);
    }
  }
  report.u = state.u;
  report.d = state.d;
  if (options.write_files) {
    const auto csv = dir / (stem(config) + ".csv");
    write_csv(report.rows, csv);
    write_timings(report, dir / (stem(config) + "_timings.csv"));
    report.files.push_back(csv);
    if (config.write_profiles) {
      const auto path = dir / (stem(config) + "_profiles.csv");
      write_profiles(report.mesh, best_step, best_profiles, path);
      report.files.push_back(path);
    }
  }
  return report;
}

}  // namespace

Problem make_problem(const RunConfig& config) {
  Problem p;
  double h = 0.0;
  switch (config.problem) {
    case ProblemKind::tensile:
    case ProblemKind::shear: {
      p.mesh = build_notched_square(config.nx, config.ny, 1.0, true);
      h = 1.0 / std::min(config.nx, config.ny);
      const auto& top = p.mesh.select_boundary("top");
      const auto& bottom = p.mesh.select_boundary("bottom");
      p.reaction_nodes = top;
      if (config.problem == ProblemKind::tensile) {
        p.reaction_component = 1;
        p.boundary = [top, bottom](double u_bar) {
          StepBoundary bc;
          append(bc.u, fix(bottom, 0, 0.0));
          append(bc.u, fix(bottom, 1, 0.0));
          append(bc.u, fix(top, 0, 0.0));
          append(bc.u, fix(top, 1, u_bar));
          return bc;
        };
      } else {
        p.reaction_component = 0;
        const auto& left = p.mesh.select_boundary("left");
        const auto& right = p.mesh.select_boundary("right");
        p.boundary = [top, bottom, left, right](double u_bar) {
          StepBoundary bc;
          append(bc.u, fix(bottom, 0, 0.0));
          append(bc.u, fix(bottom, 1, 0.0));
          append(bc.u, fix(left, 1, 0.0));
          append(bc.u, fix(right, 1, 0.0));
          append(bc.u, fix(top, 0, u_bar));
          append(bc.u, fix(top, 1, 0.0));
          return bc;
        };
      }
      break;
    }
    case ProblemKind::lshape: {
      p.mesh = build_lshape_mesh(config.lshape_h);
      h = config.lshape_h;
      const auto& clamp = p.mesh.select_boundary("bottom_clamp");
      const auto& load = p.mesh.select_boundary("load_zone");
      const auto& pinned = p.mesh.select_boundary("no_damage");
      p.reaction_nodes = load;
      p.reaction_component = 1;
      p.boundary = [clamp, load, pinned](double u_bar) {
        StepBoundary bc;
        append(bc.u, fix(clamp, 0, 0.0));
        append(bc.u, fix(clamp, 1, 0.0));
        append(bc.u, fix(load, 1, u_bar));
        bc.d_pinned = pinned;
        return bc;
      };
      break;
    }
    case ProblemKind::bar1d:
      throw std::invalid_argument("bar1d has no 2D problem setup");
  }
  p.effective_length =
      config.widen_length ? std::max(config.material.length_l, 2.0 * h) : config.material.length_l;
  return p;
}

int RunReport::max_n_stag() const {
  int m = 0;
  for (const auto& r : rows) m = std::max(m, r.n_stag);
  return m;
}

long RunReport::total_n_stag() const {
  long s = 0;
  for (const auto& r : rows) s += r.n_stag;
  return s;
}

long RunReport::total_nr_u() const {
  long s = 0;
  for (const auto& r : rows) s += r.n_nr_u;
  return s;
}

long RunReport::total_nr_d() const {
  long s = 0;
  for (const auto& r : rows) s += r.n_nr_d;
  return s;
}

double RunReport::peak_force() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.reaction));
  return m;
}

double RunReport::min_increment() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : extras) m = std::min(m, x.min_increment);
  return m;
}

int RunReport::total_fallbacks() const {
  int s = 0;
  for (const auto& x : extras) s += x.fallbacks;
  return s;
}

RunReport run_benchmark(const RunConfig& config, const RunOptions& options) {
  config.validate();
  if (config.problem == ProblemKind::bar1d) return run_bar(config, options);

  Problem problem = make_problem(config);
  MaterialParams params = config.material;
  params.length_l = problem.effective_length;

  RunReport report;
  report.problem = config.problem;
  report.scheme = config.scheme;
  report.effective_length = problem.effective_length;
  report.mesh = problem.mesh;

  Assembler assembler(report.mesh);
  StaggeredSolver solver(assembler, params, config.solver, config.scheme);
  FieldState state = FieldState::zero(assembler);
  const auto times = config.step_times();
  const std::filesystem::path dir = config.output_dir;

  for (std::size_t j = 0; j < times.size(); ++j) {
    const int step = static_cast<int>(j) + 1;
    const double applied = config.rate * times[j];
    const StepBoundary bc = problem.boundary(applied);
    const auto t0 = Clock::now();
    StaggeredStats stats;
    try {
      stats = solver.step(state, bc, problem.reaction_nodes, problem.reaction_component);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("step " + std::to_string(step) + " (t = " + format_double(times[j]) +
                                 "): " + e.what(),
                             e.history());
    }
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    report.rows.push_back(
        {times[j], applied, stats.reaction, stats.n_stag, stats.n_nr_u, stats.n_nr_d, wall});
    report.extras.push_back(extra_of(stats));
    if (options.observer) {
      options.observer({step, times[j], applied, report.mesh, state.u, state.d, stats});
    }
    if (options.write_files && snapshot_due(config, step, static_cast<int>(times.size()))) {
      const auto path = dir / (stem(config) + "_" + step_tag(step) + ".vtk");
      write_vtk_snapshot(report.mesh, state.u, state.d, path);
      report.files.push_back(path);
    }
  }
  report.u = state.u;
  report.d = state.d;
  if (options.write_files) {
    const auto csv = dir / (stem(config) + ".csv");
    write_csv(report.rows, csv);
    write_timings(report, dir / (stem(config) + "_timings.csv"));
    report.files.push_back(csv);
  }
  return report;
}

std::vector<RunReport> run_sweep(const RunConfig& config, const std::vector<SchemeKind>& schemes,
                                 const RunOptions& options) {
  std::vector<RunReport> reports;
  for (SchemeKind s : schemes) {
    RunConfig c = config;
    c.scheme = s;
    reports.push_back(run_benchmark(c, options));
  }
  return reports;
}

void write_sweep_csv(const std::vector<RunReport>& reports, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "scheme,max_n_stag,total_n_stag,total_nr_u,total_nr_d,peak_force\n";
  for (const auto& r : reports) {
    out << to_string(r.scheme) << ',' << r.max_n_stag() << ',' << r.total_n_stag() << ','
        << r.total_nr_u() << ',' << r.total_nr_d() << ',' << format_double(r.peak_force()) << '\n';
  }
}

}  // namespace pff
