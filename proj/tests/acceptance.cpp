// Acceptance runner: one PASS/FAIL line per criterion. Exit status is
// non-zero when any selected criterion fails.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "pff/benchmark.hpp"
#include "pff/config.hpp"
#include "pff/io.hpp"
#include "pff/schemes.hpp"

namespace fs = std::filesystem;
using namespace pff;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Pinned thresholds.
constexpr int kBarStMin = 15, kBarStMax = 35;
constexpr int kBarFastMin = 10, kBarFastMax = 24;
constexpr double kSlopeMin = 1.9;
constexpr double kJacobianTol = 1e-5;
constexpr double kLinearR2 = 0.999;
constexpr double kCrackD = 0.95;
constexpr double kPeakSpread = 0.05;
constexpr double kFastRatio = 0.7;
constexpr double kTolIr = 0.01;
constexpr double kTolNr = 1e-7;
constexpr double kTolSt = 1e-6;

const std::vector<SchemeKind> kAllSchemes{SchemeKind::ST, SchemeKind::S1, SchemeKind::S2,
                                          SchemeKind::S3};

struct Line {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

/// Everything the cross-run criteria need from one run.
struct RunRecord {
  std::string label;
  bool converged = false;
  std::string error;
  double min_increment = 0.0;
  double worst_residual_u = 0.0;
  double worst_residual_d = 0.0;
  double final_residual_u = 0.0;
  double final_residual_d = 0.0;
};

RunRecord record_of(const std::string& label, const RunReport& r) {
  RunRecord rec;
  rec.label = label;
  rec.converged = true;
  rec.min_increment = r.min_increment();
  for (const auto& x : r.extras) {
    rec.worst_residual_u = std::max(rec.worst_residual_u, x.final_residual_u);
    rec.worst_residual_d = std::max(rec.worst_residual_d, x.final_residual_d);
  }
  if (!r.extras.empty()) {
    rec.final_residual_u = r.extras.back().final_residual_u;
    rec.final_residual_d = r.extras.back().final_residual_d;
  }
  return rec;
}

std::vector<RunRecord> g_records;

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double cov = n * sxy - sx * sy;
  const double vx = n * sxx - sx * sx;
  const double vy = n * syy - sy * sy;
  return vx > 0 && vy > 0 ? cov * cov / (vx * vy) : 0.0;
}

std::size_t peak_index(const RunReport& r) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (std::abs(r.rows[i].reaction) > std::abs(r.rows[best].reaction)) best = i;
  }
  return best;
}

// ---------------------------------------------------------------------------
// 1: bar oracle

Line bar_oracle() {
  Line line{1, "1D oracle"};
  const auto t0 = Clock::now();
  RunConfig c = default_config(ProblemKind::bar1d);
  std::map<SchemeKind, int> count;
  std::map<SchemeKind, int> jump_step;
  for (auto scheme : {SchemeKind::ST, SchemeKind::S3}) {
    c.scheme = scheme;
    std::vector<double> peak_d;
    RunOptions opts;
    opts.write_files = false;
    opts.observer = [&](const StepView& v) { peak_d.push_back(v.d.maxCoeff()); };
    const RunReport r = run_benchmark(c, opts);
    g_records.push_back(record_of("bar1d " + std::string(to_string(scheme)), r));
    count[scheme] = r.max_n_stag();
    jump_step[scheme] = -1;
    for (std::size_t j = 1; j < peak_d.size(); ++j) {
      if (peak_d[j - 1] < 0.5 && peak_d[j] > 0.99) {
        jump_step[scheme] = static_cast<int>(j);
        break;
      }
    }
  }
  line.seconds = since(t0);
  const int st = count[SchemeKind::ST];
  const int fast = count[SchemeKind::S3];
  const bool localized = jump_step[SchemeKind::ST] >= 0 && jump_step[SchemeKind::S3] >= 0;
  line.pass = localized && st >= kBarStMin && st <= kBarStMax && fast >= kBarFastMin &&
              fast <= kBarFastMax && fast < st && line.seconds < 30.0;
  line.detail = "N_max ST=" + std::to_string(st) + " in [15,35], S3=" + std::to_string(fast) +
                " in [10,24]; single-step localization " + (localized ? "yes" : "no");
  return line;
}

// ---------------------------------------------------------------------------
// 2: fixed-stress invariance

Line invariance() {
  Line line{2, "fixed-stress first-order invariance"};
  const auto t0 = Clock::now();
  const auto fit = checks::invariance_fit(MaterialParams{}, 1000, 2024, {1e-2, 1e-3, 1e-4, 1e-5});
  line.seconds = since(t0);
  line.pass = fit.slope_i1 >= kSlopeMin && fit.slope_j >= kSlopeMin && line.seconds < 5.0;
  line.detail = "slope I1=" + fmt(fit.slope_i1) + ", J=" + fmt(fit.slope_j) + " (>= 1.9)";
  return line;
}

// ---------------------------------------------------------------------------
// 3: Jacobians

Line jacobians() {
  Line line{3, "Jacobian consistency"};
  const auto t0 = Clock::now();
  const Mesh patch = checks::random_patch(3, 0.2, 77);
  const auto err = checks::tangent_errors(patch, MaterialParams{}, 78);

  const MaterialParams p;
  std::mt19937 rng(79);
  std::uniform_real_distribution<double> tr(0.0, 0.05), dev(0.0, 3e-3), dmg(0.0, 1.0);
  int mismatches = 0;
  for (int i = 0; i < 100000; ++i) {
    GaussPointState gp;
    gp.tr_plus = tr(rng);
    gp.dev_dot_dev = dev(rng);
    gp.psi_plus = active_energy(gp.tr_plus, gp.dev_dot_dev, p);
    const double d = dmg(rng);
    const double s3 = extra_stiffness(SchemeKind::S3, gp, d, p);
    const double sum = extra_stiffness(SchemeKind::S1, gp, d, p) +
                       extra_stiffness(SchemeKind::S2, gp, d, p);
    mismatches += s3 != sum;
  }
  line.seconds = since(t0);
  line.pass = err.momentum < kJacobianTol && err.evolution < kJacobianTol && mismatches == 0 &&
              line.seconds < 10.0;
  line.detail = "K_uu rel err " + fmt(err.momentum, 3) + ", K_dd rel err " +
                fmt(err.evolution, 3) + " (< 1e-5); S3 != S1+S2 in " +
                std::to_string(mismatches) + " of 100000 states";
  return line;
}

// ---------------------------------------------------------------------------
// 2D runs

struct SweepResult {
  std::map<SchemeKind, RunReport> reports;
  std::map<SchemeKind, std::string> failures;
  double seconds = 0.0;
};

SweepResult sweep(RunConfig config, const fs::path& dir,
                  const std::function<StepObserver(SchemeKind)>& observer_for) {
  SweepResult out;
  const auto t0 = Clock::now();
  config.output_dir = dir.string();
  for (auto scheme : kAllSchemes) {
    config.scheme = scheme;
    RunOptions opts;
    opts.observer = observer_for(scheme);
    const std::string label = std::string(to_string(config.problem)) + " " +
                              std::string(to_string(scheme));
    try {
      out.reports.emplace(scheme, run_benchmark(config, opts));
      g_records.push_back(record_of(label, out.reports.at(scheme)));
    } catch (const std::exception& e) {
      out.failures[scheme] = e.what();
      RunRecord rec;
      rec.label = label;
      rec.error = e.what();
      g_records.push_back(rec);
    }
    std::cerr << "  " << label << " done after " << fmt(since(t0), 5) << " s\n";
  }
  out.seconds = since(t0);
  return out;
}

// ---------------------------------------------------------------------------
// 4: tensile

struct LigamentTrace {
  std::vector<double> cracked_fraction;  ///< per step, ligament columns with d > kCrackD
};

/// Fraction of node columns right of the notch tip whose largest d within
/// `band` of mid-height exceeds kCrackD.
double ligament_fraction(const Mesh& mesh, const Eigen::VectorXd& d, double band) {
  std::map<long, double> column_max;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const auto& x = mesh.nodes[i].x;
    if (x[0] < 0.5 - 1e-9) continue;
    const long key = std::lround(x[0] * 1e9);
    auto [it, inserted] = column_max.emplace(key, -1.0);
    if (std::abs(x[1] - 0.5) <= band) it->second = std::max(it->second, d[i]);
  }
  int cracked = 0;
  for (const auto& [key, v] : column_max) cracked += v > kCrackD;
  return column_max.empty() ? 0.0 : static_cast<double>(cracked) / column_max.size();
}

Line tensile(int n, const fs::path& out) {
  Line line{4, "tensile benchmark"};
  RunConfig c = default_config(ProblemKind::tensile);
  c.nx = c.ny = n;
  c.snapshot_every = 10;
  std::map<SchemeKind, LigamentTrace> traces;
  const double band = 0.05;
  const SweepResult s = sweep(c, out / "tensile", [&](SchemeKind scheme) -> StepObserver {
    return [&traces, scheme, band](const StepView& v) {
      traces[scheme].cracked_fraction.push_back(ligament_fraction(v.mesh, v.d, band));
    };
  });
  line.seconds = s.seconds;
  if (!s.failures.empty()) {
    line.detail = "run failed: " + s.failures.begin()->second;
    return line;
  }

  bool linear = true, one_step = true;
  double worst_r2 = 1.0;
  double peak_lo = 1e300, peak_hi = 0.0;
  std::ostringstream crack_steps;
  for (auto scheme : kAllSchemes) {
    const RunReport& r = s.reports.at(scheme);
    const std::size_t ip = peak_index(r);
    std::vector<double> x, y;
    for (std::size_t i = 0; i <= ip; ++i) {
      x.push_back(r.rows[i].u);
      y.push_back(r.rows[i].reaction);
    }
    const double r2 = x.size() >= 3 ? r_squared(x, y) : 0.0;
    worst_r2 = std::min(worst_r2, r2);
    linear = linear && r2 > kLinearR2;

    const auto& f = traces.at(scheme).cracked_fraction;
    int formed = -1;
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (f[j] == 1.0) {
        formed = static_cast<int>(j);
        break;
      }
    }
    const bool single = formed > 0 && f[formed - 1] <= 0.5;
    one_step = one_step && single;
    crack_steps << to_string(scheme) << "@t=" << (formed >= 0 ? fmt(r.rows[formed].time) : "-")
                << ' ';
    peak_lo = std::min(peak_lo, r.peak_force());
    peak_hi = std::max(peak_hi, r.peak_force());
  }
  const double spread = (peak_hi - peak_lo) / peak_hi;
  const int st = s.reports.at(SchemeKind::ST).max_n_stag();
  const int s1 = s.reports.at(SchemeKind::S1).max_n_stag();
  const int s2 = s.reports.at(SchemeKind::S2).max_n_stag();
  const int s3 = s.reports.at(SchemeKind::S3).max_n_stag();
  const bool ordering = st >= s1 && st >= s3 && s3 <= kFastRatio * st;
  line.pass = linear && one_step && spread <= kPeakSpread && ordering && line.seconds < 1800.0;
  line.detail = std::to_string(n) + "x" + std::to_string(n) + ": pre-peak R2 min " +
                fmt(worst_r2, 6) + "; through crack " + crack_steps.str() +
                (one_step ? "(single step)" : "(NOT single step)") + "; peak spread " +
                fmt(100 * spread, 3) + "%; N_max ST/S1/S2/S3 = " + std::to_string(st) + "/" +
                std::to_string(s1) + "/" + std::to_string(s2) + "/" + std::to_string(s3) +
                " (S3/ST = " + fmt(static_cast<double>(s3) / st, 3) + ")";
  return line;
}

// ---------------------------------------------------------------------------
// 5: shear

Line shear(int n, const fs::path& out) {
  Line line{5, "shear benchmark"};
  RunConfig c = default_config(ProblemKind::shear);
  c.nx = c.ny = n;
  c.snapshot_every = 10;
  // Lowest point of the d > kCrackD set, per step (NaN while uncracked).
  std::map<SchemeKind, std::vector<double>> tip_y;
  std::map<SchemeKind, double> first_distance;
  const SweepResult s = sweep(c, out / "shear", [&](SchemeKind scheme) -> StepObserver {
    first_distance[scheme] = -1.0;
    return [&tip_y, &first_distance, scheme](const StepView& v) {
      double lowest = std::numeric_limits<double>::quiet_NaN();
      double near = 1e300;
      for (std::size_t i = 0; i < v.mesh.num_nodes(); ++i) {
        if (v.d[i] <= kCrackD) continue;
        const auto& x = v.mesh.nodes[i].x;
        if (!(lowest <= x[1])) lowest = x[1];
        near = std::min(near, std::hypot(x[0] - 0.5, x[1] - 0.5));
      }
      if (first_distance[scheme] < 0.0 && !std::isnan(lowest)) first_distance[scheme] = near;
      tip_y[scheme].push_back(lowest);
    };
  });
  line.seconds = s.seconds;
  if (!s.failures.empty()) {
    line.detail = "run failed: " + s.failures.begin()->second;
    return line;
  }

  bool grows = true, shape = true;
  std::ostringstream path;
  for (auto scheme : kAllSchemes) {
    const auto& y = tip_y.at(scheme);
    int advances = 0;
    double last = std::numeric_limits<double>::quiet_NaN();
    for (double v : y) {
      if (std::isnan(v)) continue;
      if (!std::isnan(last) && v < last - 1e-12) ++advances;
      last = v;
    }
    const bool at_tip = first_distance.at(scheme) >= 0.0 && first_distance.at(scheme) <= 0.05;
    const bool down = !std::isnan(last) && last < 0.4;
    grows = grows && at_tip && advances >= 3 && down;
    path << to_string(scheme) << ": tip y " << (std::isnan(last) ? "-" : fmt(last, 3)) << " in "
         << advances << " advances; ";

    const RunReport& r = s.reports.at(scheme);
    const std::size_t ip = peak_index(r);
    const double final_force = std::abs(r.rows.back().reaction);
    shape = shape && ip > 0 && ip + 1 < r.rows.size() && final_force < 0.9 * r.peak_force();
  }
  const long st = s.reports.at(SchemeKind::ST).total_n_stag();
  const long s3 = s.reports.at(SchemeKind::S3).total_n_stag();
  const bool cheaper = s3 <= kFastRatio * st;
  line.pass = grows && shape && cheaper && line.seconds < 3600.0;
  line.detail = std::to_string(n) + "x" + std::to_string(n) + ": " + path.str() +
                "force rise/decline " + (shape ? "yes" : "no") + "; total N_stag ST=" +
                std::to_string(st) + " S3=" + std::to_string(s3) +
                " (ratio " + fmt(static_cast<double>(s3) / st, 3) + ", <= 0.7)";
  return line;
}

// ---------------------------------------------------------------------------
// 6: L-shape

Line lshape(double h, const fs::path& out) {
  Line line{6, "L-shape panel"};
  RunConfig c = default_config(ProblemKind::lshape);
  c.lshape_h = h;
  c.snapshot_every = 40;
  const double cx = 250.0, cy = 250.0;
  std::map<SchemeKind, double> first_distance;
  std::map<SchemeKind, double> reach_x;
  const SweepResult s = sweep(c, out / "lshape", [&](SchemeKind scheme) -> StepObserver {
    first_distance[scheme] = -1.0;
    reach_x[scheme] = 1e300;
    return [&, scheme](const StepView& v) {
      double near = 1e300;
      bool any = false;
      for (std::size_t i = 0; i < v.mesh.num_nodes(); ++i) {
        if (v.d[i] <= kCrackD) continue;
        const auto& x = v.mesh.nodes[i].x;
        any = true;
        near = std::min(near, std::hypot(x[0] - cx, x[1] - cy));
        reach_x[scheme] = std::min(reach_x[scheme], x[0]);
      }
      if (any && first_distance[scheme] < 0.0) first_distance[scheme] = near;
    };
  });
  line.seconds = s.seconds;
  if (!s.failures.empty()) {
    line.detail = "run failed (" + std::string(to_string(s.failures.begin()->first)) +
                  "): " + s.failures.begin()->second;
    return line;
  }
  bool path_ok = true;
  std::ostringstream path;
  const double l_eff = s.reports.at(SchemeKind::ST).effective_length;
  for (auto scheme : kAllSchemes) {
    const bool at_corner =
        first_distance.at(scheme) >= 0.0 && first_distance.at(scheme) <= 3.0 * l_eff;
    const bool across = reach_x.at(scheme) <= cx - 100.0;
    path_ok = path_ok && at_corner && across;
    path << to_string(scheme) << ": start " << fmt(first_distance.at(scheme), 3)
         << " mm from corner, reach x=" << fmt(reach_x.at(scheme), 4) << "; ";
  }
  const int st = s.reports.at(SchemeKind::ST).max_n_stag();
  const int s3 = s.reports.at(SchemeKind::S3).max_n_stag();
  line.pass = path_ok && s3 <= kFastRatio * st && line.seconds < 3600.0;
  line.detail = "h=" + fmt(h) + " mm: " + path.str() + "N_max ST=" + std::to_string(st) +
                " S1=" + std::to_string(s.reports.at(SchemeKind::S1).max_n_stag()) +
                " S2=" + std::to_string(s.reports.at(SchemeKind::S2).max_n_stag()) +
                " S3=" + std::to_string(s3) + " (ratio " +
                fmt(static_cast<double>(s3) / st, 3) + ", <= 0.7); all converged";
  return line;
}

// ---------------------------------------------------------------------------
// 7, 8: cross-run checks

Line irreversibility() {
  Line line{7, "irreversibility"};
  double worst = 0.0;
  std::string where = "-";
  for (const auto& r : g_records) {
    if (!r.converged) continue;
    if (r.min_increment < worst) {
      worst = r.min_increment;
      where = r.label;
    }
  }
  line.pass = !g_records.empty() && worst >= -kTolIr;
  line.detail = "min (d_n - d_n-1) = " + fmt(worst, 3) + " (" + where + ") over " +
                std::to_string(g_records.size()) + " runs, >= -0.01";
  return line;
}

Line residuals() {
  Line line{8, "converged residuals"};
  double ru = 0.0, rd = 0.0;
  int failed = 0;
  for (const auto& r : g_records) {
    if (!r.converged) {
      ++failed;
      continue;
    }
    ru = std::max(ru, r.final_residual_u);
    rd = std::max(rd, r.final_residual_d);
  }
  line.pass = !g_records.empty() && failed == 0 && ru < kTolNr && rd < kTolSt;
  line.detail = "final-step max rel ||R_u|| = " + fmt(ru, 3) + " (< 1e-7), ||R_d|| = " +
                fmt(rd, 3) + " (< 1e-6); " + std::to_string(failed) + " runs failed";
  return line;
}

// ---------------------------------------------------------------------------
// 9: I/O

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Line io(const fs::path& out) {
  Line line{9, "I/O determinism and VTK"};
  const auto t0 = Clock::now();
  bool identical = true;
  std::vector<std::string> compared;

  RunConfig bar = default_config(ProblemKind::bar1d);
  bar.scheme = SchemeKind::S3;
  RunConfig small = default_config(ProblemKind::shear);
  small.nx = small.ny = 20;
  small.schedule = {{250.0, 250.0}, {5.0, 300.0}};
  small.scheme = SchemeKind::S3;
  small.snapshot_every = 5;
  std::vector<fs::path> vtks;
  for (RunConfig* c : {&bar, &small}) {
    std::string first;
    for (const char* rep : {"a", "b"}) {
      c->output_dir = (out / "io" / rep).string();
      const RunReport r = run_benchmark(*c);
      const auto csv = fs::path(c->output_dir) /
                       (std::string(to_string(c->problem)) + "_S3.csv");
      const std::string bytes = slurp(csv);
      if (first.empty()) {
        first = bytes;
      } else {
        identical = identical && !bytes.empty() && bytes == first;
      }
      if (std::string(rep) == "b") {
        compared.push_back(csv.filename().string());
        for (const auto& f : r.files) {
          if (f.extension() == ".vtk") vtks.push_back(f);
        }
      }
    }
  }
  for (const char* sub : {"tensile", "shear", "lshape"}) {
    if (!fs::exists(out / sub)) continue;
    for (const auto& e : fs::directory_iterator(out / sub)) {
      if (e.path().extension() == ".vtk") vtks.push_back(e.path());
    }
  }
  std::sort(vtks.begin(), vtks.end());

  int parsed = 0;
  std::string problem;
  bool reader = true;
  for (const auto& f : vtks) {
    const VtkData v = read_vtk(f);
    const auto [lo, hi] = std::minmax_element(v.d.begin(), v.d.end());
    const std::string why =
        checks::reference_vtk_check(f, v.points.size(), v.cells.size(), *lo, *hi, reader);
    if (!reader) {
      problem = why;
      break;
    }
    if (!why.empty()) {
      problem = f.filename().string() + ": " + why;
      break;
    }
    ++parsed;
  }
  line.seconds = since(t0);
  line.pass = identical && reader && problem.empty() && parsed > 0;
  std::string names;
  for (const auto& n : compared) names += n + " ";
  line.detail = std::string("repeated CSV bytes ") + (identical ? "identical" : "DIFFER") +
                " (" + names + "); " + std::to_string(parsed) + "/" +
                std::to_string(vtks.size()) + " VTK files parsed by meshio" +
                (problem.empty() ? "" : " [" + problem + "]");
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  fs::path out = "acceptance_out";
  int tensile_n = 100;
  int shear_n = 80;
  double lshape_h = 250.0 / 16.0;
  std::vector<int> only;
  app.add_option("--out", out, "Directory for run output");
  app.add_option("--tensile-n", tensile_n, "Elements per side, tensile");
  app.add_option("--shear-n", shear_n, "Elements per side, shear");
  app.add_option("--lshape-h", lshape_h, "Element size of the L-panel (mm)");
  app.add_option("--only", only, "Criteria to run")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::set<int> selected =
      only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9} : std::set<int>(only.begin(), only.end());
  fs::create_directories(out);

  std::vector<Line> lines;
  std::ofstream summary(out / "summary.txt");
  auto run = [&](int id, const std::function<Line()>& f) {
    if (!selected.count(id)) return;
    std::cerr << "criterion " << id << " ...\n";
    try {
      lines.push_back(f());
    } catch (const std::exception& e) {
      lines.push_back({id, "criterion " + std::to_string(id), false,
                       std::string("exception: ") + e.what()});
    }
    const Line& l = lines.back();
    std::ostringstream text;
    text << (l.pass ? "PASS" : "FAIL") << " [" << l.id << "] " << l.title << ": " << l.detail
         << " (" << fmt(l.seconds, 4) << " s)";
    std::cout << text.str() << std::endl;
    summary << text.str() << std::endl;
  };
  run(1, bar_oracle);
  run(2, invariance);
  run(3, jacobians);
  run(4, [&] { return tensile(tensile_n, out); });
  run(5, [&] { return shear(shear_n, out); });
  run(6, [&] { return lshape(lshape_h, out); });
  run(7, irreversibility);
  run(8, residuals);
  run(9, [&] { return io(out); });

  const auto failed = std::count_if(lines.begin(), lines.end(), [](const Line& l) {
    return !l.pass;
  });
  std::cout << lines.size() - failed << "/" << lines.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
