#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "pff/benchmark.hpp"
#include "pff/config.hpp"

namespace {

void print_summary(const pff::RunReport& r) {
  std::cout << pff::to_string(r.problem) << ' ' << pff::to_string(r.scheme)
            << ": steps=" << r.rows.size() << " max_n_stag=" << r.max_n_stag()
            << " total_n_stag=" << r.total_n_stag() << " peak_force=" << r.peak_force()
            << " l=" << r.effective_length;
  if (r.total_fallbacks() > 0) std::cout << " fallbacks=" << r.total_fallbacks();
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-field fracture benchmarks with standard and fixed-stress staggered schemes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scheme;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run one benchmark with one scheme");
  run->add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--scheme", scheme, "ST, S1, S2 or S3 (overrides the config)");
  run->add_option("--out", out_dir, "Output directory (overrides the config)");

  std::string sweep_config;
  std::string sweep_schemes = "all";
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run all schemes and write a comparison CSV");
  sweep->add_option("--config", sweep_config, "Configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--schemes", sweep_schemes, "'all' or a comma-separated list");
  sweep->add_option("--out", sweep_out, "Output directory (overrides the config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      pff::RunConfig config = pff::parse_config(config_path);
      if (!scheme.empty()) config.scheme = pff::parse_scheme(scheme);
      if (!out_dir.empty()) config.output_dir = out_dir;
      const pff::RunReport report = pff::run_benchmark(config);
      print_summary(report);
      for (const auto& f : report.files) std::cout << "  wrote " << f.string() << '\n';
      return 0;
    }
    pff::RunConfig config = pff::parse_config(sweep_config);
    if (!sweep_out.empty()) config.output_dir = sweep_out;
    std::vector<pff::SchemeKind> schemes;
    if (sweep_schemes == "all") {
      schemes = {pff::SchemeKind::ST, pff::SchemeKind::S1, pff::SchemeKind::S2,
                 pff::SchemeKind::S3};
    } else {
      std::string_view rest = sweep_schemes;
      while (!rest.empty()) {
        const auto c = rest.find(',');
        schemes.push_back(pff::parse_scheme(rest.substr(0, c)));
        rest = c == std::string_view::npos ? std::string_view() : rest.substr(c + 1);
      }
    }
    const auto reports = pff::run_sweep(config, schemes);
    for (const auto& r : reports) print_summary(r);
    const auto path = std::filesystem::path(config.output_dir) /
                      (std::string(pff::to_string(config.problem)) + "_sweep.csv");
    pff::write_sweep_csv(reports, path);
    std::cout << "  wrote " << path.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
