#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "softfoot/bench.hpp"
#include "softfoot/errors.hpp"
#include "softfoot/log.hpp"
#include "softfoot/mjcf.hpp"
#include "softfoot/model_io.hpp"
#include "softfoot/report.hpp"
#include "softfoot/version.hpp"

namespace fs = std::filesystem;
using namespace softfoot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;

FootModel load_validated(const std::string& path, bool print_issues) {
  const FootModel model = load_model(path);
  const auto issues = validate_model(model);
  if (!issues.empty()) {
    if (print_issues)
      for (const ValidationIssue& issue : issues)
        std::cerr << "invalid: " << issue.field << ": " << issue.message << "\n";
    throw std::invalid_argument("model failed validation");
  }
  return model;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int cmd_validate(const std::string& model_path) {
  const FootModel model = load_model(model_path);
  const auto issues = validate_model(model);
  if (issues.empty()) {
    std::cout << "ok: " << model_path << "\n";
    return kExitOk;
  }
  for (const ValidationIssue& issue : issues)
    std::cout << "violation: " << issue.field << ": " << issue.message << "\n";
  return kExitDomain;
}

int cmd_bench(const std::string& model_path, const std::string& exp_path,
              const std::string& out_dir, SolverSettings settings, int workers) {
  const FootModel model = load_validated(model_path, true);
  std::vector<ExperimentalRecord> experimental;
  if (!exp_path.empty()) experimental = load_experimental_csv(exp_path);

  const std::vector<TrialResult> results = run_bench(model, settings, workers);
  const ErrorReport report = summarize(results, experimental);

  const bool all_failed =
      std::all_of(results.begin(), results.end(),
                  [](const TrialResult& r) { return !r.error.empty(); });

  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.model_path = model_path;
  manifest.config_hash = config_hash(model_to_json(model), settings);
  manifest.timestep = settings.timestep;
  manifest.duration = settings.duration;

  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "results.csv", write_results_csv(results));
  write_file(fs::path(out_dir) / "report.json",
             write_report_json(manifest, results, report));
  for (double load : kLoadsN) {
    const std::string name =
        "bench_" + format_double(load) + "N.svg";
    write_file(fs::path(out_dir) / name, write_bench_svg(load, results, report));
  }

  int failed = 0;
  for (const TrialResult& r : results)
    if (!r.error.empty()) ++failed;
  std::cout << "trials: " << results.size() << ", failed: " << failed << "\n";
  if (report.has_experimental) {
    std::cout << "mean |e| % (unfiltered/filtered):\n";
    std::cout << "  heel:       " << report.heel.unfiltered_mean_pct << " / "
              << report.heel.filtered_mean_pct << "\n";
    std::cout << "  modules:    " << report.moving.unfiltered_mean_pct << " / "
              << report.moving.filtered_mean_pct << "\n";
    std::cout << "  metatarsus: " << report.metatarsus.unfiltered_mean_pct
              << " / " << report.metatarsus.filtered_mean_pct << "\n";
    for (const BaselineRow& row : report.baselines)
      std::cout << "  baseline " << row.model << ": " << row.heel_pct << " / "
                << row.modules_pct << " / " << row.metatarsus_pct << "\n";
  }
  std::cout << "wrote " << out_dir << "/results.csv, report.json, svg charts\n";
  return all_failed ? kExitSolver : kExitOk;
}

int cmd_sensitivity(const std::string& model_path, const std::string& exp_path,
                    const std::string& out_file, SolverSettings settings,
                    const std::vector<double>& heel_dx_mm,
                    const std::vector<double>& meta_dx_mm,
                    const std::vector<double>& incline_deg, int workers) {
  const FootModel model = load_validated(model_path, true);
  std::vector<ExperimentalRecord> experimental;
  if (!exp_path.empty()) experimental = load_experimental_csv(exp_path);

  std::vector<std::pair<std::string, double>> perturbations;
  for (double v : heel_dx_mm) perturbations.emplace_back("heel_dx_mm", v);
  for (double v : meta_dx_mm) perturbations.emplace_back("meta_dx_mm", v);
  for (double v : incline_deg) perturbations.emplace_back("incline_deg", v);
  if (perturbations.empty()) perturbations = default_perturbations();

  const auto rows =
      sensitivity_sweep(model, settings, experimental, perturbations, workers);
  write_file(out_file, write_sensitivity_csv(rows));
  std::cout << "wrote " << out_file << " (" << rows.size() << " rows)\n";
  return kExitOk;
}

int cmd_export(const std::string& model_path, const std::string& format,
               const std::string& out_file) {
  if (format != "mjcf") {
    std::cerr << "unsupported export format: " << format << "\n";
    return kExitParse;
  }
  const FootModel model = load_validated(model_path, true);
  const std::string xml = export_mjcf(model);
  if (out_file.empty()) {
    std::cout << xml;
  } else {
    write_file(out_file, xml);
    std::cout << "wrote " << out_file << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SoftFoot planar quasi-static simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string model_path, exp_path, out_dir = "out", out_file, format = "mjcf";
  SolverSettings settings;
  int workers = static_cast<int>(
      std::max(1u, std::thread::hardware_concurrency()));
  std::vector<double> heel_dx_mm, meta_dx_mm, incline_deg;

  CLI::App* validate = app.add_subcommand("validate", "Check a model file");
  validate->add_option("model", model_path, "model JSON path")->required();

  CLI::App* bench = app.add_subcommand("bench", "Run the 48-trial protocol");
  bench->add_option("model", model_path, "model JSON path")->required();
  bench->add_option("--exp", exp_path, "experimental CSV for error metrics");
  bench->add_option("--out", out_dir, "output directory")->capture_default_str();
  bench->add_option("--timestep", settings.timestep, "integrator step, s")
      ->check(CLI::PositiveNumber);
  bench->add_option("--duration", settings.duration, "settle horizon, s")
      ->check(CLI::PositiveNumber);
  bench->add_option("--workers", workers, "parallel trial workers")
      ->check(CLI::PositiveNumber);

  CLI::App* sensitivity =
      app.add_subcommand("sensitivity", "Setup-perturbation sweep");
  sensitivity->add_option("model", model_path, "model JSON path")->required();
  sensitivity->add_option("--exp", exp_path, "experimental CSV reference");
  sensitivity->add_option("--out", out_file, "output CSV path")
      ->default_val("sensitivity.csv");
  sensitivity->add_option("--heel-dx", heel_dx_mm, "heel obstacle offsets, mm");
  sensitivity->add_option("--meta-dx", meta_dx_mm,
                          "metatarsus obstacle offsets, mm");
  sensitivity->add_option("--incline", incline_deg,
                          "initial inclinations, deg (1..5)")
      ->check(CLI::Range(1.0, 5.0));
  sensitivity->add_option("--timestep", settings.timestep, "integrator step, s")
      ->check(CLI::PositiveNumber);
  sensitivity->add_option("--duration", settings.duration, "settle horizon, s")
      ->check(CLI::PositiveNumber);
  sensitivity->add_option("--workers", workers, "parallel trial workers")
      ->check(CLI::PositiveNumber);

  CLI::App* exporter = app.add_subcommand("export", "Write an MJCF scene");
  exporter->add_option("model", model_path, "model JSON path")->required();
  exporter->add_option("--format", format, "export format")
      ->capture_default_str();
  exporter->add_option("--out", out_file, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (validate->parsed()) return cmd_validate(model_path);
    if (bench->parsed())
      return cmd_bench(model_path, exp_path, out_dir, settings, workers);
    if (sensitivity->parsed()) {
      // Sensitivity writes one file; out_file holds its --out.
      return cmd_sensitivity(model_path, exp_path, out_file, settings,
                             heel_dx_mm, meta_dx_mm, incline_deg, workers);
    }
    if (exporter->parsed()) return cmd_export(model_path, format, out_file);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}
