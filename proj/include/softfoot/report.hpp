#pragma once

#include <string>
#include <vector>

#include "softfoot/bench.hpp"

namespace softfoot {

// Deterministic shortest-round-trip decimal formatting (locale-free).
std::string format_double(double value);

// Experimental CSV: header
// load_N,height_mm,position,f_h,f_p,f_m,rot_m1,...,rot_m6
// SI units except the height in millimeters; position accepts "p3" or "3".
std::vector<ExperimentalRecord> read_experimental_csv(const std::string& text);
std::vector<ExperimentalRecord> load_experimental_csv(const std::string& path);
std::string write_experimental_csv(const std::vector<ExperimentalRecord>& records);

// results.csv: the experimental columns plus per-trial diagnostics.
std::string write_results_csv(const std::vector<TrialResult>& results);

// Reproducibility stamp: no timestamps or hostnames, only version and a
// config hash stable under JSON key reordering.
struct RunManifest {
  std::string tool_version;
  std::string model_path;
  std::string config_hash;
  double timestep = 0.0;
  double duration = 0.0;
};

std::string config_hash(const std::string& model_json, const SolverSettings& settings);

// report.json: manifest, baseline rows, per-trial results/errors, summary.
std::string write_report_json(const RunManifest& manifest,
                              const std::vector<TrialResult>& results,
                              const ErrorReport& report);

// Per-load SVG bar chart by position/height: |e_b| percent per component when
// experimental data is present, settled forces in newtons otherwise.
std::string write_bench_svg(double load, const std::vector<TrialResult>& results,
                            const ErrorReport& report);

std::string write_sensitivity_csv(const std::vector<SensitivityRow>& rows);

}  // namespace softfoot
