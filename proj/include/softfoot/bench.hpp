#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "softfoot/model.hpp"
#include "softfoot/solver.hpp"

namespace softfoot {

inline constexpr int kNumPositions = 6;
inline constexpr std::array<double, 2> kLoadsN = {12.0, 24.0};
inline constexpr std::array<double, 4> kHeightsMm = {7.0, 11.0, 15.0, 19.0};

struct TrialConfig {
  double load = 0.0;              // N
  double obstacle_height = 0.0;   // m
  int position = 1;               // 1..6, moving obstacle under that module
  double initial_inclination = 0.0;  // rad
  double heel_dx = 0.0;           // m, heel obstacle x offset
  double meta_dx = 0.0;           // m, metatarsus obstacle x offset
};

struct TrialResult {
  TrialConfig config;
  double f_heel = 0.0;        // N, on the heel obstacle
  double f_moving = 0.0;      // N, on the moving obstacle
  double f_metatarsus = 0.0;  // N, on the metatarsus obstacle
  std::array<double, 6> module_rotations{};  // rad, m1..m6 world pitch
  double closure_residual = 0.0;   // m
  double tendon_length = 0.0;      // m
  double settle_time = 0.0;        // s
  double kinetic_energy = 0.0;     // J
  double residual_force = 0.0;     // generalized force norm at exit
  double ground_force = 0.0;       // N, on the ground plane
  Configuration final_config;      // state at exit
  bool converged = false;
  bool diverged = false;
  std::string error;
};

struct ExperimentalRecord {
  double load = 0.0;          // N
  double height_mm = 0.0;     // mm
  int position = 1;           // 1..6
  double f_heel = 0.0;        // N
  double f_moving = 0.0;      // N
  double f_metatarsus = 0.0;  // N
  std::array<double, 6> module_rotations{};  // rad
};

// Per-component error summary (percent, to match the published table).
struct ComponentErrors {
  double unfiltered_mean_pct = 0.0;
  double filtered_mean_pct = 0.0;
  int n = 0;
  int undefined_count = 0;
};

struct BaselineRow {
  std::string model;
  double heel_pct = 0.0;
  double modules_pct = 0.0;
  double metatarsus_pct = 0.0;
};

struct TrialErrors {
  TrialConfig config;
  std::optional<double> e_heel;
  std::optional<double> e_moving;
  std::optional<double> e_metatarsus;
  std::optional<double> e_total;
  std::array<double, 6> rotation_errors{};  // rad, offset removed
  double rotation_offset = 0.0;             // rad
  bool has_rotations = false;
};

struct ErrorReport {
  bool has_experimental = false;
  std::vector<TrialErrors> trials;
  ComponentErrors heel;
  ComponentErrors moving;
  ComponentErrors metatarsus;
  ComponentErrors total;
  std::array<double, 6> rotation_mean_abs_error{};  // rad per module
  std::vector<BaselineRow> baselines;               // published rows, always present
};

// The 48-trial protocol: loads {12, 24} N x heights {7, 11, 15, 19} mm x
// positions p1..p6, in that nesting order.
std::vector<TrialConfig> enumerate_trials();

// (sim - exp) / exp; empty when the reference force is zero.
std::optional<double> relative_error(double simulated, double experimental);

// Sum-based total force error e_T = sum(sim - exp) / sum(exp).
std::optional<double> total_force_error(const std::vector<double>& simulated,
                                        const std::vector<double>& experimental);

// Offset-removed rotation errors: offset = mean(sim - exp); errors =
// (sim - offset) - exp.
std::array<double, 6> rotation_errors(const std::array<double, 6>& simulated,
                                      const std::array<double, 6>& experimental,
                                      double* offset_out = nullptr);

// Keep values <= mean + sample standard deviation; n < 2 is returned as is.
std::vector<double> mean_std_filter(const std::vector<double>& values);

// Scene for one trial: heel and metatarsus support obstacles (19 mm) plus the
// moving obstacle under module `position`, all 20 mm wide, on the ground.
Scene make_trial_scene(const FootModel& model, const TrialConfig& trial);

// Run a single trial to its settled state.
TrialResult run_trial(const FootModel& model, const TrialConfig& trial,
                      const SolverSettings& settings);

// Full protocol; `workers` <= 1 runs serially. Results are ordered exactly as
// enumerate_trials regardless of the worker count.
std::vector<TrialResult> run_bench(const FootModel& model, const SolverSettings& settings,
                                   int workers = 1);

// Error report against optional experimental data. Baseline rows from the
// published comparison are always embedded.
ErrorReport summarize(const std::vector<TrialResult>& results,
                      const std::vector<ExperimentalRecord>& experimental);

std::vector<BaselineRow> published_baselines();

struct SensitivityRow {
  std::string parameter;  // "heel_dx_mm", "meta_dx_mm", "incline_deg"
  double value = 0.0;     // perturbation level in the named unit
  double delta_heel_pct = 0.0;
  double delta_moving_pct = 0.0;
  double delta_metatarsus_pct = 0.0;
};

// Re-runs the bench under setup perturbations and reports the change in mean
// |e_b| per component. With experimental data the errors are against it;
// otherwise the unperturbed simulation is the reference.
std::vector<SensitivityRow> sensitivity_sweep(
    const FootModel& model, const SolverSettings& settings,
    const std::vector<ExperimentalRecord>& experimental,
    const std::vector<std::pair<std::string, double>>& perturbations, int workers = 1);

// The paper's standard set: heel +/-4 mm, metatarsus +/-4 mm, incline 1..5 deg.
std::vector<std::pair<std::string, double>> default_perturbations();

}  // namespace softfoot
