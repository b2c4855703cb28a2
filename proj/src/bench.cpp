#include "softfoot/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "softfoot/errors.hpp"
#include "softfoot/kinematics.hpp"
#include "softfoot/log.hpp"

namespace softfoot {

namespace {

constexpr double kObstacleWidth = 0.020;   // m
constexpr double kSupportHeight = 0.019;   // m, heel and metatarsus obstacles

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

ComponentErrors component_errors(const std::vector<double>& abs_errors,
                                 int undefined) {
  ComponentErrors out;
  out.n = static_cast<int>(abs_errors.size());
  out.undefined_count = undefined;
  out.unfiltered_mean_pct = 100.0 * mean(abs_errors);
  out.filtered_mean_pct = 100.0 * mean(mean_std_filter(abs_errors));
  return out;
}

}  // namespace

std::vector<TrialConfig> enumerate_trials() {
  std::vector<TrialConfig> trials;
  trials.reserve(48);
  for (double load : kLoadsN)
    for (double height_mm : kHeightsMm)
      for (int position = 1; position <= kNumPositions; ++position) {
        TrialConfig t;
        t.load = load;
        t.obstacle_height = height_mm / 1000.0;
        t.position = position;
        trials.push_back(t);
      }
  return trials;
}

std::optional<double> relative_error(double simulated, double experimental) {
  if (experimental == 0.0) return std::nullopt;
  return (simulated - experimental) / experimental;
}

std::optional<double> total_force_error(const std::vector<double>& simulated,
                                        const std::vector<double>& experimental) {
  const double sum_exp =
      std::accumulate(experimental.begin(), experimental.end(), 0.0);
  if (sum_exp == 0.0) return std::nullopt;
  const double sum_sim =
      std::accumulate(simulated.begin(), simulated.end(), 0.0);
  return (sum_sim - sum_exp) / sum_exp;
}

std::array<double, 6> rotation_errors(const std::array<double, 6>& simulated,
                                      const std::array<double, 6>& experimental,
                                      double* offset_out) {
  double offset = 0.0;
  for (int i = 0; i < 6; ++i) offset += (simulated[i] - experimental[i]) / 6.0;
  if (offset_out) *offset_out = offset;
  std::array<double, 6> errors{};
  for (int i = 0; i < 6; ++i)
    errors[i] = (simulated[i] - offset) - experimental[i];
  return errors;
}

std::vector<double> mean_std_filter(const std::vector<double>& values) {
  if (values.size() < 2) return values;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  const double std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  std::vector<double> kept;
  for (double v : values)
    if (v <= m + std_dev) kept.push_back(v);
  return kept;
}

Scene make_trial_scene(const FootModel& model, const TrialConfig& trial) {
  // Obstacle x positions come from the flat reference layout, mirroring a
  // physical bench where the supports sit at nominal module stations.
  const FootLayout layout = compute_layout(model);

  Scene scene;
  scene.ground_plane = true;
  scene.load = trial.load;
  scene.obstacles.push_back(ObstacleSpec{SurfaceRole::Heel,
                                         layout.centers[0].x() + trial.heel_dx,
                                         kObstacleWidth, kSupportHeight});
  scene.obstacles.push_back(ObstacleSpec{SurfaceRole::Moving,
                                         layout.centers[trial.position].x(),
                                         kObstacleWidth, trial.obstacle_height});
  scene.obstacles.push_back(ObstacleSpec{SurfaceRole::Metatarsus,
                                         layout.centers[7].x() + trial.meta_dx,
                                         kObstacleWidth, kSupportHeight});
  return scene;
}

TrialResult run_trial(const FootModel& model, const TrialConfig& trial,
                      const SolverSettings& settings) {
  TrialResult result;
  result.config = trial;
  const Scene scene = make_trial_scene(model, trial);
  try {
    const Configuration q0 =
        initial_configuration(model, scene, trial.initial_inclination, settings);
    const DynamicsState state = settle(model, scene, q0, settings);
    for (const ContactRecord& rec : state.contacts) {
      switch (rec.surface) {
        case SurfaceRole::Heel: result.f_heel += rec.normal_force; break;
        case SurfaceRole::Moving: result.f_moving += rec.normal_force; break;
        case SurfaceRole::Metatarsus: result.f_metatarsus += rec.normal_force; break;
        case SurfaceRole::Ground: result.ground_force += rec.normal_force; break;
      }
    }
    const KinematicsResult fk = forward_kinematics(model, state.q);
    for (int i = 0; i < 6; ++i)
      result.module_rotations[i] = normalize_angle(fk.sole[1 + i].rotation);
    result.closure_residual = state.closure_residual;
    result.tendon_length = state.tendon.total_length;
    result.settle_time = state.time;
    result.kinetic_energy = state.kinetic_energy;
    result.residual_force = state.residual_force_norm;
    result.final_config = state.q;
    result.converged = state.converged;
  } catch (const DivergenceError& e) {
    result.diverged = true;
    result.error = e.what();
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

std::vector<TrialResult> run_bench(const FootModel& model,
                                   const SolverSettings& settings, int workers) {
  const std::vector<TrialConfig> trials = enumerate_trials();
  std::vector<TrialResult> results(trials.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < trials.size(); ++i) {
      log_info("trial " + std::to_string(i + 1) + "/" +
               std::to_string(trials.size()));
      results[i] = run_trial(model, trials[i], settings);
    }
    return results;
  }

  // Each worker claims the next unstarted index and writes only results[i],
  // so the output ordering is independent of scheduling.
  std::atomic<std::size_t> next{0};
  const int n_threads = std::min<int>(workers, static_cast<int>(trials.size()));
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < trials.size();
           i = next.fetch_add(1))
        results[i] = run_trial(model, trials[i], settings);
    });
  for (std::thread& t : pool) t.join();
  return results;
}

ErrorReport summarize(const std::vector<TrialResult>& results,
                      const std::vector<ExperimentalRecord>& experimental) {
  ErrorReport report;
  report.baselines = published_baselines();
  report.has_experimental = !experimental.empty();
  if (!report.has_experimental) return report;

  auto find_record = [&](const TrialConfig& c) -> const ExperimentalRecord* {
    for (const ExperimentalRecord& rec : experimental)
      if (rec.position == c.position &&
          std::lround(rec.height_mm) == std::lround(c.obstacle_height * 1000.0) &&
          std::abs(rec.load - c.load) < 1e-9)
        return &rec;
    return nullptr;
  };

  std::vector<double> abs_heel, abs_moving, abs_meta, abs_total;
  int und_heel = 0, und_moving = 0, und_meta = 0, und_total = 0;
  std::array<double, 6> rot_sum{};
  int rot_n = 0;

  for (const TrialResult& r : results) {
    if (!r.error.empty()) continue;
    const ExperimentalRecord* rec = find_record(r.config);
    if (!rec) continue;

    TrialErrors te;
    te.config = r.config;
    te.e_heel = relative_error(r.f_heel, rec->f_heel);
    te.e_moving = relative_error(r.f_moving, rec->f_moving);
    te.e_metatarsus = relative_error(r.f_metatarsus, rec->f_metatarsus);
    te.e_total = total_force_error({r.f_heel, r.f_moving, r.f_metatarsus},
                                   {rec->f_heel, rec->f_moving, rec->f_metatarsus});
    te.rotation_errors =
        rotation_errors(r.module_rotations, rec->module_rotations, &te.rotation_offset);
    te.has_rotations = true;

    if (te.e_heel) abs_heel.push_back(std::abs(*te.e_heel)); else ++und_heel;
    if (te.e_moving) abs_moving.push_back(std::abs(*te.e_moving)); else ++und_moving;
    if (te.e_metatarsus) abs_meta.push_back(std::abs(*te.e_metatarsus)); else ++und_meta;
    if (te.e_total) abs_total.push_back(std::abs(*te.e_total)); else ++und_total;
    for (int i = 0; i < 6; ++i) rot_sum[i] += std::abs(te.rotation_errors[i]);
    ++rot_n;
    report.trials.push_back(std::move(te));
  }

  report.heel = component_errors(abs_heel, und_heel);
  report.moving = component_errors(abs_moving, und_moving);
  report.metatarsus = component_errors(abs_meta, und_meta);
  report.total = component_errors(abs_total, und_total);
  if (rot_n > 0)
    for (int i = 0; i < 6; ++i)
      report.rotation_mean_abs_error[i] = rot_sum[i] / rot_n;
  return report;
}

std::vector<BaselineRow> published_baselines() {
  return {
      {"MuJoCo", 14.6, 33.2, 21.7},
      {"MuJoCo Filtered", 10.5, 21.2, 13.1},
      {"Analytical", 31.0, 59.5, 7.2},
      {"Analytical Filtered", 22.4, 54.5, 5.2},
  };
}

std::vector<SensitivityRow> sensitivity_sweep(
    const FootModel& model, const SolverSettings& settings,
    const std::vector<ExperimentalRecord>& experimental,
    const std::vector<std::pair<std::string, double>>& perturbations,
    int workers) {
  const std::vector<TrialResult> baseline_results =
      run_bench(model, settings, workers);

  // Without experimental data the unperturbed run is the reference, so the
  // rows measure pure setup-induced drift.
  std::vector<ExperimentalRecord> reference = experimental;
  if (reference.empty()) {
    for (const TrialResult& r : baseline_results) {
      ExperimentalRecord rec;
      rec.load = r.config.load;
      rec.height_mm = r.config.obstacle_height * 1000.0;
      rec.position = r.config.position;
      rec.f_heel = r.f_heel;
      rec.f_moving = r.f_moving;
      rec.f_metatarsus = r.f_metatarsus;
      rec.module_rotations = r.module_rotations;
      reference.push_back(rec);
    }
  }
  const ErrorReport base = summarize(baseline_results, reference);

  std::vector<SensitivityRow> rows;
  for (const auto& [parameter, value] : perturbations) {
    std::vector<TrialConfig> trials = enumerate_trials();
    for (TrialConfig& t : trials) {
      if (parameter == "heel_dx_mm") t.heel_dx = value / 1000.0;
      else if (parameter == "meta_dx_mm") t.meta_dx = value / 1000.0;
      else if (parameter == "incline_deg") t.initial_inclination = value * M_PI / 180.0;
      else throw std::invalid_argument("unknown sensitivity parameter: " + parameter);
    }

    std::vector<TrialResult> results(trials.size());
    if (workers <= 1) {
      for (std::size_t i = 0; i < trials.size(); ++i)
        results[i] = run_trial(model, trials[i], settings);
    } else {
      std::atomic<std::size_t> next{0};
      const int n_threads = std::min<int>(workers, static_cast<int>(trials.size()));
      std::vector<std::thread> pool;
      for (int t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
          for (std::size_t i = next.fetch_add(1); i < trials.size();
               i = next.fetch_add(1))
            results[i] = run_trial(model, trials[i], settings);
        });
      for (std::thread& t : pool) t.join();
    }

    const ErrorReport perturbed = summarize(results, reference);
    SensitivityRow row;
    row.parameter = parameter;
    row.value = value;
    row.delta_heel_pct =
        perturbed.heel.unfiltered_mean_pct - base.heel.unfiltered_mean_pct;
    row.delta_moving_pct =
        perturbed.moving.unfiltered_mean_pct - base.moving.unfiltered_mean_pct;
    row.delta_metatarsus_pct = perturbed.metatarsus.unfiltered_mean_pct -
                               base.metatarsus.unfiltered_mean_pct;
    rows.push_back(row);
    log_info("sensitivity " + parameter + " = " + std::to_string(value) + " done");
  }
  return rows;
}

std::vector<std::pair<std::string, double>> default_perturbations() {
  return {
      {"heel_dx_mm", -4.0}, {"heel_dx_mm", 4.0},
      {"meta_dx_mm", -4.0}, {"meta_dx_mm", 4.0},
      {"incline_deg", 1.0}, {"incline_deg", 2.0}, {"incline_deg", 3.0},
      {"incline_deg", 4.0}, {"incline_deg", 5.0},
  };
}

}  // namespace softfoot
