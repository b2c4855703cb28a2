#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <tuple>
#include <vector>

#include "softfoot/bench.hpp"
#include "softfoot/kinematics.hpp"
#include "softfoot/model.hpp"

using namespace softfoot;
using doctest::Approx;

namespace {

TrialResult make_result(const TrialConfig& config, double f_heel, double f_moving,
                        double f_metatarsus, const std::array<double, 6>& rotations) {
  TrialResult r;
  r.config = config;
  r.f_heel = f_heel;
  r.f_moving = f_moving;
  r.f_metatarsus = f_metatarsus;
  r.module_rotations = rotations;
  r.converged = true;
  return r;
}

ExperimentalRecord matching_record(const TrialResult& r) {
  ExperimentalRecord rec;
  rec.load = r.config.load;
  rec.height_mm = r.config.obstacle_height * 1000.0;
  rec.position = r.config.position;
  rec.f_heel = r.f_heel;
  rec.f_moving = r.f_moving;
  rec.f_metatarsus = r.f_metatarsus;
  rec.module_rotations = r.module_rotations;
  return rec;
}

}  // namespace

TEST_CASE("the protocol enumerates 48 unique trials load-major") {
  const auto trials = enumerate_trials();
  REQUIRE(trials.size() == 48);
  CHECK(trials[0].load == 12.0);
  CHECK(trials[0].obstacle_height == Approx(0.007).epsilon(1e-15));
  CHECK(trials[0].position == 1);
  CHECK(trials[24].load == 24.0);
  CHECK(trials[24].obstacle_height == Approx(0.007).epsilon(1e-15));
  CHECK(trials[24].position == 1);

  std::set<std::tuple<double, long, int>> seen;
  for (const TrialConfig& t : trials) {
    seen.insert({t.load, std::lround(t.obstacle_height * 1e6), t.position});
    CHECK((t.load == 12.0 || t.load == 24.0));
    CHECK(t.position >= 1);
    CHECK(t.position <= 6);
    CHECK(t.initial_inclination == 0.0);
    CHECK(t.heel_dx == 0.0);
    CHECK(t.meta_dx == 0.0);
  }
  CHECK(seen.size() == 48);
}

TEST_CASE("relative error is (sim - exp) / exp and undefined at zero") {
  REQUIRE(relative_error(6.0, 5.0).has_value());
  CHECK(*relative_error(6.0, 5.0) == 0.2);
  CHECK(*relative_error(5.0, 5.0) == 0.0);
  CHECK(*relative_error(4.0, 5.0) == Approx(-0.2).epsilon(1e-15));
  CHECK(!relative_error(1.0, 0.0).has_value());
}

TEST_CASE("the total force error compares sums") {
  CHECK(*total_force_error({5.0, 3.0, 4.0}, {6.0, 2.0, 4.0}) == 0.0);
  CHECK(*total_force_error({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(*total_force_error({6.0, 6.0, 6.0}, {5.0, 5.0, 5.0}) == 0.2);
  CHECK(!total_force_error({1.0, 2.0}, {0.0, 0.0}).has_value());
}

TEST_CASE("rotation errors remove the mean offset") {
  const std::array<double, 6> exp = {0.01, -0.02, 0.03, 0.0, 0.015, -0.005};
  std::array<double, 6> sim;
  for (int i = 0; i < 6; ++i) sim[i] = exp[i] + 0.05;

  double offset = 0.0;
  const auto errors = rotation_errors(sim, exp, &offset);
  CHECK(offset == Approx(0.05).epsilon(1e-12));
  for (double e : errors) CHECK(std::abs(e) < 1e-15);

  // Generic data: the errors are zero mean and invariant to a shift of the
  // simulated angles.
  const std::array<double, 6> skew = {0.02, 0.01, -0.03, 0.04, 0.0, -0.01};
  const auto generic = rotation_errors(skew, exp);
  double sum = 0.0;
  for (double e : generic) sum += e;
  CHECK(std::abs(sum) < 1e-12);

  std::array<double, 6> shifted;
  for (int i = 0; i < 6; ++i) shifted[i] = skew[i] + 0.7;
  const auto invariant = rotation_errors(shifted, exp);
  for (int i = 0; i < 6; ++i)
    CHECK(invariant[i] == Approx(generic[i]).epsilon(1e-12));
}

TEST_CASE("the mean + std filter drops only the far outlier") {
  const std::vector<double> values = {0.1, 0.12, 0.11, 0.5};
  const auto kept = mean_std_filter(values);
  REQUIRE(kept.size() == 3);
  CHECK(kept[0] == 0.1);
  CHECK(kept[1] == 0.12);
  CHECK(kept[2] == 0.11);

  CHECK(mean_std_filter(kept) == kept);                 // idempotent here
  CHECK(mean_std_filter({0.2, 0.2, 0.2}).size() == 3);  // no spread, no cut
  CHECK(mean_std_filter({0.4}) == std::vector<double>{0.4});
  CHECK(mean_std_filter({}).empty());
}

TEST_CASE("a trial scene holds two supports and the moving obstacle") {
  const FootModel model = build_default_softfoot();
  const FootLayout layout = compute_layout(model);
  TrialConfig trial;
  trial.load = 24.0;
  trial.obstacle_height = 0.011;
  trial.position = 5;
  trial.heel_dx = 0.004;
  trial.meta_dx = -0.004;

  const Scene scene = make_trial_scene(model, trial);
  CHECK(scene.ground_plane);
  CHECK(scene.load == 24.0);
  REQUIRE(scene.obstacles.size() == 3);

  const ObstacleSpec& heel = scene.obstacles[0];
  CHECK(heel.role == SurfaceRole::Heel);
  CHECK(heel.center_x == Approx(layout.centers[0].x() + 0.004).epsilon(1e-15));
  CHECK(heel.width == 0.020);
  CHECK(heel.height == 0.019);

  const ObstacleSpec& moving = scene.obstacles[1];
  CHECK(moving.role == SurfaceRole::Moving);
  CHECK(moving.center_x == Approx(layout.centers[5].x()).epsilon(1e-15));
  CHECK(moving.width == 0.020);
  CHECK(moving.height == 0.011);

  const ObstacleSpec& meta = scene.obstacles[2];
  CHECK(meta.role == SurfaceRole::Metatarsus);
  CHECK(meta.center_x == Approx(layout.centers[7].x() - 0.004).epsilon(1e-15));
  CHECK(meta.width == 0.020);
  CHECK(meta.height == 0.019);
}

TEST_CASE("the published comparison rows are embedded verbatim") {
  const auto rows = published_baselines();
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].model == "MuJoCo");
  CHECK(rows[0].heel_pct == 14.6);
  CHECK(rows[0].modules_pct == 33.2);
  CHECK(rows[0].metatarsus_pct == 21.7);
  CHECK(rows[1].model == "MuJoCo Filtered");
  CHECK(rows[1].heel_pct == 10.5);
  CHECK(rows[1].modules_pct == 21.2);
  CHECK(rows[1].metatarsus_pct == 13.1);
  CHECK(rows[2].model == "Analytical");
  CHECK(rows[2].heel_pct == 31.0);
  CHECK(rows[2].modules_pct == 59.5);
  CHECK(rows[2].metatarsus_pct == 7.2);
  CHECK(rows[3].model == "Analytical Filtered");
  CHECK(rows[3].heel_pct == 22.4);
  CHECK(rows[3].modules_pct == 54.5);
  CHECK(rows[3].metatarsus_pct == 5.2);
}

TEST_CASE("summaries against matching data report zero error everywhere") {
  std::vector<TrialResult> results;
  std::vector<ExperimentalRecord> experimental;
  int i = 0;
  for (const TrialConfig& config : enumerate_trials()) {
    std::array<double, 6> rotations;
    for (int j = 0; j < 6; ++j) rotations[j] = 0.01 * j + 0.001 * i;
    results.push_back(make_result(config, 10.0 + 0.1 * i, 1.0 + 0.05 * i,
                                  3.0 + 0.02 * i, rotations));
    experimental.push_back(matching_record(results.back()));
    ++i;
  }

  const ErrorReport report = summarize(results, experimental);
  CHECK(report.has_experimental);
  REQUIRE(report.trials.size() == 48);
  CHECK(report.heel.unfiltered_mean_pct == 0.0);
  CHECK(report.heel.filtered_mean_pct == 0.0);
  CHECK(report.moving.unfiltered_mean_pct == 0.0);
  CHECK(report.metatarsus.unfiltered_mean_pct == 0.0);
  CHECK(report.total.unfiltered_mean_pct == 0.0);
  CHECK(report.heel.undefined_count == 0);
  CHECK(report.heel.n == 48);
  for (double mae : report.rotation_mean_abs_error) CHECK(mae < 1e-15);
  for (const TrialErrors& t : report.trials) {
    REQUIRE(t.e_total.has_value());
    CHECK(*t.e_total == 0.0);
    CHECK(t.has_rotations);
  }
  CHECK(report.baselines.size() == 4);
}

TEST_CASE("zero reference forces are counted as undefined, not as errors") {
  std::vector<TrialResult> results;
  std::vector<ExperimentalRecord> experimental;
  for (const TrialConfig& config : enumerate_trials()) {
    results.push_back(make_result(config, 10.0, 0.5, 3.0, {}));
    experimental.push_back(matching_record(results.back()));
  }
  experimental[7].f_moving = 0.0;  // sim stays 0.5: relative error undefined

  const ErrorReport report = summarize(results, experimental);
  CHECK(report.moving.undefined_count == 1);
  CHECK(report.moving.n == 47);
  CHECK(report.heel.n == 48);
  int undefined_moving = 0;
  for (const TrialErrors& t : report.trials)
    if (!t.e_moving.has_value()) ++undefined_moving;
  CHECK(undefined_moving == 1);
}

TEST_CASE("filtering never raises a mean error") {
  std::vector<TrialResult> results;
  std::vector<ExperimentalRecord> experimental;
  int i = 0;
  for (const TrialConfig& config : enumerate_trials()) {
    results.push_back(make_result(config, 10.0, 1.0, 3.0, {}));
    ExperimentalRecord rec = matching_record(results.back());
    // Spread of mismatches, including a few gross outliers.
    rec.f_heel *= 1.0 + 0.02 * (i % 5) + (i % 11 == 0 ? 0.8 : 0.0);
    rec.f_moving *= 1.0 - 0.03 * (i % 3);
    rec.f_metatarsus *= 1.0 + 0.01 * (i % 7);
    experimental.push_back(rec);
    ++i;
  }
  const ErrorReport report = summarize(results, experimental);
  CHECK(report.heel.filtered_mean_pct <= report.heel.unfiltered_mean_pct);
  CHECK(report.moving.filtered_mean_pct <= report.moving.unfiltered_mean_pct);
  CHECK(report.metatarsus.filtered_mean_pct <= report.metatarsus.unfiltered_mean_pct);
  CHECK(report.total.filtered_mean_pct <= report.total.unfiltered_mean_pct);
  CHECK(report.heel.unfiltered_mean_pct > 0.0);
}

TEST_CASE("without experimental data only the baselines are reported") {
  std::vector<TrialResult> results;
  for (const TrialConfig& config : enumerate_trials())
    results.push_back(make_result(config, 1.0, 1.0, 1.0, {}));
  const ErrorReport report = summarize(results, {});
  CHECK(!report.has_experimental);
  CHECK(report.trials.empty());
  CHECK(report.baselines.size() == 4);
}

TEST_CASE("the standard perturbation set has nine entries") {
  const auto perturbations = default_perturbations();
  REQUIRE(perturbations.size() == 9);
  CHECK(perturbations[0] == std::pair<std::string, double>{"heel_dx_mm", -4.0});
  CHECK(perturbations[3] == std::pair<std::string, double>{"meta_dx_mm", 4.0});
  CHECK(perturbations[8] == std::pair<std::string, double>{"incline_deg", 5.0});
}

TEST_CASE("a zero perturbation reports exactly zero deltas") {
  const FootModel model = build_default_softfoot();
  SolverSettings settings;
  settings.duration = 0.15;  // identity holds at any horizon
  const auto rows = sensitivity_sweep(model, settings, {}, {{"heel_dx_mm", 0.0}}, 4);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].parameter == "heel_dx_mm");
  CHECK(rows[0].value == 0.0);
  CHECK(rows[0].delta_heel_pct == 0.0);
  CHECK(rows[0].delta_moving_pct == 0.0);
  CHECK(rows[0].delta_metatarsus_pct == 0.0);
}

TEST_CASE("shifting the heel support moves load off or onto the heel") {
  const FootModel model = build_default_softfoot();
  SolverSettings settings;
  settings.duration = 1.5;
  TrialConfig trial;
  trial.load = 24.0;
  trial.obstacle_height = 0.019;
  trial.position = 1;

  TrialConfig shifted = trial;
  shifted.heel_dx = 0.004;
  const TrialResult base = run_trial(model, trial, settings);
  const TrialResult moved = run_trial(model, shifted, settings);
  CHECK(std::abs(moved.f_heel - base.f_heel) > 0.01);
}
