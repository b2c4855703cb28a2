#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "softfoot/bench.hpp"
#include "softfoot/errors.hpp"
#include "softfoot/kinematics.hpp"
#include "softfoot/mjcf.hpp"
#include "softfoot/model.hpp"
#include "softfoot/model_io.hpp"
#include "softfoot/report.hpp"
#include "softfoot/solver.hpp"
#include "softfoot/tendon.hpp"
#include "softfoot/version.hpp"

namespace py = pybind11;
using namespace softfoot;

namespace {

py::dict trial_to_dict(const TrialResult& r) {
  py::dict d;
  d["load_N"] = r.config.load;
  d["height_mm"] = r.config.obstacle_height * 1000.0;
  d["position"] = r.config.position;
  d["f_heel_N"] = r.f_heel;
  d["f_moving_N"] = r.f_moving;
  d["f_metatarsus_N"] = r.f_metatarsus;
  d["f_ground_N"] = r.ground_force;
  d["module_rotations_rad"] = r.module_rotations;
  d["closure_residual_m"] = r.closure_residual;
  d["tendon_length_m"] = r.tendon_length;
  d["settle_time_s"] = r.settle_time;
  d["converged"] = r.converged;
  d["diverged"] = r.diverged;
  d["error"] = r.error;
  return d;
}

py::dict component_to_dict(const ComponentErrors& c) {
  py::dict d;
  d["unfiltered_mean_pct"] = c.unfiltered_mean_pct;
  d["filtered_mean_pct"] = c.filtered_mean_pct;
  d["n"] = c.n;
  d["undefined_count"] = c.undefined_count;
  return d;
}

}  // namespace

PYBIND11_MODULE(_softfoot, m) {
  m.doc() = "Planar quasi-static SoftFoot simulator";
  m.attr("__version__") = kVersion;

  py::register_exception<ParseError>(m, "ModelParseError");
  py::register_exception<GeometryError>(m, "GeometryError");
  py::register_exception<DivergenceError>(m, "SolverDivergence");

  py::class_<SolverSettings>(m, "SolverSettings")
      .def(py::init<>())
      .def_readwrite("timestep", &SolverSettings::timestep)
      .def_readwrite("duration", &SolverSettings::duration)
      .def_readwrite("global_damping", &SolverSettings::global_damping)
      .def_readwrite("convergence_ke", &SolverSettings::convergence_ke)
      .def_readwrite("contact_stiffness", &SolverSettings::contact_stiffness)
      .def_readwrite("contact_damping", &SolverSettings::contact_damping)
      .def_readwrite("loop_penalty_stiffness", &SolverSettings::loop_penalty_stiffness)
      .def_readwrite("gravity", &SolverSettings::gravity);

  py::class_<Configuration>(m, "Configuration")
      .def(py::init<>())
      .def_readwrite("slider_z", &Configuration::slider_z)
      .def_readwrite("pitch0", &Configuration::pitch0)
      .def_readwrite("arch_angle", &Configuration::arch_angle)
      .def_readonly("meta_angle", &Configuration::meta_angle)
      .def_readwrite("coupling_angles", &Configuration::coupling_angles);

  py::class_<FootModel>(m, "FootModel")
      .def_static("default", &build_default_softfoot)
      .def_static("load", &load_model, py::arg("path"))
      .def_static("from_json", &model_from_json, py::arg("text"))
      .def("save",
           [](const FootModel& model, const std::string& path) {
             save_model(model, path);
           },
           py::arg("path"))
      .def("to_json", &model_to_json)
      .def("validate",
           [](const FootModel& model) {
             std::vector<std::pair<std::string, std::string>> out;
             for (const ValidationIssue& issue : validate_model(model))
               out.emplace_back(issue.field, issue.message);
             return out;
           })
      .def("total_mass", &FootModel::total_mass)
      .def_readonly("total_length", &FootModel::total_length)
      .def_readonly("arch_span", &FootModel::arch_span);

  m.def("gent_modulus", &gent_modulus, py::arg("shore_a"),
        "Young's modulus in Pa from Shore A hardness");
  m.def("body_poses",
        [](const FootModel& model, const Configuration& q) {
          std::vector<std::tuple<std::string, double, double, double>> out;
          for (const BodyPose& pose : body_poses(model, q))
            out.emplace_back(pose.body, pose.position.x(), pose.position.y(),
                             pose.rotation);
          return out;
        },
        py::arg("model"), py::arg("q"),
        "World poses (name, x, z, pitch) for all bodies");
  m.def("loop_closure_residual", &loop_closure_residual, py::arg("model"),
        py::arg("q"));
  m.def("tendon_length",
        [](const FootModel& model, const Configuration& q) {
          return compute_tendon_path(model, q).total_length;
        },
        py::arg("model"), py::arg("q"));
  m.def("settle_flat",
        [](const FootModel& model, double load, const SolverSettings& settings) {
          Scene scene;
          scene.ground_plane = true;
          scene.load = load;
          const Configuration q0 =
              initial_configuration(model, scene, 0.0, settings);
          const DynamicsState state = settle(model, scene, q0, settings);
          py::dict d;
          d["settle_time_s"] = state.time;
          d["converged"] = state.converged;
          d["kinetic_energy_J"] = state.kinetic_energy;
          d["closure_residual_m"] = state.closure_residual;
          double ground = 0.0;
          for (const ContactRecord& rec : state.contacts)
            ground += rec.normal_force;
          d["ground_force_N"] = ground;
          return d;
        },
        py::arg("model"), py::arg("load") = 0.0,
        py::arg("settings") = SolverSettings{},
        "Settle on flat ground under a vertical load");
  m.def("run_trial",
        [](const FootModel& model, double load, double height_mm, int position,
           const SolverSettings& settings) {
          TrialConfig config;
          config.load = load;
          config.obstacle_height = height_mm / 1000.0;
          config.position = position;
          return trial_to_dict(run_trial(model, config, settings));
        },
        py::arg("model"), py::arg("load"), py::arg("height_mm"),
        py::arg("position"), py::arg("settings") = SolverSettings{});
  m.def("run_bench",
        [](const FootModel& model, const SolverSettings& settings, int workers) {
          std::vector<py::dict> out;
          for (const TrialResult& r : run_bench(model, settings, workers))
            out.push_back(trial_to_dict(r));
          return out;
        },
        py::arg("model"), py::arg("settings") = SolverSettings{},
        py::arg("workers") = 1);
  m.def("summarize_against",
        [](const FootModel& model, const SolverSettings& settings,
           const std::string& experimental_csv, int workers) {
          const auto results = run_bench(model, settings, workers);
          const auto records = load_experimental_csv(experimental_csv);
          const ErrorReport report = summarize(results, records);
          py::dict d;
          d["heel"] = component_to_dict(report.heel);
          d["moving"] = component_to_dict(report.moving);
          d["metatarsus"] = component_to_dict(report.metatarsus);
          d["total"] = component_to_dict(report.total);
          return d;
        },
        py::arg("model"), py::arg("settings"), py::arg("experimental_csv"),
        py::arg("workers") = 1);
  m.def("enumerate_trials", [] {
    std::vector<std::tuple<double, double, int>> out;
    for (const TrialConfig& t : enumerate_trials())
      out.emplace_back(t.load, t.obstacle_height * 1000.0, t.position);
    return out;
  });
  m.def("relative_error", &relative_error, py::arg("simulated"),
        py::arg("experimental"));
  m.def("mean_std_filter", &mean_std_filter, py::arg("values"));
  m.def("export_mjcf", &export_mjcf, py::arg("model"));
}
