#include "softfoot/model.hpp"

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "softfoot/kinematics.hpp"
#include "softfoot/tendon.hpp"

namespace softfoot {

std::vector<const ModuleSpec*> FootModel::sole_bodies() const {
  std::vector<const ModuleSpec*> bodies;
  bodies.reserve(3 + fascia.size());
  bodies.push_back(&heel);
  for (const auto& m : fascia) bodies.push_back(&m);
  bodies.push_back(&metatarsus);
  bodies.push_back(&toe);
  return bodies;
}

const ModuleSpec* FootModel::find_module(const std::string& id) const {
  for (const ModuleSpec* m : sole_bodies())
    if (m->id == id) return m;
  return nullptr;
}

double FootModel::total_mass() const {
  double mass = posterior_arch.mass + anterior_arch.mass;
  for (const ModuleSpec* m : sole_bodies()) mass += m->mass;
  return mass;
}

double gent_modulus(double shore_a) {
  if (!(shore_a > 0.0) || !(shore_a <= 95.0))
    throw std::domain_error("gent_modulus: shore_a must satisfy 0 < S <= 95, got " +
                            std::to_string(shore_a));
  const double numerator = 0.0981 * (56.0 + 7.62336 * shore_a);
  const double denominator = 0.137505 * (254.0 - 2.54 * shore_a);
  return numerator / denominator * 1e6;  // MPa -> Pa
}

double band_linear_stiffness(const BandSpec& band) {
  if (!(band.rest_length > 0.0))
    throw std::domain_error("band_linear_stiffness: rest_length must be positive");
  return gent_modulus(band.shore_a) * band.cross_section / band.rest_length;
}

double band_to_joint_stiffness(const BandSpec& band) {
  return band.count * band_linear_stiffness(band) *
         band.moment_arm * band.moment_arm;
}

namespace {

ModuleSpec make_module(const std::string& id, double pitch, double mass,
                       double pulley_radius, const Vec2& pulley_offset) {
  ModuleSpec m;
  m.id = id;
  m.pitch = pitch;
  m.half_height = 0.010;
  m.mass = mass;
  m.collider_half_extents = Vec2(pitch / 2.0, m.half_height);
  m.pulley_radius = pulley_radius;
  m.pulley_offset = pulley_offset;
  return m;
}

}  // namespace

FootModel build_default_softfoot() {
  FootModel model;
  model.total_length = 0.27;
  model.arch_span = 0.16;

  model.heel = make_module("heel", 0.060, 0.120, 0.0025, Vec2(0.020, -0.0060));
  const double fascia_pitch = 0.0225;
  for (int i = 0; i < 6; ++i) {
    const bool shallow = (i % 2 == 0);  // m1, m3, m5
    model.fascia.push_back(make_module("m" + std::to_string(i + 1), fascia_pitch, 0.030,
                                       0.0025, Vec2(0.0, shallow ? -0.0040 : -0.0070)));
  }
  model.metatarsus = make_module("metatarsus", 0.030, 0.050, 0.0025, Vec2(0.0, -0.0040));
  model.toe = make_module("toe", 0.045, 0.050, 0.0025, Vec2(-0.010, -0.0060));

  model.posterior_arch = RigidLinkSpec{0.080, 0.050};
  // Length set below so the flat reference configuration closes the loop.
  model.anterior_arch = RigidLinkSpec{0.0, 0.050};

  BandSpec band;
  band.shore_a = 40.0;
  band.cross_section = 4e-6;
  band.rest_length = 0.020;
  band.moment_arm = 0.008;
  band.count = 2;

  const auto bodies = model.sole_bodies();
  for (int i = 0; i + 1 < static_cast<int>(bodies.size()); ++i) {
    CouplingSpec c;
    c.parent = bodies[i]->id;
    c.child = bodies[i + 1]->id;
    c.rest_angle = 0.0;
    c.lower_limit = -20.0 * M_PI / 180.0;
    c.upper_limit = 90.0 * M_PI / 180.0;
    c.joint_stiffness = band_to_joint_stiffness(band);
    c.joint_damping = 0.01;
    c.limit_stiffness = 500.0;
    model.couplings.push_back(c);
    model.bands.push_back(band);
  }

  model.tendon.route = {{"heel", "anchor"},   {"m1", "under"}, {"m2", "over"},
                        {"m3", "under"},      {"m4", "over"},  {"m5", "under"},
                        {"m6", "over"},       {"metatarsus", "under"},
                        {"toe", "anchor"}};
  model.tendon.tension_stiffness = 1e6;

  const FootLayout layout = compute_layout(model);
  model.anterior_arch.length = (layout.metatarsal_joint - layout.apex).norm();

  // Rest length from the flat reference configuration; 0.5% engagement slack.
  Configuration flat;
  model.tendon.rest_length = 1.0;  // placeholder so validation passes inside
  model.tendon.max_length = 1.0;
  const TendonPath flat_path = compute_tendon_path(model, flat);
  model.tendon.rest_length = flat_path.total_length;
  model.tendon.max_length = flat_path.total_length * 1.005;
  return model;
}

namespace {

void check_module(const ModuleSpec& m, const std::string& field,
                  std::vector<ValidationIssue>& issues) {
  if (!(m.pitch > 0.0)) issues.push_back({field + ".pitch", "must be positive"});
  if (!(m.half_height > 0.0)) issues.push_back({field + ".half_height", "must be positive"});
  if (!(m.mass > 0.0)) issues.push_back({field + ".mass", "must be positive"});
  if (!(m.collider_half_extents.x() > 0.0) || !(m.collider_half_extents.y() > 0.0))
    issues.push_back({field + ".collider_half_extents", "must be positive"});
  if (!(m.pulley_radius > 0.0))
    issues.push_back({field + ".pulley_radius", "must be positive"});
  else if (m.pulley_radius >= m.half_height)
    issues.push_back({field + ".pulley_radius", "must be smaller than half_height"});
  if (m.id.empty()) issues.push_back({field + ".id", "must be non-empty"});
}

}  // namespace

std::vector<ValidationIssue> validate_model(const FootModel& model) {
  std::vector<ValidationIssue> issues;

  check_module(model.heel, "heel", issues);
  if (model.fascia.size() != 6)
    issues.push_back({"fascia", "validation chain requires exactly 6 fascia modules, got " +
                                    std::to_string(model.fascia.size())});
  for (size_t i = 0; i < model.fascia.size(); ++i)
    check_module(model.fascia[i], "fascia[" + std::to_string(i) + "]", issues);
  check_module(model.metatarsus, "metatarsus", issues);
  check_module(model.toe, "toe", issues);

  const auto bodies = model.sole_bodies();
  std::set<std::string> ids;
  for (const ModuleSpec* m : bodies)
    if (!ids.insert(m->id).second)
      issues.push_back({"modules", "duplicate module id '" + m->id + "'"});

  if (!(model.posterior_arch.length > 0.0))
    issues.push_back({"posterior_arch.length", "must be positive"});
  if (!(model.posterior_arch.mass > 0.0))
    issues.push_back({"posterior_arch.mass", "must be positive"});
  if (!(model.anterior_arch.length > 0.0))
    issues.push_back({"anterior_arch.length", "must be positive"});
  if (!(model.anterior_arch.mass > 0.0))
    issues.push_back({"anterior_arch.mass", "must be positive"});

  const size_t expected_couplings = bodies.size() - 1;
  if (model.couplings.size() != expected_couplings)
    issues.push_back({"couplings", "expected " + std::to_string(expected_couplings) +
                                       " couplings, got " + std::to_string(model.couplings.size())});
  if (model.bands.size() != model.couplings.size())
    issues.push_back({"bands", "expected one band spec per coupling"});

  for (size_t i = 0; i < model.couplings.size(); ++i) {
    const auto& c = model.couplings[i];
    const std::string field = "couplings[" + std::to_string(i) + "]";
    if (!(c.lower_limit < c.upper_limit))
      issues.push_back({field + ".lower_limit", "limits must satisfy lower < upper"});
    if (!(c.rest_angle >= c.lower_limit && c.rest_angle <= c.upper_limit))
      issues.push_back({field + ".rest_angle", "must lie within the limits"});
    if (c.joint_stiffness < 0.0)
      issues.push_back({field + ".joint_stiffness", "must be non-negative"});
    if (c.joint_damping < 0.0)
      issues.push_back({field + ".joint_damping", "must be non-negative"});
    if (!(c.limit_stiffness > c.joint_stiffness))
      issues.push_back({field + ".limit_stiffness", "must exceed joint_stiffness"});
    if (i + 1 < bodies.size() &&
        (c.parent != bodies[i]->id || c.child != bodies[i + 1]->id))
      issues.push_back({field, "must join '" + bodies[i]->id + "' to '" +
                                   bodies[i + 1]->id + "' in chain order"});
  }

  for (size_t i = 0; i < model.bands.size(); ++i) {
    const auto& b = model.bands[i];
    const std::string field = "bands[" + std::to_string(i) + "]";
    if (!(b.shore_a > 0.0 && b.shore_a <= 95.0))
      issues.push_back({field + ".shore_a", "must satisfy 0 < S <= 95"});
    if (!(b.cross_section > 0.0))
      issues.push_back({field + ".cross_section", "must be positive"});
    if (!(b.rest_length > 0.0))
      issues.push_back({field + ".rest_length", "must be positive"});
    if (!(b.moment_arm > 0.0))
      issues.push_back({field + ".moment_arm", "must be positive"});
    if (b.count < 1) issues.push_back({field + ".count", "must be at least 1"});
  }

  // Tendon route: known modules, each visited at most twice, consecutive
  // waypoints on the same or adjacent modules.
  const auto& route = model.tendon.route;
  if (route.size() < 2) issues.push_back({"tendon.route", "needs at least two waypoints"});
  auto chain_index = [&bodies](const std::string& id) -> int {
    for (size_t k = 0; k < bodies.size(); ++k)
      if (bodies[k]->id == id) return static_cast<int>(k);
    return -1;
  };
  std::map<std::string, int> visits;
  for (size_t i = 0; i < route.size(); ++i) {
    const std::string field = "tendon.route[" + std::to_string(i) + "]";
    const int idx = chain_index(route[i].module);
    if (idx < 0) {
      issues.push_back({field, "unknown module '" + route[i].module + "'"});
      continue;
    }
    if (++visits[route[i].module] > 2)
      issues.push_back({field, "module '" + route[i].module + "' visited more than twice"});
    if (i > 0) {
      const int prev = chain_index(route[i - 1].module);
      if (prev >= 0 && std::abs(idx - prev) > 1)
        issues.push_back({field, "route skips from '" + route[i - 1].module + "' to '" +
                                     route[i].module + "'; consecutive waypoints must be on "
                                     "the same or adjacent modules"});
    }
    const bool endpoint = (i == 0 || i + 1 == route.size());
    if (!endpoint && route[i].side != "under" && route[i].side != "over")
      issues.push_back({field + ".side", "must be 'under' or 'over'"});
  }
  if (!(model.tendon.tension_stiffness > 0.0))
    issues.push_back({"tendon.tension_stiffness", "must be positive"});
  if (!(model.tendon.rest_length > 0.0))
    issues.push_back({"tendon.rest_length", "must be positive"});
  if (!(model.tendon.max_length >= model.tendon.rest_length))
    issues.push_back({"tendon.max_length", "must be at least rest_length"});

  if (!(model.total_length > 0.0))
    issues.push_back({"total_length", "must be positive"});
  if (!(model.arch_span > 0.0) || !(model.arch_span < model.total_length))
    issues.push_back({"arch_span", "must be positive and smaller than total_length"});

  double pitch_sum = 0.0;
  for (const ModuleSpec* m : bodies) pitch_sum += m->pitch;
  if (model.total_length > 0.0 &&
      std::abs(pitch_sum - model.total_length) > 0.02 * model.total_length)
    issues.push_back({"total_length", "sum of sole pitches (" + std::to_string(pitch_sum) +
                                          ") deviates from total_length by more than 2%"});
  return issues;
}

}  // namespace softfoot
