#include "softfoot/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "softfoot/errors.hpp"

namespace softfoot {

namespace {

using json = nlohmann::ordered_json;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw ParseError(where + ": expected an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw ParseError(where + ": unknown key '" + item.key() + "'");
  for (const std::string& key : allowed)
    if (!j.contains(key))
      throw ParseError(where + ": missing key '" + key + "'");
}

double number(const json& j, const std::string& where, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number())
    throw ParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::string text(const json& j, const std::string& where, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string())
    throw ParseError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

Vec2 vec2(const json& j, const std::string& where, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ParseError(where + "." + key + ": expected [x, z]");
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

ModuleSpec module_from(const json& j, const std::string& where) {
  require_keys(j, where,
               {"id", "pitch", "half_height", "mass", "collider_half_extents",
                "pulley_radius", "pulley_offset"});
  ModuleSpec m;
  m.id = text(j, where, "id");
  m.pitch = number(j, where, "pitch");
  m.half_height = number(j, where, "half_height");
  m.mass = number(j, where, "mass");
  m.collider_half_extents = vec2(j, where, "collider_half_extents");
  m.pulley_radius = number(j, where, "pulley_radius");
  m.pulley_offset = vec2(j, where, "pulley_offset");
  return m;
}

json module_to(const ModuleSpec& m) {
  json j;
  j["id"] = m.id;
  j["pitch"] = m.pitch;
  j["half_height"] = m.half_height;
  j["mass"] = m.mass;
  j["collider_half_extents"] = {m.collider_half_extents.x(),
                                m.collider_half_extents.y()};
  j["pulley_radius"] = m.pulley_radius;
  j["pulley_offset"] = {m.pulley_offset.x(), m.pulley_offset.y()};
  return j;
}

CouplingSpec coupling_from(const json& j, const std::string& where) {
  require_keys(j, where,
               {"parent", "child", "rest_angle", "lower_limit", "upper_limit",
                "joint_stiffness", "joint_damping", "limit_stiffness"});
  CouplingSpec c;
  c.parent = text(j, where, "parent");
  c.child = text(j, where, "child");
  c.rest_angle = number(j, where, "rest_angle");
  c.lower_limit = number(j, where, "lower_limit");
  c.upper_limit = number(j, where, "upper_limit");
  c.joint_stiffness = number(j, where, "joint_stiffness");
  c.joint_damping = number(j, where, "joint_damping");
  c.limit_stiffness = number(j, where, "limit_stiffness");
  return c;
}

json coupling_to(const CouplingSpec& c) {
  json j;
  j["parent"] = c.parent;
  j["child"] = c.child;
  j["rest_angle"] = c.rest_angle;
  j["lower_limit"] = c.lower_limit;
  j["upper_limit"] = c.upper_limit;
  j["joint_stiffness"] = c.joint_stiffness;
  j["joint_damping"] = c.joint_damping;
  j["limit_stiffness"] = c.limit_stiffness;
  return j;
}

BandSpec band_from(const json& j, const std::string& where) {
  require_keys(j, where,
               {"shore_a", "cross_section", "rest_length", "moment_arm", "count"});
  BandSpec b;
  b.shore_a = number(j, where, "shore_a");
  b.cross_section = number(j, where, "cross_section");
  b.rest_length = number(j, where, "rest_length");
  b.moment_arm = number(j, where, "moment_arm");
  const json& count = j.at("count");
  if (!count.is_number_integer())
    throw ParseError(where + ".count: expected an integer");
  b.count = count.get<int>();
  return b;
}

json band_to(const BandSpec& b) {
  json j;
  j["shore_a"] = b.shore_a;
  j["cross_section"] = b.cross_section;
  j["rest_length"] = b.rest_length;
  j["moment_arm"] = b.moment_arm;
  j["count"] = b.count;
  return j;
}

RigidLinkSpec link_from(const json& j, const std::string& where) {
  require_keys(j, where, {"length", "mass"});
  return RigidLinkSpec{number(j, where, "length"), number(j, where, "mass")};
}

json link_to(const RigidLinkSpec& l) {
  json j;
  j["length"] = l.length;
  j["mass"] = l.mass;
  return j;
}

TendonSpec tendon_from(const json& j, const std::string& where) {
  require_keys(j, where,
               {"route", "rest_length", "max_length", "tension_stiffness"});
  TendonSpec t;
  const json& route = j.at("route");
  if (!route.is_array())
    throw ParseError(where + ".route: expected an array");
  for (std::size_t i = 0; i < route.size(); ++i) {
    const std::string at = where + ".route[" + std::to_string(i) + "]";
    require_keys(route[i], at, {"module", "side"});
    t.route.push_back({text(route[i], at, "module"), text(route[i], at, "side")});
  }
  t.rest_length = number(j, where, "rest_length");
  t.max_length = number(j, where, "max_length");
  t.tension_stiffness = number(j, where, "tension_stiffness");
  return t;
}

json tendon_to(const TendonSpec& t) {
  json j;
  json route = json::array();
  for (const TendonWaypoint& w : t.route) {
    json entry;
    entry["module"] = w.module;
    entry["side"] = w.side;
    route.push_back(entry);
  }
  j["route"] = route;
  j["rest_length"] = t.rest_length;
  j["max_length"] = t.max_length;
  j["tension_stiffness"] = t.tension_stiffness;
  return j;
}

}  // namespace

FootModel model_from_json(const std::string& str) {
  json j;
  try {
    j = json::parse(str);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
  require_keys(j, "model",
               {"heel", "fascia", "metatarsus", "toe", "posterior_arch",
                "anterior_arch", "couplings", "bands", "tendon", "total_length",
                "arch_span"});

  FootModel m;
  m.heel = module_from(j.at("heel"), "heel");
  const json& fascia = j.at("fascia");
  if (!fascia.is_array())
    throw ParseError("fascia: expected an array");
  for (std::size_t i = 0; i < fascia.size(); ++i)
    m.fascia.push_back(
        module_from(fascia[i], "fascia[" + std::to_string(i) + "]"));
  m.metatarsus = module_from(j.at("metatarsus"), "metatarsus");
  m.toe = module_from(j.at("toe"), "toe");
  m.posterior_arch = link_from(j.at("posterior_arch"), "posterior_arch");
  m.anterior_arch = link_from(j.at("anterior_arch"), "anterior_arch");
  const json& couplings = j.at("couplings");
  if (!couplings.is_array())
    throw ParseError("couplings: expected an array");
  for (std::size_t i = 0; i < couplings.size(); ++i)
    m.couplings.push_back(
        coupling_from(couplings[i], "couplings[" + std::to_string(i) + "]"));
  const json& bands = j.at("bands");
  if (!bands.is_array())
    throw ParseError("bands: expected an array");
  for (std::size_t i = 0; i < bands.size(); ++i)
    m.bands.push_back(band_from(bands[i], "bands[" + std::to_string(i) + "]"));
  m.tendon = tendon_from(j.at("tendon"), "tendon");
  m.total_length = number(j, "model", "total_length");
  m.arch_span = number(j, "model", "arch_span");
  return m;
}

FootModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

std::string model_to_json(const FootModel& m) {
  json j;
  j["heel"] = module_to(m.heel);
  json fascia = json::array();
  for (const ModuleSpec& mod : m.fascia) fascia.push_back(module_to(mod));
  j["fascia"] = fascia;
  j["metatarsus"] = module_to(m.metatarsus);
  j["toe"] = module_to(m.toe);
  j["posterior_arch"] = link_to(m.posterior_arch);
  j["anterior_arch"] = link_to(m.anterior_arch);
  json couplings = json::array();
  for (const CouplingSpec& c : m.couplings) couplings.push_back(coupling_to(c));
  j["couplings"] = couplings;
  json bands = json::array();
  for (const BandSpec& b : m.bands) bands.push_back(band_to(b));
  j["bands"] = bands;
  j["tendon"] = tendon_to(m.tendon);
  j["total_length"] = m.total_length;
  j["arch_span"] = m.arch_span;
  return j.dump(2) + "\n";
}

void save_model(const FootModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw ParseError("cannot write model file: " + path);
  out << model_to_json(m);
}

}  // namespace softfoot
