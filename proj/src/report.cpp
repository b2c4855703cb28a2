#include "softfoot/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "softfoot/errors.hpp"
#include "softfoot/version.hpp"

namespace softfoot {

namespace {

using json = nlohmann::json;  // sorted keys: canonical dumps

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, const std::string& where) {
  const std::string s = strip(raw);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": not a number: '" + s + "'");
  }
}

int parse_position(const std::string& raw, const std::string& where) {
  std::string s = strip(raw);
  if (!s.empty() && (s[0] == 'p' || s[0] == 'P')) s = s.substr(1);
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": not a position: '" + strip(raw) + "'");
  }
}

json errors_json(const ComponentErrors& c) {
  json j;
  j["filtered_mean_pct"] = c.filtered_mean_pct;
  j["n"] = c.n;
  j["undefined_count"] = c.undefined_count;
  j["unfiltered_mean_pct"] = c.unfiltered_mean_pct;
  return j;
}

// SVG helpers: fixed element order and formatted numbers keep output
// byte-identical across runs.
std::string svg_rect(double x, double y, double w, double h,
                     const std::string& fill) {
  return "<rect x=\"" + format_double(x) + "\" y=\"" + format_double(y) +
         "\" width=\"" + format_double(w) + "\" height=\"" + format_double(h) +
         "\" fill=\"" + fill + "\"/>\n";
}

std::string svg_text(double x, double y, const std::string& body,
                     const std::string& anchor = "middle", int size = 11) {
  return "<text x=\"" + format_double(x) + "\" y=\"" + format_double(y) +
         "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\">" + body + "</text>\n";
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::vector<ExperimentalRecord> read_experimental_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ExperimentalRecord> records;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = strip(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (!header_seen) {
      const auto fields = split(trimmed, ',');
      if (fields.empty() || strip(fields[0]) != "load_N")
        throw ParseError("experimental CSV: expected header starting with load_N");
      header_seen = true;
      continue;
    }
    const auto fields = split(trimmed, ',');
    if (fields.size() != 12)
      throw ParseError("experimental CSV line " + std::to_string(line_no) +
                       ": expected 12 fields, got " + std::to_string(fields.size()));
    const std::string where = "experimental CSV line " + std::to_string(line_no);
    ExperimentalRecord rec;
    rec.load = parse_number(fields[0], where);
    rec.height_mm = parse_number(fields[1], where);
    rec.position = parse_position(fields[2], where);
    if (rec.position < 1 || rec.position > kNumPositions)
      throw ParseError(where + ": position out of range 1..6");
    rec.f_heel = parse_number(fields[3], where);
    rec.f_moving = parse_number(fields[4], where);
    rec.f_metatarsus = parse_number(fields[5], where);
    for (int i = 0; i < 6; ++i)
      rec.module_rotations[i] = parse_number(fields[6 + i], where);
    records.push_back(rec);
  }
  if (!header_seen) throw ParseError("experimental CSV: empty file");
  return records;
}

std::vector<ExperimentalRecord> load_experimental_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open experimental CSV: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_experimental_csv(buffer.str());
}

std::string write_experimental_csv(const std::vector<ExperimentalRecord>& records) {
  std::string out =
      "load_N,height_mm,position,f_h,f_p,f_m,rot_m1,rot_m2,rot_m3,rot_m4,rot_m5,rot_m6\n";
  for (const ExperimentalRecord& r : records) {
    out += format_double(r.load) + "," + format_double(r.height_mm) + ",p" +
           std::to_string(r.position) + "," + format_double(r.f_heel) + "," +
           format_double(r.f_moving) + "," + format_double(r.f_metatarsus);
    for (double rot : r.module_rotations) out += "," + format_double(rot);
    out += "\n";
  }
  return out;
}

std::string write_results_csv(const std::vector<TrialResult>& results) {
  std::string out =
      "load_N,height_mm,position,f_h,f_p,f_m,rot_m1,rot_m2,rot_m3,rot_m4,rot_m5,"
      "rot_m6,f_ground,closure_residual_m,tendon_length_m,settle_time_s,"
      "kinetic_energy_J,residual_force,status\n";
  for (const TrialResult& r : results) {
    out += format_double(r.config.load) + "," +
           format_double(r.config.obstacle_height * 1000.0) + ",p" +
           std::to_string(r.config.position) + "," + format_double(r.f_heel) +
           "," + format_double(r.f_moving) + "," + format_double(r.f_metatarsus);
    for (double rot : r.module_rotations) out += "," + format_double(rot);
    out += "," + format_double(r.ground_force) + "," +
           format_double(r.closure_residual) + "," +
           format_double(r.tendon_length) + "," + format_double(r.settle_time) +
           "," + format_double(r.kinetic_energy) + "," +
           format_double(r.residual_force) + ",";
    if (!r.error.empty())
      out += r.diverged ? "diverged" : "failed";
    else
      out += r.converged ? "converged" : "not_converged";
    out += "\n";
  }
  return out;
}

std::string config_hash(const std::string& model_json, const SolverSettings& s) {
  json j;
  try {
    j["model"] = json::parse(model_json);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config hash: ") + e.what());
  }
  json cfg;
  cfg["contact_damping"] = s.contact_damping;
  cfg["contact_stiffness"] = s.contact_stiffness;
  cfg["convergence_ke"] = s.convergence_ke;
  cfg["duration"] = s.duration;
  cfg["global_damping"] = s.global_damping;
  cfg["gravity"] = s.gravity;
  cfg["ke_window"] = s.ke_window;
  cfg["loop_penalty_stiffness"] = s.loop_penalty_stiffness;
  cfg["mass_timescale"] = s.mass_timescale;
  cfg["tangential_damping"] = s.tangential_damping;
  cfg["timestep"] = s.timestep;
  j["settings"] = cfg;

  // FNV-1a over the canonical (sorted-key) dump.
  const std::string canonical = j.dump();
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buf);
}

std::string write_report_json(const RunManifest& manifest,
                              const std::vector<TrialResult>& results,
                              const ErrorReport& report) {
  json j;
  json m;
  m["config_hash"] = manifest.config_hash;
  m["duration_s"] = manifest.duration;
  m["model_path"] = manifest.model_path;
  m["timestep_s"] = manifest.timestep;
  m["tool_version"] = manifest.tool_version;
  j["manifest"] = m;

  json baselines = json::array();
  for (const BaselineRow& row : report.baselines) {
    json b;
    b["heel_pct"] = row.heel_pct;
    b["metatarsus_pct"] = row.metatarsus_pct;
    b["model"] = row.model;
    b["modules_pct"] = row.modules_pct;
    baselines.push_back(b);
  }
  j["baselines"] = baselines;

  auto errors_for = [&](const TrialConfig& c) -> const TrialErrors* {
    for (const TrialErrors& te : report.trials)
      if (te.config.position == c.position && te.config.load == c.load &&
          std::lround(te.config.obstacle_height * 1000.0) ==
              std::lround(c.obstacle_height * 1000.0))
        return &te;
    return nullptr;
  };

  json trials = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const TrialResult& r = results[i];
    json t;
    t["load_N"] = r.config.load;
    t["height_mm"] = r.config.obstacle_height * 1000.0;
    t["position"] = r.config.position;
    t["f_heel_N"] = r.f_heel;
    t["f_moving_N"] = r.f_moving;
    t["f_metatarsus_N"] = r.f_metatarsus;
    t["f_ground_N"] = r.ground_force;
    json rot = json::array();
    for (double v : r.module_rotations) rot.push_back(v);
    t["module_rotations_rad"] = rot;
    t["closure_residual_m"] = r.closure_residual;
    t["tendon_length_m"] = r.tendon_length;
    t["settle_time_s"] = r.settle_time;
    t["kinetic_energy_J"] = r.kinetic_energy;
    t["residual_force"] = r.residual_force;
    t["converged"] = r.converged;
    t["diverged"] = r.diverged;
    if (!r.error.empty()) t["error"] = r.error;
    if (const TrialErrors* te = errors_for(r.config)) {
      json e;
      if (te->e_heel) e["e_heel"] = *te->e_heel;
      if (te->e_moving) e["e_moving"] = *te->e_moving;
      if (te->e_metatarsus) e["e_metatarsus"] = *te->e_metatarsus;
      if (te->e_total) e["e_total"] = *te->e_total;
      json rot_err = json::array();
      for (double v : te->rotation_errors) rot_err.push_back(v);
      e["rotation_errors_rad"] = rot_err;
      e["rotation_offset_rad"] = te->rotation_offset;
      t["errors"] = e;
    }
    trials.push_back(t);
  }
  j["trials"] = trials;

  json summary;
  summary["has_experimental"] = report.has_experimental;
  if (report.has_experimental) {
    summary["heel"] = errors_json(report.heel);
    summary["moving"] = errors_json(report.moving);
    summary["metatarsus"] = errors_json(report.metatarsus);
    summary["total"] = errors_json(report.total);
    json rot = json::array();
    for (double v : report.rotation_mean_abs_error) rot.push_back(v);
    summary["rotation_mean_abs_error_rad"] = rot;
  }
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

std::string write_bench_svg(double load, const std::vector<TrialResult>& results,
                            const ErrorReport& report) {
  // 6 position groups x 4 height bars per component row. Errors in percent
  // when experimental data exists, settled forces in newtons otherwise.
  const char* kFills[4] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759"};
  const char* kRows[3] = {"heel", "module", "metatarsus"};
  const double width = 640.0, row_height = 150.0, margin = 48.0;
  const double height = 3 * row_height + 2 * margin;
  const bool use_errors = report.has_experimental;

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width) +
      "\" height=\"" + format_double(height) + "\" viewBox=\"0 0 " +
      format_double(width) + " " + format_double(height) + "\">\n";
  svg += svg_rect(0, 0, width, height, "#ffffff");
  svg += svg_text(width / 2, 20,
                  (use_errors ? std::string("relative force error, ")
                              : std::string("settled contact forces, ")) +
                      format_double(load) + " N",
                  "middle", 14);

  auto errors_for = [&](const TrialConfig& c) -> const TrialErrors* {
    for (const TrialErrors& te : report.trials)
      if (te.config.position == c.position && te.config.load == c.load &&
          std::lround(te.config.obstacle_height * 1000.0) ==
              std::lround(c.obstacle_height * 1000.0))
        return &te;
    return nullptr;
  };

  // Collect per-row values keyed (position, height index).
  auto value_for = [&](int row, const TrialResult& r,
                       const TrialErrors* te) -> double {
    if (use_errors && te) {
      const std::optional<double>* e =
          row == 0 ? &te->e_heel : row == 1 ? &te->e_moving : &te->e_metatarsus;
      return e->has_value() ? std::abs(**e) * 100.0 : 0.0;
    }
    return row == 0 ? r.f_heel : row == 1 ? r.f_moving : r.f_metatarsus;
  };

  for (int row = 0; row < 3; ++row) {
    const double top = margin + row * row_height;
    const double base = top + row_height - 30.0;
    double max_value = 1e-9;
    for (const TrialResult& r : results) {
      if (r.config.load != load) continue;
      max_value = std::max(
          max_value, value_for(row, r, use_errors ? errors_for(r.config) : nullptr));
    }
    svg += svg_text(8, top + 12,
                    std::string(kRows[row]) + (use_errors ? " |e| %" : " force N"),
                    "start");
    for (const TrialResult& r : results) {
      if (r.config.load != load) continue;
      const TrialErrors* te = use_errors ? errors_for(r.config) : nullptr;
      const double v = value_for(row, r, te);
      int height_idx = 0;
      for (int h = 0; h < 4; ++h)
        if (std::lround(r.config.obstacle_height * 1000.0) ==
            std::lround(kHeightsMm[h]))
          height_idx = h;
      const double group_w = (width - 2 * margin) / kNumPositions;
      const double bar_w = group_w / 5.0;
      const double x = margin + (r.config.position - 1) * group_w +
                       height_idx * bar_w;
      const double bar_h = (row_height - 50.0) * v / max_value;
      svg += svg_rect(x, base - bar_h, bar_w * 0.9, bar_h, kFills[height_idx]);
    }
    for (int p = 1; p <= kNumPositions; ++p) {
      const double group_w = (width - 2 * margin) / kNumPositions;
      svg += svg_text(margin + (p - 0.5) * group_w, base + 14,
                      "p" + std::to_string(p));
    }
  }
  for (int h = 0; h < 4; ++h) {
    const double x = margin + h * 120.0;
    svg += svg_rect(x, height - 22, 10, 10, kFills[h]);
    svg += svg_text(x + 14, height - 13,
                    format_double(kHeightsMm[h]) + " mm", "start");
  }
  svg += "</svg>\n";
  return svg;
}

std::string write_sensitivity_csv(const std::vector<SensitivityRow>& rows) {
  std::string out =
      "parameter,value,delta_heel_pct,delta_moving_pct,delta_metatarsus_pct\n";
  for (const SensitivityRow& r : rows)
    out += r.parameter + "," + format_double(r.value) + "," +
           format_double(r.delta_heel_pct) + "," +
           format_double(r.delta_moving_pct) + "," +
           format_double(r.delta_metatarsus_pct) + "\n";
  return out;
}

}  // namespace softfoot
