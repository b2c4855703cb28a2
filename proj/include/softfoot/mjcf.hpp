#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "softfoot/model.hpp"

namespace softfoot {

// MJCF export: two kinematic chains (slider + posterior arch + sole chain,
// anterior arch branch), one positional connect at the metatarsal joint, one
// hinge per coupling with the full (-20 deg, 90 deg) range, adjacent-pair
// contact excludes and a spatial tendon with site waypoints, pulley cylinders
// and a length range.
std::string export_mjcf(const FootModel& model);

// Minimal XML element tree, sufficient to round-trip our own writer output.
struct XmlNode {
  std::string tag;
  std::map<std::string, std::string> attributes;
  std::vector<std::unique_ptr<XmlNode>> children;

  const XmlNode* first(const std::string& tag) const;
  std::vector<const XmlNode*> all(const std::string& tag) const;  // recursive
  std::string attr(const std::string& name, const std::string& fallback = "") const;
};

// Parses the subset of XML our writer emits. Throws ParseError on malformed
// input (unbalanced tags, bad attribute syntax).
std::unique_ptr<XmlNode> parse_xml(const std::string& text);

// Structural summary recovered from an exported document.
struct MjcfSummary {
  int body_count = 0;
  int hinge_count = 0;
  int slide_count = 0;
  int connect_count = 0;
  int exclude_count = 0;
  int tendon_site_count = 0;
  std::vector<std::pair<double, double>> coupling_ranges;  // rad
  double tendon_range_max = 0.0;  // m
  bool tendon_limited = false;
};

MjcfSummary summarize_mjcf(const std::string& text);

}  // namespace softfoot
