#include "softfoot/mjcf.hpp"

#include <cctype>
#include <sstream>

#include "softfoot/errors.hpp"
#include "softfoot/kinematics.hpp"
#include "softfoot/report.hpp"

namespace softfoot {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return format_double(v); }

std::string vec3(double x, double z) {
  return num(x) + " 0 " + num(z);
}

// Tendon waypoint site in a module frame: the anchor point for route ends,
// the under/over tangent point for wrapped pulleys.
Vec2 route_site(const ModuleSpec& m, const std::string& side, bool endpoint) {
  if (endpoint) return m.pulley_offset;
  const double dz = side == "under" ? -m.pulley_radius : m.pulley_radius;
  return m.pulley_offset + Vec2(0.0, dz);
}

}  // namespace

std::string export_mjcf(const FootModel& model) {
  const FootLayout layout = compute_layout(model);
  const auto bodies = model.sole_bodies();

  std::ostringstream xml;
  xml << "<mujoco model=\"softfoot\">\n";
  xml << "  <compiler angle=\"radian\"/>\n";
  xml << "  <option gravity=\"0 0 -9.81\"/>\n";
  xml << "  <worldbody>\n";
  xml << "    <body name=\"slider\" pos=\"0 0 0\">\n";
  xml << "      <joint name=\"slider_z\" type=\"slide\" axis=\"0 0 1\"/>\n";
  xml << "      <geom name=\"posterior_arch\" type=\"capsule\" fromto=\""
      << vec3(0, 0) << " " << vec3(0, -model.posterior_arch.length)
      << "\" size=\"0.004\" mass=\"" << num(model.posterior_arch.mass)
      << "\"/>\n";

  // Anterior arch branch, hinged at the apex; the distal end carries the
  // connect anchor closing the loop at the metatarsal joint.
  const Vec2 distal = layout.metatarsal_joint - layout.apex;
  xml << "      <body name=\"anterior_arch\" pos=\"" << vec3(0, 0) << "\">\n";
  xml << "        <joint name=\"arch_angle\" type=\"hinge\" axis=\"0 -1 0\"/>\n";
  xml << "        <geom name=\"anterior_arch\" type=\"capsule\" fromto=\""
      << vec3(0, 0) << " " << vec3(distal.x(), distal.y())
      << "\" size=\"0.004\" mass=\"" << num(model.anterior_arch.mass)
      << "\"/>\n";
  xml << "        <site name=\"arch_distal\" pos=\""
      << vec3(distal.x(), distal.y()) << "\"/>\n";
  xml << "      </body>\n";

  // Sole chain, nested so each coupling hinge sits at the rolling contact.
  std::string indent = "      ";
  for (int i = 0; i < kNumSoleBodies; ++i) {
    const ModuleSpec& m = *bodies[i];
    const Vec2 pos = i == 0 ? layout.centers[0]
                            : Vec2(layout.centers[i] - layout.centers[i - 1]);
    xml << indent << "<body name=\"" << xml_escape(m.id) << "\" pos=\""
        << vec3(pos.x(), pos.y()) << "\">\n";
    if (i > 0) {
      const CouplingSpec& c = model.couplings[i - 1];
      const Vec2 joint_pos = layout.contacts[i - 1] - layout.centers[i];
      xml << indent << "  <joint name=\"coupling_" << (i - 1)
          << "\" type=\"hinge\" axis=\"0 -1 0\" pos=\""
          << vec3(joint_pos.x(), joint_pos.y()) << "\" range=\""
          << num(c.lower_limit) << " " << num(c.upper_limit)
          << "\" stiffness=\"" << num(c.joint_stiffness) << "\" springref=\""
          << num(c.rest_angle) << "\" damping=\"" << num(c.joint_damping)
          << "\"/>\n";
    }
    xml << indent << "  <geom name=\"" << xml_escape(m.id)
        << "_box\" type=\"box\" size=\"" << num(m.collider_half_extents.x())
        << " 0.02 " << num(m.collider_half_extents.y()) << "\" mass=\""
        << num(m.mass) << "\"/>\n";
    xml << indent << "  <geom name=\"pulley_" << xml_escape(m.id)
        << "\" type=\"cylinder\" size=\"" << num(m.pulley_radius)
        << " 0.002\" pos=\"" << vec3(m.pulley_offset.x(), m.pulley_offset.y())
        << "\" euler=\"1.5707963267948966 0 0\" contype=\"0\" conaffinity=\"0\"/>\n";
    indent += "  ";
  }
  // Close the nesting, attaching each module's tendon site before closing.
  for (int i = kNumSoleBodies - 1; i >= 0; --i) {
    indent.resize(indent.size() - 2);
    const ModuleSpec& m = *bodies[i];
    for (std::size_t r = 0; r < model.tendon.route.size(); ++r) {
      const TendonWaypoint& w = model.tendon.route[r];
      if (w.module != m.id) continue;
      const bool endpoint = r == 0 || r + 1 == model.tendon.route.size();
      const Vec2 site = route_site(m, w.side, endpoint);
      xml << indent << "  <site name=\"tendon_" << xml_escape(m.id)
          << "\" pos=\"" << vec3(site.x(), site.y()) << "\"/>\n";
    }
    xml << indent << "</body>\n";
  }
  xml << "    </body>\n";
  xml << "  </worldbody>\n";

  xml << "  <contact>\n";
  for (int i = 0; i < kNumCouplings; ++i)
    xml << "    <exclude body1=\"" << xml_escape(bodies[i]->id)
        << "\" body2=\"" << xml_escape(bodies[i + 1]->id) << "\"/>\n";
  xml << "  </contact>\n";

  xml << "  <equality>\n";
  xml << "    <connect body1=\"anterior_arch\" body2=\""
      << xml_escape(model.metatarsus.id) << "\" anchor=\""
      << vec3(distal.x(), distal.y()) << "\"/>\n";
  xml << "  </equality>\n";

  xml << "  <tendon>\n";
  xml << "    <spatial name=\"plantar_tendon\" limited=\"true\" range=\"0 "
      << num(model.tendon.max_length) << "\" stiffness=\""
      << num(model.tendon.tension_stiffness) << "\">\n";
  for (const TendonWaypoint& w : model.tendon.route)
    xml << "      <site site=\"tendon_" << xml_escape(w.module) << "\"/>\n";
  xml << "    </spatial>\n";
  xml << "  </tendon>\n";
  xml << "</mujoco>\n";
  return xml.str();
}

const XmlNode* XmlNode::first(const std::string& want) const {
  for (const auto& child : children)
    if (child->tag == want) return child.get();
  return nullptr;
}

std::vector<const XmlNode*> XmlNode::all(const std::string& want) const {
  std::vector<const XmlNode*> found;
  for (const auto& child : children) {
    if (child->tag == want) found.push_back(child.get());
    const auto nested = child->all(want);
    found.insert(found.end(), nested.begin(), nested.end());
  }
  return found;
}

std::string XmlNode::attr(const std::string& name, const std::string& fallback) const {
  const auto it = attributes.find(name);
  return it == attributes.end() ? fallback : it->second;
}

namespace {

struct XmlCursor {
  const std::string& text;
  std::size_t pos = 0;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void skip_space() {
    while (!eof() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool consume(const std::string& token) {
    if (text.compare(pos, token.size(), token) == 0) {
      pos += token.size();
      return true;
    }
    return false;
  }
  std::string name() {
    const std::size_t start = pos;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                      text[pos] == '_' || text[pos] == '-' || text[pos] == ':'))
      ++pos;
    if (pos == start) throw ParseError("XML: expected a name at offset " +
                                       std::to_string(pos));
    return text.substr(start, pos - start);
  }
};

std::string xml_unescape(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    if (s.compare(i, 5, "&amp;") == 0) { out += '&'; i += 4; }
    else if (s.compare(i, 4, "&lt;") == 0) { out += '<'; i += 3; }
    else if (s.compare(i, 4, "&gt;") == 0) { out += '>'; i += 3; }
    else if (s.compare(i, 6, "&quot;") == 0) { out += '"'; i += 5; }
    else out += s[i];
  }
  return out;
}

std::unique_ptr<XmlNode> parse_element(XmlCursor& cur);

void parse_children(XmlCursor& cur, XmlNode& node) {
  while (true) {
    cur.skip_space();
    if (cur.eof()) throw ParseError("XML: unexpected end inside <" + node.tag + ">");
    if (cur.text.compare(cur.pos, 4, "<!--") == 0) {
      const auto end = cur.text.find("-->", cur.pos);
      if (end == std::string::npos) throw ParseError("XML: unterminated comment");
      cur.pos = end + 3;
      continue;
    }
    if (cur.text.compare(cur.pos, 2, "</") == 0) {
      cur.pos += 2;
      const std::string closing = cur.name();
      cur.skip_space();
      if (!cur.consume(">"))
        throw ParseError("XML: malformed closing tag </" + closing);
      if (closing != node.tag)
        throw ParseError("XML: mismatched </" + closing + "> inside <" +
                         node.tag + ">");
      return;
    }
    if (cur.peek() == '<') {
      node.children.push_back(parse_element(cur));
      continue;
    }
    // Bare text content is ignored; our writer never emits any.
    while (!cur.eof() && cur.peek() != '<') ++cur.pos;
  }
}

std::unique_ptr<XmlNode> parse_element(XmlCursor& cur) {
  if (!cur.consume("<")) throw ParseError("XML: expected '<'");
  auto node = std::make_unique<XmlNode>();
  node->tag = cur.name();
  while (true) {
    cur.skip_space();
    if (cur.eof()) throw ParseError("XML: unexpected end inside <" + node->tag + ">");
    if (cur.consume("/>")) return node;
    if (cur.consume(">")) {
      parse_children(cur, *node);
      return node;
    }
    const std::string key = cur.name();
    cur.skip_space();
    if (!cur.consume("="))
      throw ParseError("XML: attribute '" + key + "' missing '='");
    cur.skip_space();
    if (!cur.consume("\""))
      throw ParseError("XML: attribute '" + key + "' missing opening quote");
    const std::size_t end = cur.text.find('"', cur.pos);
    if (end == std::string::npos)
      throw ParseError("XML: attribute '" + key + "' missing closing quote");
    node->attributes[key] = xml_unescape(cur.text.substr(cur.pos, end - cur.pos));
    cur.pos = end + 1;
  }
}

double second_number(const std::string& pair) {
  std::istringstream in(pair);
  double a = 0.0, b = 0.0;
  in >> a >> b;
  return b;
}

}  // namespace

std::unique_ptr<XmlNode> parse_xml(const std::string& text) {
  XmlCursor cur{text};
  cur.skip_space();
  while (cur.text.compare(cur.pos, 2, "<?") == 0) {
    const auto end = cur.text.find("?>", cur.pos);
    if (end == std::string::npos) throw ParseError("XML: unterminated declaration");
    cur.pos = end + 2;
    cur.skip_space();
  }
  auto root = parse_element(cur);
  cur.skip_space();
  if (!cur.eof()) throw ParseError("XML: trailing content after the root element");
  return root;
}

MjcfSummary summarize_mjcf(const std::string& text) {
  const auto root = parse_xml(text);
  MjcfSummary summary;
  summary.body_count = static_cast<int>(root->all("body").size());
  for (const XmlNode* joint : root->all("joint")) {
    const std::string type = joint->attr("type");
    if (type == "hinge") ++summary.hinge_count;
    if (type == "slide") ++summary.slide_count;
    const std::string name = joint->attr("name");
    if (name.rfind("coupling_", 0) == 0) {
      std::istringstream in(joint->attr("range"));
      double lo = 0.0, hi = 0.0;
      in >> lo >> hi;
      summary.coupling_ranges.emplace_back(lo, hi);
    }
  }
  summary.connect_count = static_cast<int>(root->all("connect").size());
  summary.exclude_count = static_cast<int>(root->all("exclude").size());
  if (const XmlNode* tendon = root->first("tendon")) {
    if (const XmlNode* spatial = tendon->first("spatial")) {
      summary.tendon_site_count = static_cast<int>(spatial->all("site").size());
      summary.tendon_limited = spatial->attr("limited") == "true";
      summary.tendon_range_max = second_number(spatial->attr("range"));
    }
  }
  return summary;
}

}  // namespace softfoot
