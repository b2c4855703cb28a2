#include "softfoot/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace softfoot {

std::string surface_role_name(SurfaceRole role) {
  switch (role) {
    case SurfaceRole::Heel: return "heel";
    case SurfaceRole::Moving: return "moving";
    case SurfaceRole::Metatarsus: return "metatarsus";
    case SurfaceRole::Ground: return "ground";
  }
  return "unknown";
}

namespace {

struct DeepContact {
  Vec2 point;
  double penetration = 0.0;
};

// Single contact per (box, surface): penetration is the max depth below the
// surface top; the application point is the depth-weighted centroid of all
// penetrating candidates (corners inside the strip plus edge crossings of
// the strip boundaries). The weighting reduces to the deepest corner in the
// generic tilted case, and keeps the contact torque continuous when a face
// lies flat on the surface, which would otherwise chatter between corners.
std::optional<DeepContact> probe_box(const OrientedBox& box, double z_top,
                                     double x_min, double x_max) {
  const auto corners = box.corners();
  double max_depth = 0.0;
  Vec2 weighted = Vec2::Zero();
  double weight = 0.0;
  auto consider = [&](const Vec2& p) {
    const double depth = z_top - p.y();
    if (depth <= 0.0) return;
    max_depth = std::max(max_depth, depth);
    weighted += depth * p;
    weight += depth;
  };
  for (const Vec2& c : corners)
    if (c.x() >= x_min && c.x() <= x_max) consider(c);
  for (int i = 0; i < 4; ++i) {
    const Vec2& a = corners[i];
    const Vec2& b = corners[(i + 1) % 4];
    for (const double xb : {x_min, x_max}) {
      if (!std::isfinite(xb)) continue;
      const double dx = b.x() - a.x();
      if (std::abs(dx) < 1e-15) continue;
      const double t = (xb - a.x()) / dx;
      if (t >= 0.0 && t <= 1.0) consider(a + t * (b - a));
    }
  }
  if (weight <= 0.0) return std::nullopt;
  return DeepContact{weighted / weight, max_depth};
}

}  // namespace

std::vector<ContactRecord> detect_contacts(const std::vector<OrientedBox>& boxes,
                                           const std::vector<std::string>& body_ids,
                                           const std::vector<ObstacleSpec>& obstacles,
                                           bool ground_plane) {
  std::vector<ContactRecord> records;
  for (size_t b = 0; b < boxes.size(); ++b) {
    for (size_t o = 0; o < obstacles.size(); ++o) {
      const ObstacleSpec& obs = obstacles[o];
      const double x_min = obs.center_x - obs.width / 2.0;
      const double x_max = obs.center_x + obs.width / 2.0;
      const auto hit = probe_box(boxes[b], obs.height, x_min, x_max);
      if (!hit) continue;
      ContactRecord rec;
      rec.body_index = static_cast<int>(b);
      rec.body = b < body_ids.size() ? body_ids[b] : std::to_string(b);
      rec.surface = obs.role;
      rec.obstacle_index = static_cast<int>(o);
      rec.point = hit->point;
      rec.penetration = hit->penetration;
      records.push_back(rec);
    }
    if (ground_plane) {
      const double inf = std::numeric_limits<double>::infinity();
      const auto hit = probe_box(boxes[b], 0.0, -inf, inf);
      if (!hit) continue;
      ContactRecord rec;
      rec.body_index = static_cast<int>(b);
      rec.body = b < body_ids.size() ? body_ids[b] : std::to_string(b);
      rec.surface = SurfaceRole::Ground;
      rec.obstacle_index = -1;
      rec.point = hit->point;
      rec.penetration = hit->penetration;
      records.push_back(rec);
    }
  }
  return records;
}

double contact_force(const ContactRecord& record, double contact_stiffness,
                     double contact_damping, double approach_speed) {
  const double f =
      contact_stiffness * record.penetration + contact_damping * approach_speed;
  return std::max(0.0, f);
}

}  // namespace softfoot
