#include "softfoot/tendon.hpp"

#include <cmath>

#include "softfoot/errors.hpp"

namespace softfoot {

namespace {

constexpr double kWrapEps = 1e-12;
// Wraps computed above ~3*pi/2 are transition artifacts of the prescribed
// side (the free path already clears the circle), not real windings.
constexpr double kMaxWrap = 4.71;

struct Element {
  Vec2 center;
  double signed_radius = 0.0;  // +r wraps counterclockwise, 0 for anchors
  int circle_index = -1;
  std::string name;
};

struct Tangent {
  Vec2 from;
  Vec2 to;
  Vec2 dir;  // unit, from -> to
};

// Common tangent of two signed circles (anchors are radius-0 circles):
// contact points T = c - rho * perp(u) with a shared travel direction u.
Tangent tangent_between(const Element& a, const Element& b) {
  const Vec2 w = b.center - a.center;
  const double d2 = w.squaredNorm();
  const double drho = b.signed_radius - a.signed_radius;
  const double t2 = d2 - drho * drho;
  if (!(t2 > 0.0))
    throw GeometryError("tendon routing: tangent undefined between '" + a.name + "' and '" +
                        b.name + "': pulleys touch or overlap");
  const double t = std::sqrt(t2);
  const double phi = std::atan2(w.y(), w.x()) - std::atan2(drho, t);
  const Vec2 u(std::cos(phi), std::sin(phi));
  const Vec2 n = perp(u);
  Tangent tan;
  tan.dir = u;
  tan.from = a.center - a.signed_radius * n;
  tan.to = b.center - b.signed_radius * n;
  return tan;
}

double wrap_angle(const Element& e, const Vec2& entry, const Vec2& exit) {
  const double a_in = std::atan2((entry - e.center).y(), (entry - e.center).x());
  const double a_out = std::atan2((exit - e.center).y(), (exit - e.center).x());
  const double s = e.signed_radius >= 0.0 ? 1.0 : -1.0;
  double delta = s * (a_out - a_in);
  delta = std::fmod(delta, 2.0 * M_PI);
  if (delta < 0.0) delta += 2.0 * M_PI;
  return delta;
}

}  // namespace

PulleyPath solve_pulley_path(const Vec2& start, const std::vector<PathCircle>& circles,
                             const Vec2& end) {
  std::vector<Element> elements;
  elements.push_back({start, 0.0, -1, "start"});
  for (size_t i = 0; i < circles.size(); ++i)
    elements.push_back({circles[i].center,
                        circles[i].wrap_ccw >= 0 ? circles[i].radius : -circles[i].radius,
                        static_cast<int>(i),
                        circles[i].name.empty() ? "pulley_" + std::to_string(i)
                                                : circles[i].name});
  elements.push_back({end, 0.0, -1, "end"});

  // Drop circles whose prescribed-side wrap is not engaged, until stable.
  std::vector<Tangent> tangents;
  std::vector<double> wraps;
  for (size_t pass = 0; pass <= circles.size() + 1; ++pass) {
    tangents.clear();
    for (size_t i = 0; i + 1 < elements.size(); ++i)
      tangents.push_back(tangent_between(elements[i], elements[i + 1]));
    wraps.assign(elements.size(), 0.0);
    bool removed = false;
    std::vector<Element> next;
    next.push_back(elements.front());
    for (size_t i = 1; i + 1 < elements.size(); ++i) {
      wraps[i] = wrap_angle(elements[i], tangents[i - 1].to, tangents[i].from);
      if (wraps[i] > kWrapEps && wraps[i] < kMaxWrap)
        next.push_back(elements[i]);
      else
        removed = true;
    }
    next.push_back(elements.back());
    if (!removed) break;
    elements = std::move(next);
  }

  PulleyPath path;
  path.circle_gradients.assign(circles.size(), Vec2::Zero());
  for (size_t i = 0; i + 1 < elements.size(); ++i) {
    const Tangent& t = tangents[i];
    path.segments.push_back({t.from, t.to, (t.to - t.from).norm()});
    path.total_length += path.segments.back().length;
  }
  for (size_t i = 1; i + 1 < elements.size(); ++i) {
    const Element& e = elements[i];
    PathArc arc;
    arc.circle_index = e.circle_index;
    arc.center = e.center;
    arc.radius = std::abs(e.signed_radius);
    arc.entry = tangents[i - 1].to;
    arc.exit = tangents[i].from;
    arc.wrap_angle = wraps[i];
    arc.length = arc.radius * arc.wrap_angle;
    path.total_length += arc.length;
    path.arcs.push_back(arc);
    path.active.push_back(e.circle_index);
    // Envelope gradient: dL/d(center) = u_in - u_out.
    path.circle_gradients[e.circle_index] = tangents[i - 1].dir - tangents[i].dir;
  }
  path.start_gradient = -tangents.front().dir;
  path.end_gradient = tangents.back().dir;
  return path;
}

namespace {

int chain_index(const FootModel& model, const std::string& id) {
  const auto bodies = model.sole_bodies();
  for (size_t i = 0; i < bodies.size(); ++i)
    if (bodies[i]->id == id) return static_cast<int>(i);
  throw GeometryError("tendon route references unknown module '" + id + "'");
}

}  // namespace

TendonPath compute_tendon_path(const FootModel& model, const Configuration& q) {
  return compute_tendon_path(model, q, forward_kinematics(model, q));
}

TendonPath compute_tendon_path(const FootModel& model, const Configuration& q,
                               const KinematicsResult& fk) {
  (void)q;
  const auto& route = model.tendon.route;
  if (route.size() < 2)
    throw GeometryError("tendon route needs at least two waypoints");

  const auto bodies = model.sole_bodies();
  const int start_body = chain_index(model, route.front().module);
  const int end_body = chain_index(model, route.back().module);
  const Vec2 start = fk.sole[start_body].apply(bodies[start_body]->pulley_offset);
  const Vec2 end = fk.sole[end_body].apply(bodies[end_body]->pulley_offset);

  std::vector<PathCircle> circles;
  std::vector<int> circle_bodies;
  for (size_t i = 1; i + 1 < route.size(); ++i) {
    const int body = chain_index(model, route[i].module);
    PathCircle c;
    c.center = fk.sole[body].apply(bodies[body]->pulley_offset);
    c.radius = bodies[body]->pulley_radius;
    c.wrap_ccw = route[i].side == "over" ? -1 : +1;
    c.name = route[i].module;
    circles.push_back(c);
    circle_bodies.push_back(body);
  }

  const PulleyPath solved = solve_pulley_path(start, circles, end);

  TendonPath path;
  path.segments = solved.segments;
  path.arcs = solved.arcs;
  path.total_length = solved.total_length;

  // dL/d(theta_i): rotate everything downstream of coupling i about its
  // contact point and accumulate the envelope gradients.
  for (int i = 0; i < kNumCouplings; ++i) {
    const Vec2 pivot = fk.contact_points[i];
    double darm = 0.0;
    for (size_t k = 0; k < circles.size(); ++k)
      if (circle_bodies[k] > i)
        darm += solved.circle_gradients[k].dot(perp(circles[k].center - pivot));
    if (start_body > i) darm += solved.start_gradient.dot(perp(start - pivot));
    if (end_body > i) darm += solved.end_gradient.dot(perp(end - pivot));
    path.moment_arms[i] = darm;
  }
  return path;
}

double tendon_tension(const TendonSpec& tendon, double path_length) {
  return tendon.tension_stiffness * std::max(0.0, path_length - tendon.max_length);
}

std::array<double, kNumCouplings> tendon_joint_torques(const TendonPath& path,
                                                       double tension) {
  std::array<double, kNumCouplings> torques{};
  for (int i = 0; i < kNumCouplings; ++i) torques[i] = -tension * path.moment_arms[i];
  return torques;
}

}  // namespace softfoot
