#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "softfoot/errors.hpp"
#include "softfoot/model.hpp"
#include "softfoot/tendon.hpp"

using namespace softfoot;

namespace {

double cross_z(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double den = ab.squaredNorm();
  const double t = den > 0.0 ? std::clamp((p - a).dot(ab) / den, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

// Length of a perturbed variant of a solved path: the same wrapped circles,
// tangency points slid along each circle so every wrap grows, straight
// segments re-stretched between them. Sliding a tangency the other way would
// push the chord through the pulley, which is shorter but not a valid path,
// so only wrap-enlarging slides are drawn. Returns NaN if a chord of the
// variant still grazes a circle interior (construction failure, not a
// property of the solver).
double perturbed_length(const Vec2& start, const Vec2& end,
                        const std::vector<PathArc>& arcs, std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double length = 0.0;
  Vec2 cursor = start;
  std::vector<std::pair<Vec2, Vec2>> chords;
  for (const PathArc& arc : arcs) {
    const Vec2 r0 = arc.entry - arc.center;
    const double winding = cross_z(r0, arc.entry - cursor) >= 0.0 ? 1.0 : -1.0;
    const double phi0 = std::atan2(r0.y(), r0.x());
    const double amp = 0.4 * arc.wrap_angle;
    const double s0 = amp * unit(rng), s1 = amp * unit(rng);
    const double phi_in = phi0 - winding * s0;
    const double phi_out = phi0 + winding * (arc.wrap_angle + s1);
    const Vec2 entry = arc.center + arc.radius * Vec2(std::cos(phi_in), std::sin(phi_in));
    const Vec2 exit = arc.center + arc.radius * Vec2(std::cos(phi_out), std::sin(phi_out));
    chords.emplace_back(cursor, entry);
    length += (entry - cursor).norm() + arc.radius * (arc.wrap_angle + s0 + s1);
    cursor = exit;
  }
  chords.emplace_back(cursor, end);
  length += (end - cursor).norm();
  for (const auto& [a, b] : chords)
    for (const PathArc& arc : arcs)
      if (point_segment_distance(arc.center, a, b) < arc.radius - 1e-9)
        return std::numeric_limits<double>::quiet_NaN();
  return length;
}

}  // namespace

TEST_CASE("two bare anchors give a straight segment") {
  const PulleyPath path = solve_pulley_path(Vec2(0.0, 0.0), {}, Vec2(0.1, 0.0));
  CHECK(path.total_length == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(path.arcs.empty());
  REQUIRE(path.segments.size() == 1);
  CHECK(path.active.empty());
}

TEST_CASE("the quarter-turn wrap matches the analytic tangent construction") {
  const Vec2 a(-0.05, 0.01), b(0.01, -0.05);
  PathCircle circle;
  circle.center = Vec2(0.0, 0.0);
  circle.radius = 0.01;
  circle.name = "P";

  // The free chord keeps the circle on its left, so requiring the right side
  // forces the far wrap: two 0.05 m tangents plus a quarter arc.
  circle.wrap_ccw = -1;
  const PulleyPath wrapped = solve_pulley_path(a, {circle}, b);
  REQUIRE(wrapped.arcs.size() == 1);
  CHECK(wrapped.total_length ==
        doctest::Approx(0.11570796326794897).epsilon(1e-12));
  CHECK(wrapped.arcs[0].wrap_angle == doctest::Approx(M_PI / 2).epsilon(1e-12));
  CHECK(wrapped.active == std::vector<int>{0});

  circle.wrap_ccw = +1;
  const PulleyPath straight = solve_pulley_path(a, {circle}, b);
  CHECK(straight.arcs.empty());
  CHECK(straight.total_length == doctest::Approx((b - a).norm()).epsilon(1e-15));
}

TEST_CASE("dorsiflexing one coupling lengthens the default tendon path") {
  const FootModel model = build_default_softfoot();
  Configuration flat;
  const double flat_length = compute_tendon_path(model, flat).total_length;
  CHECK(flat_length == doctest::Approx(model.tendon.rest_length).epsilon(1e-12));

  Configuration flexed;
  flexed.coupling_angles[4] = 20.0 * M_PI / 180.0;
  CHECK(compute_tendon_path(model, flexed).total_length > flat_length + 1e-5);
}

TEST_CASE("tension is a unilateral stiff spring") {
  TendonSpec spec;
  spec.rest_length = 0.198;
  spec.max_length = 0.2;
  spec.tension_stiffness = 1e5;
  CHECK(tendon_tension(spec, spec.max_length - 0.001) == 0.0);
  CHECK(tendon_tension(spec, spec.max_length) == 0.0);
  CHECK(tendon_tension(spec, spec.max_length + 0.001) ==
        doctest::Approx(100.0).epsilon(1e-12));

  double previous = -1.0;
  for (double L = 0.19; L < 0.21; L += 1e-4) {
    const double t = tendon_tension(spec, L);
    CHECK(t >= previous);
    previous = t;
  }
}

TEST_CASE("joint torques oppose lengthening with tension times moment arm") {
  const FootModel model = build_default_softfoot();
  Configuration q;
  q.coupling_angles[2] = 0.1;
  q.coupling_angles[6] = -0.05;
  const TendonPath path = compute_tendon_path(model, q);

  const auto zero = tendon_joint_torques(path, 0.0);
  for (double torque : zero) CHECK(torque == 0.0);

  const double tension = 10.0;
  const auto torques = tendon_joint_torques(path, tension);
  for (int i = 0; i < kNumCouplings; ++i) {
    CHECK(std::abs(torques[i]) ==
          doctest::Approx(tension * std::abs(path.moment_arms[i])).epsilon(1e-12));
    CHECK(torques[i] ==
          doctest::Approx(-tension * path.moment_arms[i]).epsilon(1e-12));
  }
}

TEST_CASE("moment arms satisfy the virtual-work identity dL/dtheta") {
  const FootModel model = build_default_softfoot();
  const double h = 1e-5;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> angle(-0.15, 0.35);
  for (int trial = 0; trial < 5; ++trial) {
    Configuration q;
    if (trial > 0)
      for (int i = 0; i < kNumCouplings; ++i) q.coupling_angles[i] = angle(rng);
    const TendonPath path = compute_tendon_path(model, q);
    for (int i = 0; i < kNumCouplings; ++i) {
      Configuration plus = q, minus = q;
      plus.coupling_angles[i] += h;
      minus.coupling_angles[i] -= h;
      const TendonPath path_plus = compute_tendon_path(model, plus);
      const TendonPath path_minus = compute_tendon_path(model, minus);
      // Skip samples that straddle a wrap transition; the length has a kink
      // there and the one-sided moment arm is still correct.
      if (path_plus.arcs.size() != path.arcs.size() ||
          path_minus.arcs.size() != path.arcs.size())
        continue;
      const double fd =
          (path_plus.total_length - path_minus.total_length) / (2.0 * h);
      CHECK(std::abs(fd - path.moment_arms[i]) < 1e-4);
    }
  }
}

TEST_CASE("moment arms stay within the pulley reach of the modules") {
  const FootModel model = build_default_softfoot();
  Configuration q;
  q.coupling_angles[1] = 0.2;
  q.coupling_angles[5] = 0.3;
  const TendonPath path = compute_tendon_path(model, q);
  double max_reach = 0.0;
  for (const ModuleSpec* m : model.sole_bodies())
    max_reach = std::max(max_reach, m->pulley_offset.norm() + m->pulley_radius);
  for (int i = 0; i < kNumCouplings; ++i)
    CHECK(std::abs(path.moment_arms[i]) <= max_reach + model.heel.pitch);
}

TEST_CASE("tangency points of the solved path are locally optimal") {
  const FootModel model = build_default_softfoot();
  Configuration q;
  q.coupling_angles[3] = 0.25;
  const TendonPath path = compute_tendon_path(model, q);
  REQUIRE(!path.segments.empty());
  CHECK(!path.arcs.empty());

  const Vec2 start = path.segments.front().a;
  const Vec2 end = path.segments.back().b;
  std::mt19937 rng(99);
  int feasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double variant = perturbed_length(start, end, path.arcs, rng);
    if (std::isnan(variant)) continue;
    ++feasible;
    CHECK(variant >= path.total_length - 1e-12);
  }
  CHECK(feasible >= 90);
}

TEST_CASE("length is continuous across the wrap onset") {
  const Vec2 a(-0.1, 0.0), b(0.1, 0.0);
  auto length_with_offset = [&](double dy) {
    PathCircle circle;
    circle.center = Vec2(0.0, -0.01 + dy);
    circle.radius = 0.01;
    circle.wrap_ccw = -1;  // path passes over the circle
    circle.name = "P";
    return solve_pulley_path(a, {circle}, b).total_length;
  };
  const double below = length_with_offset(-1e-7);  // just inactive
  const double above = length_with_offset(1e-7);   // just wrapping
  CHECK(below == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(std::abs(above - below) < 1e-9);
  CHECK(length_with_offset(0.002) > 0.2);  // clearly wrapping
}

TEST_CASE("overlapping pulleys with opposed sides name the bad pair") {
  PathCircle p1, p2;
  p1.center = Vec2(-0.005, 0.0);
  p1.radius = 0.01;
  p1.wrap_ccw = +1;
  p1.name = "left_pulley";
  p2.center = Vec2(0.005, 0.0);
  p2.radius = 0.01;
  p2.wrap_ccw = -1;
  p2.name = "right_pulley";
  try {
    solve_pulley_path(Vec2(-0.1, 0.0), {p1, p2}, Vec2(0.1, 0.0));
    FAIL("expected GeometryError");
  } catch (const GeometryError& e) {
    const std::string what = e.what();
    CHECK(what.find("left_pulley") != std::string::npos);
    CHECK(what.find("right_pulley") != std::string::npos);
  }
}
