#pragma once

#include <string>
#include <vector>

#include "softfoot/geometry.hpp"
#include "softfoot/kinematics.hpp"
#include "softfoot/model.hpp"

namespace softfoot {

// One circular routing element with a prescribed passing side. wrap_ccw = +1
// means the path turns counterclockwise around the circle ("under" pulleys,
// which hold the tendon down), -1 the opposite.
struct PathCircle {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  int wrap_ccw = +1;
  std::string name;
};

struct PathSegment {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  double length = 0.0;
};

struct PathArc {
  int circle_index = -1;  // into the input circle list
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  Vec2 entry = Vec2::Zero();
  Vec2 exit = Vec2::Zero();
  double wrap_angle = 0.0;  // rad, > 0 when active
  double length = 0.0;
};

// Minimal taut path from `start` to `end` over circles with prescribed sides.
// Inactive circles (the free path already honors the side) are dropped.
// Throws GeometryError when a required tangent does not exist.
struct PulleyPath {
  std::vector<PathSegment> segments;
  std::vector<PathArc> arcs;       // aligned between segments
  std::vector<int> active;         // indices of wrapped circles, path order
  double total_length = 0.0;

  // dL/d(center of circle i) and dL/d(anchor); zero for inactive circles.
  std::vector<Vec2> circle_gradients;
  Vec2 start_gradient = Vec2::Zero();
  Vec2 end_gradient = Vec2::Zero();
};

PulleyPath solve_pulley_path(const Vec2& start, const std::vector<PathCircle>& circles,
                             const Vec2& end);

// Tendon path for a model configuration: route anchors/pulleys placed by the
// current forward kinematics.
struct TendonPath {
  std::vector<PathSegment> segments;
  std::vector<PathArc> arcs;
  double total_length = 0.0;
  // Signed dL/d(theta_i) per coupling; |value| is the perpendicular distance
  // from the coupling axis to the local tendon line, the sign marks the
  // lengthening direction.
  std::array<double, kNumCouplings> moment_arms{};
};

TendonPath compute_tendon_path(const FootModel& model, const Configuration& q);
TendonPath compute_tendon_path(const FootModel& model, const Configuration& q,
                               const KinematicsResult& fk);

// Unilateral elastic tension: stiffness * max(0, length - max_length).
double tendon_tension(const TendonSpec& tendon, double path_length);

// Generalized torques on the eight couplings: -tension * dL/dtheta_i, i.e.
// opposing the path-lengthening direction.
std::array<double, kNumCouplings> tendon_joint_torques(const TendonPath& path,
                                                       double tension);

}  // namespace softfoot
