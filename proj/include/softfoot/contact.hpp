#pragma once

#include <string>
#include <vector>

#include "softfoot/geometry.hpp"

namespace softfoot {

enum class SurfaceRole { Heel, Moving, Metatarsus, Ground };

std::string surface_role_name(SurfaceRole role);

// Axis-aligned obstacle resting on the ground: top face at z = height,
// spanning [center_x - width/2, center_x + width/2].
struct ObstacleSpec {
  SurfaceRole role = SurfaceRole::Moving;
  double center_x = 0.0;  // m
  double width = 0.0;     // m
  double height = 0.0;    // m
};

// One contact per (body, surface) pair at the deepest penetrating point.
struct ContactRecord {
  int body_index = -1;          // sole body, chain order
  std::string body;             // module id
  SurfaceRole surface = SurfaceRole::Ground;
  int obstacle_index = -1;      // -1 for the ground plane
  Vec2 point = Vec2::Zero();    // m, world, deepest point
  double penetration = 0.0;     // m, > 0
  double normal_force = 0.0;    // N, filled by the solver
};

// Deepest-point contacts between sole collider boxes and the obstacle top
// surfaces plus (optionally) the ground plane z = 0. Inter-module contact is
// excluded by construction. Body ids follow chain order.
std::vector<ContactRecord> detect_contacts(const std::vector<OrientedBox>& boxes,
                                           const std::vector<std::string>& body_ids,
                                           const std::vector<ObstacleSpec>& obstacles,
                                           bool ground_plane);

// Penalty normal force max(0, k_c * penetration + c_c * approach_speed);
// approach_speed > 0 while penetrating deeper. Never attractive.
double contact_force(const ContactRecord& record, double contact_stiffness,
                     double contact_damping, double approach_speed);

}  // namespace softfoot
