#pragma once

#include <string>
#include <vector>

#include "softfoot/geometry.hpp"

namespace softfoot {

// One rigid sole segment. The module frame sits at the box center, x along
// the chain; rolling contacts live on the +/- x faces. The pulley (or, for
// the first/last module of a route, the tendon anchor) is a point fixed in
// this frame.
struct ModuleSpec {
  std::string id;
  double pitch = 0.0;        // m, distance between successive rolling contacts
  double half_height = 0.0;  // m
  double mass = 0.0;         // kg
  Vec2 collider_half_extents = Vec2::Zero();  // m, oriented box half extents
  double pulley_radius = 0.0;                 // m
  Vec2 pulley_offset = Vec2::Zero();          // m, pulley/anchor center in module frame
};

// Rolling (rolamite-like) coupling between two adjacent sole bodies: two
// stacked hinges at the shared contact point, each carrying half the total
// angle. Elasticity comes from the transposed band stiffness.
struct CouplingSpec {
  std::string parent;             // module id on the heel side
  std::string child;              // module id on the toe side
  double rest_angle = 0.0;        // rad
  double lower_limit = 0.0;       // rad, anticlockwise limit (default -20 deg)
  double upper_limit = 0.0;       // rad, clockwise limit (default +90 deg)
  double joint_stiffness = 0.0;   // N*m/rad, from band_to_joint_stiffness
  double joint_damping = 0.0;     // N*m*s/rad
  double limit_stiffness = 0.0;   // N*m/rad, one-sided beyond the limits
};

// Elastic band pair wrapped around a coupling.
struct BandSpec {
  double shore_a = 0.0;        // Shore A hardness, 0 < S <= 95
  double cross_section = 0.0;  // m^2
  double rest_length = 0.0;    // m
  double moment_arm = 0.0;     // m, distance from the coupling axis
  int count = 0;               // bands per coupling
};

struct RigidLinkSpec {
  double length = 0.0;  // m
  double mass = 0.0;    // kg
};

struct TendonWaypoint {
  std::string module;  // module id
  std::string side;    // "under" or "over"; ignored for the anchor endpoints
};

// Single plantar tendon routed from an anchor in the first route module over
// pulleys to an anchor in the last route module. Unilateral: slack below
// max_length, stiff spring beyond.
struct TendonSpec {
  std::vector<TendonWaypoint> route;
  double rest_length = 0.0;        // m, path length in the flat reference pose
  double max_length = 0.0;         // m, engagement length (rest * (1 + eps))
  double tension_stiffness = 0.0;  // N/m
};

struct FootModel {
  ModuleSpec heel;
  std::vector<ModuleSpec> fascia;  // exactly 6 for the validation chain
  ModuleSpec metatarsus;
  ModuleSpec toe;
  RigidLinkSpec posterior_arch;
  RigidLinkSpec anterior_arch;
  std::vector<CouplingSpec> couplings;  // 8: heel-m1 ... metatarsus-toe
  std::vector<BandSpec> bands;          // one per coupling
  TendonSpec tendon;
  double total_length = 0.0;  // m
  double arch_span = 0.0;     // m

  // Sole bodies in chain order: heel, m1..m6, metatarsus, toe.
  std::vector<const ModuleSpec*> sole_bodies() const;
  const ModuleSpec* find_module(const std::string& id) const;
  double total_mass() const;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

// Young's modulus from Shore A hardness (Gent), in Pa. Throws
// std::domain_error outside 0 < shore_a <= 95.
double gent_modulus(double shore_a);

// Axial stiffness E*A/L0 of one band, N/m.
double band_linear_stiffness(const BandSpec& band);

// Rotational stiffness count * k_lin * moment_arm^2 transposed to the
// coupling, N*m/rad.
double band_to_joint_stiffness(const BandSpec& band);

// Default model: dimensions consistent with a 0.27 m foot with a 0.16 m arch
// span, masses totaling 0.5 kg, band-derived coupling stiffness and a plantar
// tendon woven under/over per-module pulleys.
FootModel build_default_softfoot();

// Structural checks; empty result means the model is usable.
std::vector<ValidationIssue> validate_model(const FootModel& model);

}  // namespace softfoot
