#pragma once

#include <array>
#include <string>
#include <vector>

#include "softfoot/geometry.hpp"
#include "softfoot/model.hpp"

namespace softfoot {

inline constexpr int kNumSoleBodies = 9;   // heel, m1..m6, metatarsus, toe
inline constexpr int kNumCouplings = 8;    // between consecutive sole bodies
inline constexpr int kNumDofs = 10;        // slider_z, arch_angle, couplings

// Generalized coordinates. pitch0 is a fixed trial parameter (the foot is
// welded to the vertical slider at that inclination) and meta_angle is the
// realized metatarsal revolute angle, derived from the orientation-free loop
// closure; the integrated coordinates are slider_z, arch_angle and the eight
// coupling angles.
struct Configuration {
  double slider_z = 0.0;    // m
  double pitch0 = 0.0;      // rad, fixed inclination
  double arch_angle = 0.0;  // rad, posterior-anterior arch revolute
  double meta_angle = 0.0;  // rad, anterior arch-metatarsus revolute (derived)
  std::array<double, kNumCouplings> coupling_angles{};  // rad

  double slider_vel = 0.0;  // m/s
  double arch_vel = 0.0;    // rad/s
  std::array<double, kNumCouplings> coupling_vels{};  // rad/s

  Eigen::Matrix<double, kNumDofs, 1> dofs() const;
  Eigen::Matrix<double, kNumDofs, 1> vels() const;
  void set_dofs(const Eigen::Matrix<double, kNumDofs, 1>& q);
  void set_vels(const Eigen::Matrix<double, kNumDofs, 1>& v);
};

// Name of integrated coordinate i (slider_z, arch_angle, coupling_0..7).
std::string dof_name(int i);

struct BodyPose {
  std::string body;
  Vec2 position = Vec2::Zero();  // m, world
  double rotation = 0.0;         // rad, normalized to (-pi, pi]
};

// Fixed reference layout of a model: module centers and joint anchors in the
// foot frame (origin at the ankle/apex, x forward, z up), derived from the
// pitches, the arch span and the posterior arch length.
struct FootLayout {
  std::array<Vec2, kNumSoleBodies> centers{};     // module centers, foot frame
  std::array<Vec2, kNumCouplings> contacts{};     // rolling contacts, foot frame
  Vec2 apex = Vec2::Zero();                       // arch apex (= ankle)
  Vec2 metatarsal_joint = Vec2::Zero();           // on the metatarsus top face
  Vec2 heel_anchor = Vec2::Zero();                // posterior arch foot
  double anterior_ref_angle = 0.0;                // apex->metatarsal direction
};

FootLayout compute_layout(const FootModel& model);

// Relative transform across a rolling coupling for a total angle theta_total:
// two stacked hinges at the shared contact point, each rotating
// theta_total/2. Maps the child-module frame into the parent-module frame.
// parent_contact/child_contact are the contact points in the respective
// module frames.
Transform2 rolling_coupling_transform(double theta_total, const Vec2& parent_contact,
                                      const Vec2& child_contact);

struct KinematicsResult {
  std::array<Transform2, kNumSoleBodies> sole;     // world poses, chain 1
  Transform2 anterior_arch;                        // world pose, chain 2
  std::array<Vec2, kNumCouplings> contact_points;  // world rolling contacts
  Vec2 apex = Vec2::Zero();                        // world arch apex
  Vec2 metatarsal_point = Vec2::Zero();            // world metatarsal joint, chain 1
  Vec2 anterior_distal = Vec2::Zero();             // world arch distal end, chain 2
  double meta_angle = 0.0;                         // realized metatarsal angle
};

// Forward kinematics of both chains. Gravity is along -z in the world frame.
KinematicsResult forward_kinematics(const FootModel& model, const Configuration& q);

std::vector<BodyPose> body_poses(const FootModel& model, const Configuration& q);

// Euclidean distance between the anterior arch distal attachment (chain 2)
// and the metatarsal joint point (chain 1).
double loop_closure_residual(const FootModel& model, const Configuration& q);

// Oriented collider rectangles for the nine sole bodies, in chain order.
std::vector<OrientedBox> collider_boxes(const FootModel& model, const Configuration& q);

// Analytic Jacobians of the world kinematics with respect to the integrated
// coordinates [slider_z, arch_angle, coupling_0..7].
struct Jacobians {
  // d(position)/dq for each sole body origin (2 rows x kNumDofs).
  std::array<Eigen::Matrix<double, 2, kNumDofs>, kNumSoleBodies> sole_position;
  // d(rotation)/dq for each sole body.
  std::array<Eigen::Matrix<double, 1, kNumDofs>, kNumSoleBodies> sole_rotation;
  Eigen::Matrix<double, 2, kNumDofs> anterior_position;  // arch origin (apex end)
  Eigen::Matrix<double, 1, kNumDofs> anterior_rotation;
  Eigen::Matrix<double, 2, kNumDofs> anterior_distal;    // arch distal end
  Eigen::Matrix<double, 2, kNumDofs> metatarsal_point;   // closure point, chain 1
};

Jacobians compute_jacobians(const FootModel& model, const Configuration& q,
                            const KinematicsResult& fk);

// Velocity of a point rigidly attached to sole body `body_index`.
Vec2 point_velocity(const Jacobians& jac, int body_index, const KinematicsResult& fk,
                    const Vec2& world_point, const Eigen::Matrix<double, kNumDofs, 1>& v);

}  // namespace softfoot
