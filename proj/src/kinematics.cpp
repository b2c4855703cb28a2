#include "softfoot/kinematics.hpp"

#include <stdexcept>

namespace softfoot {

Eigen::Matrix<double, kNumDofs, 1> Configuration::dofs() const {
  Eigen::Matrix<double, kNumDofs, 1> q;
  q(0) = slider_z;
  q(1) = arch_angle;
  for (int i = 0; i < kNumCouplings; ++i) q(2 + i) = coupling_angles[i];
  return q;
}

Eigen::Matrix<double, kNumDofs, 1> Configuration::vels() const {
  Eigen::Matrix<double, kNumDofs, 1> v;
  v(0) = slider_vel;
  v(1) = arch_vel;
  for (int i = 0; i < kNumCouplings; ++i) v(2 + i) = coupling_vels[i];
  return v;
}

void Configuration::set_dofs(const Eigen::Matrix<double, kNumDofs, 1>& q) {
  slider_z = q(0);
  arch_angle = q(1);
  for (int i = 0; i < kNumCouplings; ++i) coupling_angles[i] = q(2 + i);
}

void Configuration::set_vels(const Eigen::Matrix<double, kNumDofs, 1>& v) {
  slider_vel = v(0);
  arch_vel = v(1);
  for (int i = 0; i < kNumCouplings; ++i) coupling_vels[i] = v(2 + i);
}

std::string dof_name(int i) {
  if (i == 0) return "slider_z";
  if (i == 1) return "arch_angle";
  return "coupling_" + std::to_string(i - 2);
}

FootLayout compute_layout(const FootModel& model) {
  const auto bodies = model.sole_bodies();
  if (bodies.size() != kNumSoleBodies)
    throw std::invalid_argument("compute_layout: expected 9 sole bodies");

  FootLayout layout;
  layout.apex = Vec2(0.0, 0.0);
  // The posterior arch descends vertically from the apex to its anchor on the
  // heel top face; the metatarsal joint sits arch_span forward on the
  // metatarsus top face.
  layout.heel_anchor = Vec2(0.0, -model.posterior_arch.length);

  // Sole bottoms aligned; walk back from the metatarsal joint so the
  // metatarsus center lands at x = arch_span.
  double back = model.heel.pitch / 2.0 + model.metatarsus.pitch / 2.0;
  for (const auto& m : model.fascia) back += m.pitch;
  const double heel_center_x = model.arch_span - back;

  const double bottom = -model.posterior_arch.length - 2.0 * model.heel.half_height;
  double x = heel_center_x - model.heel.pitch / 2.0;
  for (int i = 0; i < kNumSoleBodies; ++i) {
    const ModuleSpec& m = *bodies[i];
    layout.centers[i] = Vec2(x + m.pitch / 2.0, bottom + m.half_height);
    x += m.pitch;
  }
  for (int i = 0; i < kNumCouplings; ++i) {
    const double cz =
        (layout.centers[i].y() + layout.centers[i + 1].y()) / 2.0;
    layout.contacts[i] = Vec2(layout.centers[i].x() + bodies[i]->pitch / 2.0, cz);
  }
  layout.metatarsal_joint =
      Vec2(layout.centers[7].x(),
           layout.centers[7].y() + model.metatarsus.half_height);
  const Vec2 dir = layout.metatarsal_joint - layout.apex;
  layout.anterior_ref_angle = std::atan2(dir.y(), dir.x());
  return layout;
}

Transform2 rolling_coupling_transform(double theta_total, const Vec2& parent_contact,
                                      const Vec2& child_contact) {
  // Two stacked hinges at the contact surfaces, each rotating theta_total/2.
  // Both hinge points coincide at the assembled contact, so the composition
  // is a rotation by theta_total about it and the contact never slides.
  const double half = theta_total / 2.0;
  const Transform2 hinge_a = Transform2::rotation_about(half, parent_contact);
  const Transform2 hinge_b = Transform2::rotation_about(half, parent_contact);
  const Transform2 about_contact = hinge_a.compose(hinge_b);
  // Child frame: child_contact maps onto parent_contact before rotating.
  const Transform2 attach{parent_contact - child_contact, 0.0};
  return about_contact.compose(attach);
}

KinematicsResult forward_kinematics(const FootModel& model, const Configuration& q) {
  const FootLayout layout = compute_layout(model);
  const auto bodies = model.sole_bodies();

  KinematicsResult fk;
  // Heel assembly: welded to the slider at the fixed inclination.
  const Transform2 root{Vec2(0.0, q.slider_z), q.pitch0};
  fk.apex = root.apply(layout.apex);

  std::array<Transform2, kNumSoleBodies> local;  // module frames in foot frame
  local[0] = Transform2{layout.centers[0], 0.0};
  for (int i = 0; i < kNumCouplings; ++i) {
    const ModuleSpec& parent = *bodies[i];
    const ModuleSpec& child = *bodies[i + 1];
    const Vec2 parent_fwd(parent.pitch / 2.0,
                          (child.half_height - parent.half_height) / 2.0);
    const Vec2 child_rear(-child.pitch / 2.0,
                          (parent.half_height - child.half_height) / 2.0);
    const Transform2 rel =
        rolling_coupling_transform(q.coupling_angles[i], parent_fwd, child_rear);
    local[i + 1] = local[i].compose(rel);
  }
  for (int i = 0; i < kNumSoleBodies; ++i) fk.sole[i] = root.compose(local[i]);
  for (int i = 0; i < kNumCouplings; ++i) {
    const ModuleSpec& parent = *bodies[i];
    const ModuleSpec& child = *bodies[i + 1];
    const Vec2 parent_fwd(parent.pitch / 2.0,
                          (child.half_height - parent.half_height) / 2.0);
    fk.contact_points[i] = fk.sole[i].apply(parent_fwd);
  }

  // Chain 1 metatarsal joint: fixed on the metatarsus top face.
  fk.metatarsal_point =
      fk.sole[7].apply(Vec2(0.0, model.metatarsus.half_height));

  // Chain 2: the anterior arch hangs from the apex revolute.
  const double arch_rot = q.pitch0 + layout.anterior_ref_angle + q.arch_angle;
  fk.anterior_arch = Transform2{fk.apex, arch_rot};
  fk.anterior_distal =
      fk.apex + rot(arch_rot, Vec2(model.anterior_arch.length, 0.0));

  // Realized metatarsal revolute angle (orientation across the closure),
  // zeroed at the flat reference.
  fk.meta_angle = normalize_angle(fk.sole[7].rotation - arch_rot +
                                  layout.anterior_ref_angle);
  return fk;
}

std::vector<BodyPose> body_poses(const FootModel& model, const Configuration& q) {
  const KinematicsResult fk = forward_kinematics(model, q);
  const auto bodies = model.sole_bodies();
  std::vector<BodyPose> poses;
  poses.reserve(kNumSoleBodies + 1);
  for (int i = 0; i < kNumSoleBodies; ++i)
    poses.push_back({bodies[i]->id, fk.sole[i].translation,
                     normalize_angle(fk.sole[i].rotation)});
  poses.push_back({"anterior_arch", fk.anterior_arch.translation,
                   normalize_angle(fk.anterior_arch.rotation)});
  return poses;
}

double loop_closure_residual(const FootModel& model, const Configuration& q) {
  const KinematicsResult fk = forward_kinematics(model, q);
  return (fk.anterior_distal - fk.metatarsal_point).norm();
}

std::vector<OrientedBox> collider_boxes(const FootModel& model, const Configuration& q) {
  const KinematicsResult fk = forward_kinematics(model, q);
  const auto bodies = model.sole_bodies();
  std::vector<OrientedBox> boxes;
  boxes.reserve(kNumSoleBodies);
  for (int i = 0; i < kNumSoleBodies; ++i)
    boxes.push_back(OrientedBox{fk.sole[i].translation,
                                bodies[i]->collider_half_extents,
                                fk.sole[i].rotation});
  return boxes;
}

Jacobians compute_jacobians(const FootModel& model, const Configuration& q,
                            const KinematicsResult& fk) {
  (void)q;
  Jacobians jac;
  for (int b = 0; b < kNumSoleBodies; ++b) {
    jac.sole_position[b].setZero();
    jac.sole_rotation[b].setZero();
    jac.sole_position[b](1, 0) = 1.0;  // slider translates everything
    for (int i = 0; i < kNumCouplings && i < b; ++i) {
      const Vec2 lever = perp(fk.sole[b].translation - fk.contact_points[i]);
      jac.sole_position[b](0, 2 + i) = lever.x();
      jac.sole_position[b](1, 2 + i) = lever.y();
      jac.sole_rotation[b](0, 2 + i) = 1.0;
    }
  }
  jac.anterior_position.setZero();
  jac.anterior_rotation.setZero();
  jac.anterior_distal.setZero();
  jac.metatarsal_point.setZero();

  jac.anterior_position(1, 0) = 1.0;  // apex rides the slider
  jac.anterior_rotation(0, 1) = 1.0;
  const Vec2 distal_lever = perp(fk.anterior_distal - fk.apex);
  jac.anterior_distal(1, 0) = 1.0;
  jac.anterior_distal(0, 1) = distal_lever.x();
  jac.anterior_distal(1, 1) = distal_lever.y();

  jac.metatarsal_point(1, 0) = 1.0;
  for (int i = 0; i < 7; ++i) {
    const Vec2 lever = perp(fk.metatarsal_point - fk.contact_points[i]);
    jac.metatarsal_point(0, 2 + i) = lever.x();
    jac.metatarsal_point(1, 2 + i) = lever.y();
  }
  return jac;
}

Vec2 point_velocity(const Jacobians& jac, int body_index, const KinematicsResult& fk,
                    const Vec2& world_point, const Eigen::Matrix<double, kNumDofs, 1>& v) {
  // v_point = J_origin * v + omega x (point - origin)
  const Vec2 origin_vel(jac.sole_position[body_index].row(0) * v,
                        jac.sole_position[body_index].row(1) * v);
  const double omega = jac.sole_rotation[body_index] * v;
  return origin_vel + omega * perp(world_point - fk.sole[body_index].translation);
}

}  // namespace softfoot
