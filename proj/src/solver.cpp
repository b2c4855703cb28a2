#include "softfoot/solver.hpp"

#include <algorithm>
#include <cmath>

#include "softfoot/errors.hpp"
#include "softfoot/log.hpp"

namespace softfoot {

namespace {

std::vector<OrientedBox> boxes_from_fk(const FootModel& model,
                                       const KinematicsResult& fk) {
  const auto bodies = model.sole_bodies();
  std::vector<OrientedBox> boxes;
  boxes.reserve(kNumSoleBodies);
  for (int i = 0; i < kNumSoleBodies; ++i)
    boxes.push_back(OrientedBox{fk.sole[i].translation,
                                bodies[i]->collider_half_extents,
                                fk.sole[i].rotation});
  return boxes;
}

std::vector<std::string> body_ids(const FootModel& model) {
  std::vector<std::string> ids;
  for (const ModuleSpec* m : model.sole_bodies()) ids.push_back(m->id);
  return ids;
}

}  // namespace

Eigen::Matrix<double, kNumDofs, 1> lumped_masses(const FootModel& model,
                                                 const Scene& scene,
                                                 const SolverSettings& settings) {
  Configuration flat;
  const KinematicsResult fk = forward_kinematics(model, flat);
  const Jacobians jac = compute_jacobians(model, flat, fk);
  const auto bodies = model.sole_bodies();

  // Fictitious relaxation masses m_j = k_hat_j * tau^2, where k_hat_j bounds
  // the j-th row sum of the stiffness matrix (Gershgorin) at the reference
  // configuration: every mode of M^-1 K then satisfies omega <= 1/tau, i.e.
  // omega * dt = 0.05 at the defaults, while soft directions keep masses small
  // enough to descend quickly. Each elastic element with scalar gradient g
  // contributes k * |g_j| * sum_k |g_k| to row j. Masses do not depend on dt,
  // so timestep refinement tracks one and the same damped flow; the settled
  // equilibrium is independent of this choice altogether.
  using Row = Eigen::Matrix<double, 1, kNumDofs>;
  const double tau2 = settings.mass_timescale * settings.mass_timescale;
  const double k_c = settings.contact_stiffness;
  const double k_cl = settings.loop_penalty_stiffness;
  const double k_t = model.tendon.tension_stiffness;

  Row bound = Row::Zero();
  for (int i = 0; i < kNumCouplings; ++i)
    bound(2 + i) += model.couplings[i].joint_stiffness + model.couplings[i].limit_stiffness;

  // Loop closure: penalty on the 2-vector residual with Jacobian Jc.
  const Eigen::Matrix<double, 2, kNumDofs> closure_jac =
      jac.anterior_distal - jac.metatarsal_point;
  for (int axis = 0; axis < 2; ++axis) {
    const Row g = closure_jac.row(axis).cwiseAbs();
    bound += k_cl * g.sum() * g;
  }

  // Contacts: vertical spring at a point of each collider; the point ranges
  // over the box, so the lever on the rotation row is bounded by the half
  // diagonal. Factor 2: a body can touch an obstacle and the ground at once.
  for (int b = 0; b < kNumSoleBodies; ++b) {
    const double lever = bodies[b]->collider_half_extents.norm();
    const Row g = jac.sole_position[b].row(1).cwiseAbs() +
                  lever * jac.sole_rotation[b].cwiseAbs();
    bound += 2.0 * k_c * g.sum() * g;
  }

  // Tendon: tension spring along the path; moment arm about coupling i is
  // bounded by the reach from the rolling contact to the adjacent pulleys.
  Row arm = Row::Zero();
  for (int i = 0; i < kNumCouplings; ++i) {
    for (int b = i; b <= i + 1; ++b)
      arm(2 + i) = std::max(
          arm(2 + i), (fk.sole[b].translation - fk.contact_points[i]).norm() +
                          bodies[b]->pulley_offset.norm() + bodies[b]->pulley_radius);
  }
  bound += k_t * arm.sum() * arm;
  (void)scene;

  return tau2 * bound.transpose();
}

Eigen::Matrix<double, kNumDofs, 1> generalized_forces(
    const FootModel& model, const Scene& scene, const Configuration& q,
    const SolverSettings& settings, std::vector<ContactRecord>* contacts_out) {
  const KinematicsResult fk = forward_kinematics(model, q);
  const Jacobians jac = compute_jacobians(model, q, fk);
  const Eigen::Matrix<double, kNumDofs, 1> v = q.vels();
  const auto bodies = model.sole_bodies();

  Eigen::Matrix<double, kNumDofs, 1> Q = Eigen::Matrix<double, kNumDofs, 1>::Zero();

  // Gravity on the sole bodies (module COM at the frame origin).
  for (int b = 0; b < kNumSoleBodies; ++b)
    Q -= bodies[b]->mass * settings.gravity * jac.sole_position[b].row(1).transpose();
  // Posterior arch is welded to the slider assembly.
  Q(0) -= model.posterior_arch.mass * settings.gravity;
  // Anterior arch COM halfway along the rod.
  {
    const Eigen::Matrix<double, 1, kNumDofs> dz =
        0.5 * (jac.anterior_position.row(1) + jac.anterior_distal.row(1));
    Q -= model.anterior_arch.mass * settings.gravity * dz.transpose();
  }
  // Applied vertical load on the slider.
  Q(0) -= scene.load;

  // Coupling springs, dampers and one-sided limit torques.
  for (int i = 0; i < kNumCouplings; ++i) {
    const CouplingSpec& c = model.couplings[i];
    const double theta = q.coupling_angles[i];
    double tau = -c.joint_stiffness * (theta - c.rest_angle) -
                 c.joint_damping * q.coupling_vels[i];
    if (theta > c.upper_limit) tau -= c.limit_stiffness * (theta - c.upper_limit);
    if (theta < c.lower_limit) tau -= c.limit_stiffness * (theta - c.lower_limit);
    Q(2 + i) += tau;
  }

  // Tendon: unilateral tension opposing the path-lengthening direction.
  const TendonPath tendon = compute_tendon_path(model, q, fk);
  const double tension = tendon_tension(model.tendon, tendon.total_length);
  if (tension > 0.0)
    for (int i = 0; i < kNumCouplings; ++i)
      Q(2 + i) -= tension * tendon.moment_arms[i];

  // Loop-closure penalty at the metatarsal joint (positional only).
  {
    const Vec2 e = fk.anterior_distal - fk.metatarsal_point;
    const Eigen::Matrix<double, 2, kNumDofs> J = jac.anterior_distal - jac.metatarsal_point;
    Q -= settings.loop_penalty_stiffness * (J.transpose() * e);
  }

  // Contacts: penalty normal force at the deepest point, mapped through the
  // position Jacobian, plus a small tangential damper (never reported).
  std::vector<ContactRecord> contacts =
      detect_contacts(boxes_from_fk(model, fk), body_ids(model), scene.obstacles,
                      scene.ground_plane);
  for (ContactRecord& rec : contacts) {
    const int b = rec.body_index;
    Eigen::Matrix<double, 1, kNumDofs> dx = jac.sole_position[b].row(0);
    Eigen::Matrix<double, 1, kNumDofs> dz = jac.sole_position[b].row(1);
    const Vec2 arm = perp(rec.point - fk.sole[b].translation);
    dx += jac.sole_rotation[b] * arm.x();
    dz += jac.sole_rotation[b] * arm.y();
    const double approach_speed = -(dz * v)(0);
    const double f = contact_force(rec, settings.contact_stiffness,
                                   settings.contact_damping, approach_speed);
    rec.normal_force = f;
    Q += f * dz.transpose();
    if (f > 0.0) {
      const double vx = (dx * v)(0);
      Q -= settings.tangential_damping * vx * dx.transpose();
    }
  }
  if (contacts_out) *contacts_out = std::move(contacts);
  return Q;
}

double total_potential_energy(const FootModel& model, const Scene& scene,
                              const Configuration& q, const SolverSettings& settings) {
  const KinematicsResult fk = forward_kinematics(model, q);
  const auto bodies = model.sole_bodies();

  double pe = 0.0;
  for (int b = 0; b < kNumSoleBodies; ++b)
    pe += bodies[b]->mass * settings.gravity * fk.sole[b].translation.y();
  // Welded posterior arch: only the slider-dependent part of its COM height
  // matters; constant offsets drop out of all gradients.
  pe += model.posterior_arch.mass * settings.gravity * q.slider_z;
  pe += model.anterior_arch.mass * settings.gravity *
        (fk.apex + 0.5 * (fk.anterior_distal - fk.apex)).y();
  pe += scene.load * q.slider_z;

  for (int i = 0; i < kNumCouplings; ++i) {
    const CouplingSpec& c = model.couplings[i];
    const double theta = q.coupling_angles[i];
    const double d = theta - c.rest_angle;
    pe += 0.5 * c.joint_stiffness * d * d;
    if (theta > c.upper_limit) {
      const double e = theta - c.upper_limit;
      pe += 0.5 * c.limit_stiffness * e * e;
    }
    if (theta < c.lower_limit) {
      const double e = theta - c.lower_limit;
      pe += 0.5 * c.limit_stiffness * e * e;
    }
  }

  const TendonPath tendon = compute_tendon_path(model, q, fk);
  const double stretch = std::max(0.0, tendon.total_length - model.tendon.max_length);
  pe += 0.5 * model.tendon.tension_stiffness * stretch * stretch;

  const Vec2 e = fk.anterior_distal - fk.metatarsal_point;
  pe += 0.5 * settings.loop_penalty_stiffness * e.squaredNorm();

  const auto contacts = detect_contacts(boxes_from_fk(model, fk), body_ids(model),
                                        scene.obstacles, scene.ground_plane);
  for (const ContactRecord& rec : contacts)
    pe += 0.5 * settings.contact_stiffness * rec.penetration * rec.penetration;
  return pe;
}

void step(const FootModel& model, const Scene& scene, DynamicsState& state,
          const Eigen::Matrix<double, kNumDofs, 1>& masses,
          const SolverSettings& settings) {
  const double dt = settings.timestep;
  const Eigen::Matrix<double, kNumDofs, 1> Q =
      generalized_forces(model, scene, state.q, settings, nullptr);

  Eigen::Matrix<double, kNumDofs, 1> v = state.q.vels();
  v += dt * Q.cwiseQuotient(masses);
  v /= 1.0 + settings.global_damping * dt;
  Eigen::Matrix<double, kNumDofs, 1> x = state.q.dofs();
  x += dt * v;

  // Hard cap 5 degrees beyond the soft limits.
  const double cap = 5.0 * M_PI / 180.0;
  for (int i = 0; i < kNumCouplings; ++i) {
    const CouplingSpec& c = model.couplings[i];
    const double lo = c.lower_limit - cap, hi = c.upper_limit + cap;
    if (x(2 + i) < lo) {
      x(2 + i) = lo;
      v(2 + i) = std::max(0.0, v(2 + i));
    } else if (x(2 + i) > hi) {
      x(2 + i) = hi;
      v(2 + i) = std::min(0.0, v(2 + i));
    }
  }

  for (int j = 0; j < kNumDofs; ++j)
    if (!std::isfinite(x(j)) || !std::isfinite(v(j)))
      throw DivergenceError("solver diverged at t = " + std::to_string(state.time + dt) +
                                " s on coordinate " + dof_name(j),
                            state.time + dt, dof_name(j));

  state.q.set_dofs(x);
  state.q.set_vels(v);
  state.time += dt;
  state.kinetic_energy = 0.5 * v.dot(masses.cwiseProduct(v));
}

DynamicsState settle(const FootModel& model, const Scene& scene,
                     const Configuration& initial, const SolverSettings& settings) {
  DynamicsState state;
  state.q = initial;
  const Eigen::Matrix<double, kNumDofs, 1> masses = lumped_masses(model, scene, settings);

  double below_since = -1.0;
  const long max_steps = std::lround(settings.duration / settings.timestep);
  for (long n = 0; n < max_steps; ++n) {
    step(model, scene, state, masses, settings);
    if (state.kinetic_energy < settings.convergence_ke) {
      if (below_since < 0.0) below_since = state.time;
      if (state.time - below_since >= settings.ke_window) {
        state.converged = true;
        break;
      }
    } else {
      below_since = -1.0;
    }
  }

  // Final diagnostics: static residual (zero-velocity forces), closure
  // residual, contacts and tendon snapshot at the settled state.
  const KinematicsResult fk = forward_kinematics(model, state.q);
  state.q.meta_angle = fk.meta_angle;
  Configuration rest = state.q;
  rest.set_vels(Eigen::Matrix<double, kNumDofs, 1>::Zero());
  // Zero-velocity pass: reported contact forces are the purely elastic ones
  // and the residual is the static force imbalance.
  state.residual_force_norm =
      generalized_forces(model, scene, rest, settings, &state.contacts).norm();
  state.tendon = compute_tendon_path(model, state.q, fk);
  state.closure_residual = (fk.anterior_distal - fk.metatarsal_point).norm();
  log_debug("settle: t = " + std::to_string(state.time) +
            " s, ke = " + std::to_string(state.kinetic_energy) +
            " J, residual = " + std::to_string(state.residual_force_norm));
  return state;
}

Configuration initial_configuration(const FootModel& model, const Scene& scene,
                                    double pitch0, const SolverSettings& settings) {
  Configuration q;
  q.pitch0 = pitch0;

  // The foot hangs freely before the slider descends, so the unsupported toe
  // droops to its static balance (gravity vs coupling spring and, past the
  // limit, the limit spring). A 1-DOF bisection on the toe coordinate of the
  // contact-free force vector captures that shape.
  {
    Scene free;
    free.ground_plane = false;
    free.load = 0.0;
    const int toe = 2 + kNumCouplings - 1;
    auto torque = [&](double angle) {
      Configuration c = q;
      c.coupling_angles[kNumCouplings - 1] = angle;
      return generalized_forces(model, free, c, settings)(toe);
    };
    double lo = model.couplings[kNumCouplings - 1].lower_limit - 0.1;
    double hi = 0.0;
    if (torque(lo) > 0.0 && torque(hi) < 0.0) {
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (torque(mid) > 0.0 ? lo : hi) = mid;
      }
      q.coupling_angles[kNumCouplings - 1] = 0.5 * (lo + hi);
    }
  }

  double tallest = 0.0;
  for (const ObstacleSpec& obs : scene.obstacles) tallest = std::max(tallest, obs.height);

  double lowest = 1e9;
  for (const OrientedBox& box : collider_boxes(model, q))
    for (const Vec2& c : box.corners()) lowest = std::min(lowest, c.y());
  q.slider_z = tallest + settings.clearance - lowest;
  return q;
}

}  // namespace softfoot
