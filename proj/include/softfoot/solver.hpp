#pragma once

#include <vector>

#include "softfoot/contact.hpp"
#include "softfoot/kinematics.hpp"
#include "softfoot/model.hpp"
#include "softfoot/tendon.hpp"

namespace softfoot {

struct SolverSettings {
  double timestep = 1e-4;               // s
  double duration = 5.0;                // s, horizon per trial
  double loop_penalty_stiffness = 1e7;  // N/m, positional closure penalty
  double global_damping = 15.0;         // 1/s, velocity damping per unit mass
  double convergence_ke = 1e-8;         // J, early-exit threshold
  double ke_window = 0.1;               // s, threshold must hold this long
  double contact_stiffness = 2e5;       // N/m
  double contact_damping = 200.0;       // N*s/m
  double tangential_damping = 50.0;     // N*s/m, small horizontal damper
  double gravity = 9.81;                // m/s^2, along -z
  double mass_timescale = 2e-3;         // s, lumped mass = stiffness * timescale^2
  double clearance = 0.002;             // m, initial gap above the tallest surface
};

// Static environment plus the applied slider load.
struct Scene {
  std::vector<ObstacleSpec> obstacles;
  bool ground_plane = true;
  double load = 0.0;  // N, vertical force pulling the slider down
};

struct DynamicsState {
  Configuration q;
  double time = 0.0;            // s
  double kinetic_energy = 0.0;  // J, with the lumped relaxation masses
  std::vector<ContactRecord> contacts;  // active at the last step
  TendonPath tendon;                    // snapshot at the last step
  double residual_force_norm = 0.0;     // N (mixed units), |Q| at the last step
  double closure_residual = 0.0;        // m
  bool converged = false;
};

// Diagonal lumped generalized mass m_j = k_hat_j * mass_timescale^2, where
// k_hat_j bounds the stiffness seen by coordinate j at the reference
// configuration. Independent of the timestep, so refining dt integrates the
// same damped flow; the settled equilibrium does not depend on these values.
Eigen::Matrix<double, kNumDofs, 1> lumped_masses(const FootModel& model,
                                                 const Scene& scene,
                                                 const SolverSettings& settings);

// Generalized force vector at (q, qdot): gravity, slider load, coupling
// springs/dampers/limits, tendon, loop-closure penalty and contacts mapped
// through the position Jacobians. Fills normal forces into `contacts_out`
// when non-null.
Eigen::Matrix<double, kNumDofs, 1> generalized_forces(
    const FootModel& model, const Scene& scene, const Configuration& q,
    const SolverSettings& settings, std::vector<ContactRecord>* contacts_out = nullptr);

// Potential energy of the conservative terms (gravity, load, springs, limits,
// tendon, closure, contact penalty). generalized_forces at zero velocity is
// its negative gradient for the contact-free terms; contact forces act at a
// depth-weighted centroid, which equals the gradient of the contact penalty
// exactly when a single corner penetrates and otherwise trades a little
// exactness for a torque that stays continuous on flat faces.
double total_potential_energy(const FootModel& model, const Scene& scene,
                              const Configuration& q, const SolverSettings& settings);

// One semi-implicit Euler step: v += dt * M^-1 * Q; v /= (1 + damping * dt);
// q += dt * v. Coupling angles are hard-capped 5 degrees beyond their limits.
// Throws DivergenceError on non-finite state.
void step(const FootModel& model, const Scene& scene, DynamicsState& state,
          const Eigen::Matrix<double, kNumDofs, 1>& masses, const SolverSettings& settings);

// Damped dynamic relaxation from `initial` until the kinetic energy stays
// below convergence_ke for ke_window seconds, or the horizon ends.
DynamicsState settle(const FootModel& model, const Scene& scene,
                     const Configuration& initial, const SolverSettings& settings);

// Initial configuration for a scene: flat pose at the given inclination with
// the sole `clearance` above the tallest contact surface.
Configuration initial_configuration(const FootModel& model, const Scene& scene,
                                    double pitch0, const SolverSettings& settings);

}  // namespace softfoot
