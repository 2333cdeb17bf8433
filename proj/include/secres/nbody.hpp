#pragma once

#include <functional>
#include <string>
#include <stdexcept>
#include <vector>

#include "secres/elements.hpp"
#include "secres/trajectory.hpp"

namespace secres {

// SBAB3 and leapfrog split the heliocentric Hamiltonian into Kepler drifts and the
// kick of T1 + U1. SBAB3C runs SBAB3 in Jacobi coordinates, where the perturbation
// depends on positions only, and adds the corrector for the mass^2 dt^2 error term.
enum class Scheme { SBAB3, SBAB3C, leapfrog };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

struct IntegratorConfig {
  Scheme scheme = Scheme::SBAB3;
  double dt = 0.0;     // yr; negative integrates backwards
  double t_end = 0.0;  // yr, measured from the initial state
  int sample_stride = 1;
};

class CloseEncounterError : public std::runtime_error {
 public:
  CloseEncounterError(double t, double separation);
  double t, separation;
};

// Default close-encounter threshold, AU.
inline constexpr double kCloseEncounter = 1e-3;

// Two-body drift of r, v = dr/dt over dt with gravitational parameter mu (f and g functions).
void kepler_drift(Vec2& r, Vec2& v, double mu, double dt);

// Heliocentric positions and velocities v_j = p_j / beta_j, so that
// massless planets stay well defined.
struct NBodyState {
  std::array<Vec2, 2> r{};
  std::array<Vec2, 2> v{};
  double t = 0.0;

  static NBodyState from_canonical(const CartesianState& s, const Masses& ms);
  CartesianState canonical(const Masses& ms) const;
};

class NBodyIntegrator {
 public:
  explicit NBodyIntegrator(const Masses& ms, Scheme scheme = Scheme::SBAB3, double encounter = kCloseEncounter);

  void step(NBodyState& s, double dt) const;
  void check_encounter(const std::array<Vec2, 2>& r, double t) const;
  // Integrates from s.t to s.t + cfg.t_end; the callback sees every sample_stride-th step and the start.
  void run(NBodyState& s, const IntegratorConfig& cfg,
           const std::function<void(const NBodyState&)>& on_sample = {}) const;

  const Masses& masses() const { return ms_; }

 private:
  struct Jacobi {
    std::array<Vec2, 2> rho{}, u{};  // Jacobi positions and velocities
  };
  Jacobi to_jacobi(const NBodyState& s) const;
  void from_jacobi(const Jacobi& J, NBodyState& s) const;

  void drift(NBodyState& s, double h) const;
  void perturbation(NBodyState& s, double h) const;
  void sbab3(NBodyState& s, double dt) const;
  void jacobi_drift(Jacobi& J, double h) const;
  // Kick of the Jacobi perturbation over h plus, when c != 0, the corrector kick of
  // c {{A, B}, B}.
  void jacobi_kick(Jacobi& J, double h, double c) const;
  void sbab3c(Jacobi& J, double dt) const;

  Masses ms_;
  Scheme scheme_;
  double encounter_;
};

struct EnergySample {
  double t = 0.0;
  double rel_err = 0.0;
};

struct NumericRun {
  SecularTrajectory trajectory;  // osculating e and delta varpi at each sample
  std::vector<EnergySample> energy;
  CartesianState final_state;
  double max_rel_energy_err = 0.0;
};

NumericRun integrate(const SystemEntry& sys, const IntegratorConfig& cfg);
NumericRun integrate(const CartesianState& start, const Masses& ms, const IntegratorConfig& cfg);

// 2 pi / n of the inner planet.
double inner_period(const SystemEntry& sys);

// Sum of r_j x p_j.
double angular_momentum(const CartesianState& s);

}  // namespace secres
