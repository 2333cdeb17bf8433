#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string>

namespace secres {

// Gravitational constant in AU^3 / (Msun yr^2).
inline constexpr double kGravity = 4.0 * std::numbers::pi * std::numbers::pi;

struct PlanetElements {
  double m = 0.0;      // Msun
  double a = 0.0;      // AU
  double e = 0.0;
  double M = 0.0;      // mean anomaly, rad
  double omega = 0.0;  // longitude of pericenter, rad
};

struct Masses {
  double m0 = 1.0;
  std::array<double, 2> m{};
  double G = kGravity;

  double beta(int j) const { return m0 * m[j] / (m0 + m[j]); }
  double mu(int j) const { return G * (m0 + m[j]); }
};

struct SystemEntry {
  std::string name;
  double m0 = 1.0;
  std::array<PlanetElements, 2> planet{};
  double G = kGravity;
  // Reference actions for the expansion; defaults to the osculating values.
  std::optional<std::array<double, 2>> Lambda_star;

  Masses masses() const { return {m0, {planet[0].m, planet[1].m}, G}; }
};

struct PoincareState {
  std::array<double, 2> Lambda{};
  std::array<double, 2> lambda{};
  std::array<double, 2> xi{};
  std::array<double, 2> eta{};
};

using Vec2 = std::array<double, 2>;

// Heliocentric positions and conjugate momenta.
struct CartesianState {
  std::array<Vec2, 2> r{};
  std::array<Vec2, 2> p{};
  double t = 0.0;
};

double Lambda_from_a(const Masses& ms, int j, double a);
double a_from_Lambda(const Masses& ms, int j, double Lambda);

PoincareState elements_to_poincare(const SystemEntry& sys);
PoincareState elements_to_poincare(const std::array<PlanetElements, 2>& el, const Masses& ms);
// Masses are copied into the returned elements.
std::array<PlanetElements, 2> poincare_to_elements(const PoincareState& s, const Masses& ms);

// Eccentric anomaly E with E - e sin E = M.
double kepler_solve(double M, double e);

// Two-body position and velocity for gravitational parameter mu; the mass field is ignored.
void elements_to_rv(const PlanetElements& el, double mu, Vec2& r, Vec2& v);
PlanetElements rv_to_elements(const Vec2& r, const Vec2& v, double mu);

CartesianState elements_to_cartesian(const std::array<PlanetElements, 2>& el, const Masses& ms);
inline CartesianState elements_to_cartesian(const SystemEntry& sys) {
  return elements_to_cartesian(sys.planet, sys.masses());
}
// Throws std::domain_error for an unbound osculating orbit.
std::array<PlanetElements, 2> cartesian_to_elements(const CartesianState& s, const Masses& ms);

// Heliocentric three-body Hamiltonian T0 + U0 + T1 + U1.
double exact_hamiltonian(const CartesianState& s, const Masses& ms);
double keplerian_energy(const Masses& ms, int j, double Lambda);

double wrap_angle(double x);  // to [0, 2 pi)

}  // namespace secres
