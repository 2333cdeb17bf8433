#pragma once

#include <array>
#include <string>

#include "secres/elements.hpp"
#include "secres/series.hpp"

namespace secres {

struct ExpandedHamiltonian {
  std::string name;
  Masses masses;
  std::array<double, 2> Lambda_star{};
  std::array<double, 2> a_star{};
  std::array<double, 2> n_star{};
  double mu = 0.0;
  // F0(Lambda*) + n*.L + quadratic terms in L.
  PoissonSeries kepler;
  // T1 + U1, linear in L.
  PoissonSeries pert;

  PoissonSeries total() const;
  // Translated coordinates L = Lambda - Lambda*.
  PhaseState translate(const PoincareState& s) const;
  PoincareState untranslate(const PhaseState& s) const;
};

// Heliocentric position (x, y) and conjugate momentum (px, py) of one planet
// as series in (L_j, lambda_j, xi_j, eta_j) around Lambda*_j.
struct OrbitSeries {
  PoissonSeries x, y, px, py;
};

OrbitSeries kepler_orbit_series(const SystemEntry& sys, int planet, const TruncationPolicy& policy);

// The perturbation keeps at most linear terms in L regardless of the policy.
ExpandedHamiltonian expand_hamiltonian(const SystemEntry& sys,
                                       const TruncationPolicy& policy = TruncationPolicy{1, 12, 12});

// Exact heliocentric Hamiltonian at a Poincare state.
double exact_energy(const Masses& ms, const PoincareState& s);

std::array<double, 2> reference_actions(const SystemEntry& sys);

}  // namespace secres
