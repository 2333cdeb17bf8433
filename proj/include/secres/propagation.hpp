#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "secres/birkhoff.hpp"
#include "secres/diagonalize.hpp"
#include "secres/elements.hpp"
#include "secres/expansion.hpp"
#include "secres/normal_form.hpp"
#include "secres/trajectory.hpp"

namespace secres {

struct ChainOptions {
  int order = 2;  // in the masses
  std::optional<int> K_F, K_S;  // default from the resonance selection
  int birkhoff_order = 10;
  TruncationPolicy policy{1, 12, 12};
  // Order one only: start from T_O2^-1 of the initial conditions instead of the
  // original ones.
  bool order1_mean_initial = false;
  // Order two is refused when the proximity delta of chi1 exceeds this.
  double near_identity_limit = 0.26;
};

// Elements -> Poincare -> translation -> T_O2^-1 -> D^-1 -> complex normal variables
// -> Birkhoff. Each stage keeps what it needs to run backwards.
struct TransformChain {
  int order = 1;
  Masses masses;
  ExpandedHamiltonian H;
  std::optional<GeneratingPair> gen;  // present for order 2 (and for order1_mean_initial)
  bool apply_gen_on_input = false;
  SecularHamiltonian secular;
  DiagonalizingMap D;
  ComplexSeries secular_action_angle;
  BirkhoffForm birkhoff;
  BirkhoffMaps maps;
  std::vector<std::string> warnings;
};

// Throws NotNearIdentityError when order two is refused, BirkhoffResonanceError or
// ResonantDivisorError on small divisors.
TransformChain build_chain(const SystemEntry& sys, const ChainOptions& opt = {});

struct ActionAngle {
  std::array<double, 2> I{};
  std::array<double, 2> phi{};
  PhaseState fast;  // translated state after T_O2^-1; its L and lambda feed the way back
};

// Secular state (xi, eta) of the chain variables at the given Birkhoff action-angles.
std::array<double, 4> secular_point(const TransformChain& chain, const ActionAngle& aa);

ActionAngle initial_actions(const SystemEntry& sys, const TransformChain& chain);

// Forward map E o C: with_T_O2 re-applies the generating functions using aa.fast.
std::array<PlanetElements, 2> to_elements(const TransformChain& chain, const ActionAngle& aa, bool with_T_O2);

// Largest difference in (a, e, e*varpi, lambda) after a trip of the initial state through
// the truncated inverse Birkhoff series and back. initial_actions itself inverts the
// forward map exactly, so this only measures the non-commutation of the truncated maps.
double roundtrip_defect(const SystemEntry& sys, const TransformChain& chain);

struct Propagation {
  SecularTrajectory trajectory;
  SecularFrequencies frequencies;
  ActionAngle initial;
  double roundtrip_defect = 0.0;
  std::vector<double> secular_energy;  // H_sec at the back-mapped (xi, eta)
};

// I(t) = I0, phi(t) = phi0 + t phi_dot; samples are mapped back without T_O2
// (mean elements), with a fixed at a*.
Propagation propagate(const SystemEntry& sys, const TransformChain& chain, const std::vector<double>& t_grid);

}  // namespace secres
