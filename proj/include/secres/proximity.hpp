#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "secres/elements.hpp"
#include "secres/normal_form.hpp"
#include "secres/series.hpp"

namespace secres {

inline constexpr double kSecularThreshold = 2.6e-3;
inline constexpr double kResonanceThreshold = 2.6e-2;
// Above this delta the order-two chain is refused.
inline constexpr double kNearIdentityLimit = 0.26;

enum class ProximityClass { secular, near_mmr, in_mmr };
std::string to_string(ProximityClass c);

// Thresholds are inclusive on the lower class.
ProximityClass classify(double delta);

// (1/xi_j) d chi1/d eta_j and (1/eta_j) d chi1/d xi_j by formal division.
struct DeltaFunctions {
  std::array<PoissonSeries, 2> dxi;
  std::array<PoissonSeries, 2> deta;
  // Terms without the dividing variable, left out of dxi / deta.
  std::array<PoissonSeries, 2> dxi_residual;
  std::array<PoissonSeries, 2> deta_residual;
};

DeltaFunctions delta_functions(const GeneratingPair& gen);

class DegenerateRadiusError : public std::invalid_argument {
 public:
  explicit DegenerateRadiusError(int planet);
  int planet;
};

// rho_j = scale * sqrt(xi_j^2 + eta_j^2) at the initial condition.
std::array<double, 2> choose_rho(const SystemEntry& sys, double scale = 1.0);

struct HarmonicNorm {
  std::array<int, 2> k{};
  Parity parity = Parity::cos;
  double norm = 0.0;

  std::string label() const;  // e.g. "cos(l1-5l2)"
};

// Harmonics of f with their weighted norms, largest first. L-dependent terms are skipped.
std::vector<HarmonicNorm> harmonic_norms(const PoissonSeries& f, std::array<double, 2> rho);

struct PlanetProximity {
  std::vector<HarmonicNorm> top_xi, top_eta;  // at most three each
  double delta_xi = 0.0, delta_eta = 0.0;     // largest harmonic norm
  double delta = 0.0;                          // min(delta_xi, delta_eta)
  HarmonicNorm dominant;                       // harmonic attaining delta
  double residual_norm = 0.0;
};

struct ProximityReport {
  std::array<PlanetProximity, 2> planet;
  double delta = 0.0;
  std::array<double, 2> rho{};
  ProximityClass cls = ProximityClass::secular;
  std::array<int, 2> k_star{};
  double small_divisor = 0.0;
  std::string resonance_label;
};

ProximityReport proximity_report(const GeneratingPair& gen, std::array<double, 2> rho);

struct ProximityRow {
  std::string system;
  double a_ratio = 0.0;
  double mu = 0.0;
  ProximityReport report;
  std::string error;  // non-empty when the normal form could not be built
};

ProximityRow evaluate_proximity(const SystemEntry& sys, double rho_scale = 1.0,
                                const TruncationPolicy& policy = TruncationPolicy{1, 12, 12});

void write_proximity_table(std::ostream& os, const std::vector<ProximityRow>& rows);

}  // namespace secres
