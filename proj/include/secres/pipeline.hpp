#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "secres/catalog.hpp"
#include "secres/nbody.hpp"
#include "secres/propagation.hpp"

namespace secres {

// Secular coefficients in the published layout: masses multiplied by G, so a
// degree-n coefficient carries G^(1 - n/2) and the constant carries G.
double appendix_scale(int degree, double G = kGravity);

struct SecularCoefficient {
  std::array<int, 4> exps{};  // xi1 xi2 eta1 eta2
  double order1 = 0.0;
  double order2 = 0.0;
};

struct SecularTableOptions {
  TruncationPolicy policy{1, 12, 12};
  std::optional<int> K_F, K_S;
  int max_degree = 6;
};

// Every monomial of degree <= max_degree present in either order, sorted by degree.
std::vector<SecularCoefficient> secular_table(const SystemEntry& sys, const SecularTableOptions& opt = {});
void write_secular_table(std::ostream& os, const std::string& system, const std::vector<SecularCoefficient>& rows);
std::vector<SecularCoefficient> read_secular_table(std::istream& is);

struct PeriodEntry {
  int K_F = 0, K_S = 0;
  double period = 0.0;  // yr
  std::array<double, 2> phi_dot{};
};

std::vector<PeriodEntry> period_table(const SystemEntry& sys, const std::vector<std::pair<int, int>>& truncations,
                                      ChainOptions base = {});

struct NumericOptions {
  Scheme scheme = Scheme::SBAB3;
  double steps_per_orbit = 40.0;  // of the inner planet
  int sample_stride = 20;
  double smoothing_orbits = 300.0;
};

struct NumericSecular {
  NumericRun run;
  SecularTrajectory smoothed;
  double period = 0.0;  // from the e1 oscillation of the smoothed run, NaN if under two cycles
};

NumericSecular numeric_secular(const SystemEntry& sys, double t_end, const NumericOptions& opt = {});

// Largest |e_j(analytic) - e_j(numeric)| on the analytic grid, numeric run smoothed.
double max_eccentricity_deviation(const SecularTrajectory& analytic, const SecularTrajectory& numeric);

inline constexpr double kAgreementLimit = 0.05;

struct AnalyticRun {
  int order = 1;
  bool ok = false;
  std::string error;
  Propagation propagation;
  std::vector<std::string> warnings;
  int birkhoff_divergence = 0;
};

AnalyticRun run_analytic(const SystemEntry& sys, const ChainOptions& opt, const std::vector<double>& grid);

struct Comparison {
  AnalyticRun order1, order2;
  NumericSecular numeric;
  std::string numeric_error;
  double dev1 = 0.0, dev2 = 0.0;  // NaN when a run is missing
  // Order two refused, diverging, or off by more than kAgreementLimit.
  bool order2_failed = false;
  std::string failure;
};

Comparison compare_with_numeric(const SystemEntry& sys, double t_end, int samples, ChainOptions base = {},
                                const NumericOptions& num = {});

}  // namespace secres
