#pragma once

#include <array>
#include <limits>
#include <stdexcept>
#include <string>

#include "secres/expansion.hpp"
#include "secres/series.hpp"

namespace secres {

struct ResonanceChoice {
  std::array<int, 2> k_star{};  // (k1, -k2): k1 n1 - k2 n2 is small
  int K_F = 0;
  int K_S = 0;
  double small_divisor = 0.0;  // k_star . n*, rad/yr

  std::string label() const;  // "k2:k1", e.g. "5:1"
};

// Coprime k1, k2 >= 1 with k1 + k2 <= kmax minimizing |k1 n1 - k2 n2| exp(sigma (k1 + k2)).
// K_F and K_S are capped at kmax.
ResonanceChoice select_resonance(std::array<double, 2> n_star, int kmax = 12, double sigma = 0.0);
// Same resonance with explicit truncation orders.
ResonanceChoice with_truncation(ResonanceChoice r, int K_F, int K_S);

class ResonantDivisorError : public std::runtime_error {
 public:
  ResonantDivisorError(std::array<int, 2> k, double divisor);
  std::array<int, 2> k;
  double divisor;
};

class NotNearIdentityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SecularHamiltonian {
  PoissonSeries series;  // in (xi, eta) only
  int order = 1;
  int K_F = 0;
  int K_S = 0;
};

// Angle average of H at L = 0, Keplerian constant included.
SecularHamiltonian average_order1(const ExpandedHamiltonian& H);

// chi with n . dchi/dlambda + slice(f) = 0, where the slice keeps 0 < |k|_1 <= K_F
// and secular degree <= K_S.
PoissonSeries solve_homological(const PoissonSeries& f, std::array<double, 2> n_star, int K_F,
                                int K_S, double divisor_floor = 1e-12);

struct GeneratingPair {
  PoissonSeries chi1;  // independent of L
  PoissonSeries chi2;  // linear in L
  ResonanceChoice resonance;
  double near_identity_metric = std::numeric_limits<double>::quiet_NaN();
};

struct NormalFormOptions {
  double divisor_floor = 1e-12;
  // Keep every term of the grade-two part. Otherwise only its L-free average
  // is built, which is all the secular Hamiltonian needs.
  bool full_grade_two = false;
};

// Graded pieces of exp(L_chi2) exp(L_chi1) H, grades counted in powers of the masses.
struct OrderTwoHamiltonian {
  PoissonSeries grade0, grade1, grade2;
  bool grade2_projected = true;

  PoissonSeries total() const;
};

struct OrderTwoResult {
  OrderTwoHamiltonian H;
  GeneratingPair gen;
};

OrderTwoResult kolmogorov_order2(const ExpandedHamiltonian& H, const ResonanceChoice& res,
                                 const NormalFormOptions& opt = {});

SecularHamiltonian average_order2(const OrderTwoResult& r);

// Old variables x = T(y) = psi1(psi2(y)) where psi_chi is the Lie transform exp(L_chi)
// acting on coordinates; inverse y = psi2^-1(psi1^-1(x)). Evaluated as exact
// time-one flows of chi.
PhaseState apply_T_O2(const GeneratingPair& gen, const PhaseState& y);
PhaseState apply_T_O2_inverse(const GeneratingPair& gen, const PhaseState& x);
// exp(L_chi2) exp(L_chi1) f, every bracket kept up to the policy.
PoissonSeries apply_T_O2(const GeneratingPair& gen, const PoissonSeries& f, const TruncationPolicy& policy,
                         int order_cap = 8);

// Time-one Lie transform of coordinates under chi (RK4 on the flow of chi).
PhaseState lie_transform_state(const PoissonSeries& chi, const PhaseState& y, int steps = 32);

}  // namespace secres
