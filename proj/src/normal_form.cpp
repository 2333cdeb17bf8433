#include "secres/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace secres {

std::string ResonanceChoice::label() const {
  return std::to_string(std::abs(k_star[1])) + ":" + std::to_string(std::abs(k_star[0]));
}

ResonanceChoice select_resonance(std::array<double, 2> n_star, int kmax, double sigma) {
  if (!(n_star[0] > 0.0 && n_star[1] > 0.0)) throw std::invalid_argument("mean motions must be positive");
  if (kmax < 2) throw std::invalid_argument("kmax must be at least 2");
  ResonanceChoice best;
  double best_score = std::numeric_limits<double>::infinity();
  for (int k1 = 1; k1 < kmax; ++k1)
    for (int k2 = 1; k1 + k2 <= kmax; ++k2) {
      if (std::gcd(k1, k2) != 1) continue;
      const double d = k1 * n_star[0] - k2 * n_star[1];
      const double score = std::abs(d) * std::exp(sigma * (k1 + k2));
      if (score < best_score) {
        best_score = score;
        best.k_star = {k1, -k2};
        best.small_divisor = d;
      }
    }
  best.K_F = std::min(kmax, best.k_star[0] - best.k_star[1]);
  best.K_S = std::min(kmax, std::abs(best.k_star[0] + best.k_star[1]));
  return best;
}

ResonanceChoice with_truncation(ResonanceChoice r, int K_F, int K_S) {
  if (K_F < 1 || K_S < 0) throw std::invalid_argument("K_F must be >= 1 and K_S >= 0");
  r.K_F = K_F;
  r.K_S = K_S;
  return r;
}

namespace {

std::string format_k(std::array<int, 2> k) {
  return "(" + std::to_string(k[0]) + ", " + std::to_string(k[1]) + ")";
}

PhaseState add_scaled(const PhaseState& a, const PhaseState& d, double h) {
  PhaseState s = a;
  for (int j = 0; j < 2; ++j) {
    s.L[j] += h * d.L[j];
    s.lambda[j] += h * d.lambda[j];
    s.xi[j] += h * d.xi[j];
    s.eta[j] += h * d.eta[j];
  }
  return s;
}

// Vector field z' = {chi, z} of the Lie operator.
struct LieField {
  explicit LieField(const PoissonSeries& chi) {
    const Var Ls[2] = {Var::L1, Var::L2}, ls[2] = {Var::lambda1, Var::lambda2};
    const Var xs[2] = {Var::xi1, Var::xi2}, es[2] = {Var::eta1, Var::eta2};
    for (int j = 0; j < 2; ++j) {
      dL[j] = partial_derivative(chi, Ls[j]);
      dl[j] = partial_derivative(chi, ls[j]);
      dx[j] = partial_derivative(chi, xs[j]);
      de[j] = partial_derivative(chi, es[j]);
    }
  }

  PhaseState operator()(const PhaseState& s) const {
    PhaseState v;
    for (int j = 0; j < 2; ++j) {
      v.lambda[j] = -evaluate(dL[j], s);
      v.L[j] = evaluate(dl[j], s);
      v.xi[j] = -kXiEtaBracket * evaluate(de[j], s);
      v.eta[j] = kXiEtaBracket * evaluate(dx[j], s);
    }
    return v;
  }

  PoissonSeries dL[2], dl[2], dx[2], de[2];
};

}  // namespace

ResonantDivisorError::ResonantDivisorError(std::array<int, 2> k_, double divisor_)
    : std::runtime_error("resonant small divisor k.n = " + std::to_string(divisor_) + " at k = " + format_k(k_)),
      k(k_),
      divisor(divisor_) {}

SecularHamiltonian average_order1(const ExpandedHamiltonian& H) {
  SecularHamiltonian out;
  out.series = angle_average(restrict_L_degree(H.kepler, 0) + restrict_L_degree(H.pert, 0));
  out.order = 1;
  return out;
}

PoissonSeries solve_homological(const PoissonSeries& f, std::array<double, 2> n_star, int K_F, int K_S,
                                double divisor_floor) {
  const PoissonSeries src = restrict_sec_degree(fourier_slice(f, K_F), K_S);
  std::vector<std::pair<MonomialKey, double>> out;
  out.reserve(src.size());
  for (auto [key, c] : src.terms()) {
    const double kn = key.k[0] * n_star[0] + key.k[1] * n_star[1];
    if (std::abs(kn) < divisor_floor) throw ResonantDivisorError(key.k, kn);
    if (key.parity == Parity::cos) {
      key.parity = Parity::sin;
      out.emplace_back(key, -c / kn);
    } else {
      key.parity = Parity::cos;
      out.emplace_back(key, c / kn);
    }
  }
  return PoissonSeries::from_terms(out, f.policy());
}

PoissonSeries OrderTwoHamiltonian::total() const {
  TruncationPolicy q = grade1.policy();
  q.max_L_degree = std::max(q.max_L_degree, grade0.policy().max_L_degree);
  return grade0.truncated(q) + grade1.truncated(q) + grade2.truncated(q);
}

OrderTwoResult kolmogorov_order2(const ExpandedHamiltonian& H, const ResonanceChoice& res,
                                 const NormalFormOptions& opt) {
  const TruncationPolicy pol = H.pert.policy();
  const TruncationPolicy lin{1, pol.max_sec_degree, pol.max_trig_degree};
  const TruncationPolicy top =
      opt.full_grade_two ? lin : TruncationPolicy{0, pol.max_sec_degree, 0};

  OrderTwoResult r;
  r.gen.resonance = res;
  const PoissonSeries& H0 = H.kepler;
  const PoissonSeries& P = H.pert;

  // First step: remove the L-free fast terms of the perturbation.
  r.gen.chi1 = solve_homological(restrict_L_degree(P, 0), H.n_star, res.K_F, res.K_S, opt.divisor_floor);
  const PoissonSeries& chi1 = r.gen.chi1;
  const PoissonSeries c1H0 = poisson_bracket(chi1, H0, lin);
  const PoissonSeries R1 = P + c1H0;
  const PoissonSeries R2 =
      poisson_bracket(chi1, P, top) + 0.5 * poisson_bracket(chi1, c1H0.truncated(lin), top);

  // Second step: the fast terms linear in L.
  r.gen.chi2 = solve_homological(restrict_L_degree(R1, 1), H.n_star, res.K_F, res.K_S, opt.divisor_floor);
  const PoissonSeries& chi2 = r.gen.chi2;
  const PoissonSeries c2H0 = poisson_bracket(chi2, H0, lin);

  r.H.grade0 = H0;
  r.H.grade1 = R1 + c2H0;
  r.H.grade2 = R2 + poisson_bracket(chi2, R1, top) + 0.5 * poisson_bracket(chi2, c2H0, top);
  r.H.grade2_projected = !opt.full_grade_two;
  return r;
}

SecularHamiltonian average_order2(const OrderTwoResult& r) {
  SecularHamiltonian out;
  const OrderTwoHamiltonian& h = r.H;
  const TruncationPolicy q = h.grade1.policy();
  out.series = angle_average(restrict_L_degree(h.grade0, 0).truncated(q) + restrict_L_degree(h.grade1, 0) +
                             restrict_L_degree(h.grade2, 0).truncated(q));
  out.order = 2;
  out.K_F = r.gen.resonance.K_F;
  out.K_S = r.gen.resonance.K_S;
  return out;
}

PhaseState lie_transform_state(const PoissonSeries& chi, const PhaseState& y, int steps) {
  if (chi.empty()) return y;
  const LieField f(chi);
  const double h = 1.0 / steps;
  PhaseState s = y;
  for (int i = 0; i < steps; ++i) {
    const PhaseState k1 = f(s);
    const PhaseState k2 = f(add_scaled(s, k1, 0.5 * h));
    const PhaseState k3 = f(add_scaled(s, k2, 0.5 * h));
    const PhaseState k4 = f(add_scaled(s, k3, h));
    for (int j = 0; j < 2; ++j) {
      s.L[j] += h / 6 * (k1.L[j] + 2 * k2.L[j] + 2 * k3.L[j] + k4.L[j]);
      s.lambda[j] += h / 6 * (k1.lambda[j] + 2 * k2.lambda[j] + 2 * k3.lambda[j] + k4.lambda[j]);
      s.xi[j] += h / 6 * (k1.xi[j] + 2 * k2.xi[j] + 2 * k3.xi[j] + k4.xi[j]);
      s.eta[j] += h / 6 * (k1.eta[j] + 2 * k2.eta[j] + 2 * k3.eta[j] + k4.eta[j]);
    }
  }
  for (int j = 0; j < 2; ++j)
    if (!std::isfinite(s.L[j] + s.lambda[j] + s.xi[j] + s.eta[j]))
      throw NotNearIdentityError("normalizing transformation diverged");
  return s;
}

PhaseState apply_T_O2(const GeneratingPair& gen, const PhaseState& y) {
  return lie_transform_state(gen.chi1, lie_transform_state(gen.chi2, y));
}

PhaseState apply_T_O2_inverse(const GeneratingPair& gen, const PhaseState& x) {
  return lie_transform_state(-gen.chi2, lie_transform_state(-gen.chi1, x));
}

PoissonSeries apply_T_O2(const GeneratingPair& gen, const PoissonSeries& f, const TruncationPolicy& policy,
                         int order_cap) {
  const LieSeriesResult a = lie_exp(gen.chi1, f, order_cap, policy);
  const LieSeriesResult b = lie_exp(gen.chi2, a.value, order_cap, policy);
  if (a.diverging || b.diverging) throw NotNearIdentityError("Lie series of the generating functions diverge");
  return b.value;
}

}  // namespace secres
