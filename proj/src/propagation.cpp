#include "secres/propagation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "secres/proximity.hpp"

namespace secres {

namespace {

std::array<cplx, 2> normal_z(const TransformChain& c, const PhaseState& y) {
  const Vec4 w = c.D.to_normal({y.xi[0], y.xi[1], y.eta[0], y.eta[1]});
  const double r = 1.0 / std::sqrt(2.0);
  return {cplx(w[0], w[2]) * r, cplx(w[1], w[3]) * r};
}

double angle_diff(double a, double b) { return std::remainder(a - b, 2.0 * std::numbers::pi); }

}  // namespace

TransformChain build_chain(const SystemEntry& sys, const ChainOptions& opt) {
  if (opt.order != 1 && opt.order != 2) throw std::invalid_argument("order must be 1 or 2");
  TransformChain c;
  c.order = opt.order;
  c.masses = sys.masses();
  c.H = expand_hamiltonian(sys, opt.policy);
  if (opt.order == 2 || opt.order1_mean_initial) {
    ResonanceChoice res = select_resonance(c.H.n_star);
    if (opt.K_F || opt.K_S) res = with_truncation(res, opt.K_F.value_or(res.K_F), opt.K_S.value_or(res.K_S));
    OrderTwoResult r = kolmogorov_order2(c.H, res);
    if (opt.order == 2) {
      try {
        r.gen.near_identity_metric = proximity_report(r.gen, choose_rho(sys)).delta;
      } catch (const DegenerateRadiusError& e) {
        c.warnings.push_back(std::string("near-identity check skipped: ") + e.what());
      }
      const double d = r.gen.near_identity_metric;
      char buf[160];
      if (d > opt.near_identity_limit) {
        std::snprintf(buf, sizeof buf, "order-two transformation is not near the identity (delta = %.3e > %.3g)", d,
                      opt.near_identity_limit);
        throw NotNearIdentityError(buf);
      }
      if (d > kResonanceThreshold) {
        std::snprintf(buf, sizeof buf, "delta = %.3e: system is close to a mean-motion resonance", d);
        c.warnings.emplace_back(buf);
      }
    }
    c.gen = r.gen;
    c.apply_gen_on_input = true;
    c.secular = opt.order == 2 ? average_order2(r) : average_order1(c.H);
  } else {
    c.secular = average_order1(c.H);
  }
  c.D = diagonalize_quadratic(c.secular);
  double broken = 0.0;
  c.secular_action_angle = rotation_invariant_part(to_action_angle(apply_map(c.D, c.secular.series)), &broken);
  if (broken > 1e-10) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "secular Hamiltonian is not rotation invariant (%.2e)", broken);
    c.warnings.emplace_back(buf);
  }
  // Polydisk radii of the initial condition for the convergence report.
  PhaseState y = c.H.translate(elements_to_poincare(sys));
  if (c.apply_gen_on_input) y = apply_T_O2_inverse(*c.gen, y);
  const std::array<cplx, 2> z0 = normal_z(c, y);
  c.birkhoff = birkhoff_normalize(c.secular_action_angle, opt.birkhoff_order, {std::abs(z0[0]), std::abs(z0[1])});
  c.maps = birkhoff_maps(c.birkhoff);
  if (c.birkhoff.divergence_order)
    c.warnings.push_back("Birkhoff remainder grows from order " + std::to_string(c.birkhoff.divergence_order));
  return c;
}

ActionAngle initial_actions(const SystemEntry& sys, const TransformChain& chain) {
  ActionAngle aa;
  PhaseState y = chain.H.translate(elements_to_poincare(sys));
  if (chain.apply_gen_on_input) y = apply_T_O2_inverse(*chain.gen, y);
  aa.fast = y;
  const std::array<cplx, 2> zn = invert_to_old(chain.maps, normal_z(chain, y));
  for (int j = 0; j < 2; ++j) {
    aa.I[j] = std::norm(zn[j]);
    aa.phi[j] = aa.I[j] > 0.0 ? std::arg(zn[j]) : 0.0;
  }
  return aa;
}

std::array<double, 4> secular_point(const TransformChain& chain, const ActionAngle& aa) {
  const std::array<cplx, 2> zn = {std::polar(std::sqrt(aa.I[0]), aa.phi[0]), std::polar(std::sqrt(aa.I[1]), aa.phi[1])};
  const std::array<cplx, 2> z = map_point(chain.maps.to_old, zn);
  const double s = std::sqrt(2.0);
  const Vec4 v = chain.D.from_normal({s * z[0].real(), s * z[1].real(), s * z[0].imag(), s * z[1].imag()});
  return {v[0], v[1], v[2], v[3]};
}

std::array<PlanetElements, 2> to_elements(const TransformChain& chain, const ActionAngle& aa, bool with_T_O2) {
  const std::array<double, 4> v = secular_point(chain, aa);
  PhaseState y = aa.fast;
  y.xi = {v[0], v[1]};
  y.eta = {v[2], v[3]};
  if (with_T_O2 && chain.gen) y = apply_T_O2(*chain.gen, y);
  return poincare_to_elements(chain.H.untranslate(y), chain.masses);
}

double roundtrip_defect(const SystemEntry& sys, const TransformChain& chain) {
  ActionAngle aa = initial_actions(sys, chain);
  // Truncated inverse series instead of the exact inverse: the defect measures how far
  // the two truncated Birkhoff maps are from commuting.
  const std::array<cplx, 2> zn = map_point(chain.maps.to_new, normal_z(chain, aa.fast));
  for (int j = 0; j < 2; ++j) {
    aa.I[j] = std::norm(zn[j]);
    aa.phi[j] = std::arg(zn[j]);
  }
  const auto back = to_elements(chain, aa, chain.apply_gen_on_input);
  double d = 0.0;
  for (int j = 0; j < 2; ++j) {
    const PlanetElements& p = sys.planet[j];
    d = std::max(d, std::abs(back[j].a - p.a) / p.a);
    d = std::max(d, std::abs(back[j].e - p.e));
    if (p.e > 0.0) d = std::max(d, std::abs(angle_diff(back[j].omega, p.omega)) * p.e);
    d = std::max(d, std::abs(angle_diff(back[j].M + back[j].omega, p.M + p.omega)));
  }
  return d;
}

Propagation propagate(const SystemEntry& sys, const TransformChain& chain, const std::vector<double>& t_grid) {
  Propagation out;
  out.initial = initial_actions(sys, chain);
  out.frequencies = secular_frequencies(chain.birkhoff, out.initial.I);
  try {
    out.roundtrip_defect = roundtrip_defect(sys, chain);
  } catch (const NotNearIdentityError&) {
    // the truncated inverse series lands where the T_O2 flow blows up
    out.roundtrip_defect = std::numeric_limits<double>::infinity();
  }
  out.trajectory.source =
      chain.order == 2 ? TrajectorySource::analytic_order2 : TrajectorySource::analytic_order1;
  ActionAngle aa = out.initial;
  aa.fast.L = {0.0, 0.0};
  for (double t : t_grid) {
    for (int j = 0; j < 2; ++j) aa.phi[j] = out.initial.phi[j] + t * out.frequencies.phi_dot[j];
    const std::array<double, 4> v = secular_point(chain, aa);
    PhaseState y;
    y.xi = {v[0], v[1]};
    y.eta = {v[2], v[3]};
    out.secular_energy.push_back(evaluate(chain.secular.series, y));
    const auto el = poincare_to_elements(chain.H.untranslate(y), chain.masses);
    out.trajectory.push(t, el[0].e, el[1].e, std::remainder(el[0].omega - el[1].omega, 2.0 * std::numbers::pi));
  }
  return out;
}

}  // namespace secres
