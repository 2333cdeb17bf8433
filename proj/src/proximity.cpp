#include "secres/proximity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <tuple>

#include "secres/expansion.hpp"

namespace secres {

namespace {

// Splits d by the presence of the dividing variable (xi_j if on_xi, else eta_j).
void divide(const PoissonSeries& d, int j, bool on_xi, PoissonSeries& quotient, PoissonSeries& residual) {
  std::vector<std::pair<MonomialKey, double>> q, r;
  for (auto [key, c] : d.terms()) {
    int& e = on_xi ? key.p[j] : key.q[j];
    if (e > 0) {
      --e;
      q.emplace_back(key, c);
    } else {
      r.emplace_back(key, c);
    }
  }
  quotient = PoissonSeries::from_terms(q, d.policy());
  residual = PoissonSeries::from_terms(r, d.policy());
}

std::string term_label(int k, int j) {
  if (k == 0) return {};
  std::string s = k < 0 ? "-" : "+";
  if (std::abs(k) != 1) s += std::to_string(std::abs(k));
  return s + "l" + std::to_string(j);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

PlanetProximity summarize(const PoissonSeries& dxi, const PoissonSeries& deta, const PoissonSeries& rxi,
                          const PoissonSeries& reta, std::array<double, 2> rho) {
  PlanetProximity p;
  const auto nx = harmonic_norms(dxi, rho), ne = harmonic_norms(deta, rho);
  p.top_xi.assign(nx.begin(), nx.begin() + std::min<std::size_t>(3, nx.size()));
  p.top_eta.assign(ne.begin(), ne.begin() + std::min<std::size_t>(3, ne.size()));
  if (!nx.empty()) p.delta_xi = nx.front().norm;
  if (!ne.empty()) p.delta_eta = ne.front().norm;
  p.delta = std::min(p.delta_xi, p.delta_eta);
  // delta_xi and delta_eta often tie exactly; the eta harmonic is reported then.
  if (p.delta_xi < p.delta_eta) {
    if (!nx.empty()) p.dominant = nx.front();
  } else if (!ne.empty()) {
    p.dominant = ne.front();
  }
  double r = 0.0;
  for (const auto& h : harmonic_norms(rxi, rho)) r += h.norm;
  for (const auto& h : harmonic_norms(reta, rho)) r += h.norm;
  p.residual_norm = r;
  return p;
}

}  // namespace

std::string to_string(ProximityClass c) {
  switch (c) {
    case ProximityClass::secular: return "secular";
    case ProximityClass::near_mmr: return "near-MMR";
    case ProximityClass::in_mmr: return "in-MMR";
  }
  return "?";
}

ProximityClass classify(double delta) {
  if (delta <= kSecularThreshold) return ProximityClass::secular;
  if (delta <= kResonanceThreshold) return ProximityClass::near_mmr;
  return ProximityClass::in_mmr;
}

DeltaFunctions delta_functions(const GeneratingPair& gen) {
  const PoissonSeries chi = restrict_L_degree(gen.chi1, 0);
  const Var xs[2] = {Var::xi1, Var::xi2}, es[2] = {Var::eta1, Var::eta2};
  DeltaFunctions d;
  for (int j = 0; j < 2; ++j) {
    divide(partial_derivative(chi, es[j]), j, true, d.dxi[j], d.dxi_residual[j]);
    divide(partial_derivative(chi, xs[j]), j, false, d.deta[j], d.deta_residual[j]);
  }
  return d;
}

DegenerateRadiusError::DegenerateRadiusError(int planet_)
    : std::invalid_argument("planet " + std::to_string(planet_ + 1) +
                            " starts on a circular orbit, so its polydisk radius is zero; "
                            "give a floor eccentricity or explicit radii"),
      planet(planet_) {}

std::array<double, 2> choose_rho(const SystemEntry& sys, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("rho scale must be positive");
  const PoincareState s = elements_to_poincare(sys);
  std::array<double, 2> rho{};
  for (int j = 0; j < 2; ++j) {
    rho[j] = scale * std::hypot(s.xi[j], s.eta[j]);
    if (!(rho[j] > 0.0)) throw DegenerateRadiusError(j);
  }
  return rho;
}

std::string HarmonicNorm::label() const {
  std::string arg = term_label(k[0], 1) + term_label(k[1], 2);
  if (arg.empty()) arg = "0";
  if (arg[0] == '+') arg.erase(0, 1);
  return std::string(parity == Parity::cos ? "cos(" : "sin(") + arg + ")";
}

std::vector<HarmonicNorm> harmonic_norms(const PoissonSeries& f, std::array<double, 2> rho) {
  std::map<std::tuple<int, int, int>, double> acc;
  for (const auto& [key, c] : f.terms()) {
    if (key.l_degree() != 0) continue;
    acc[{key.k[0], key.k[1], static_cast<int>(key.parity)}] +=
        std::abs(c) * std::pow(rho[0], key.p[0] + key.q[0]) * std::pow(rho[1], key.p[1] + key.q[1]);
  }
  std::vector<HarmonicNorm> out;
  for (const auto& [k, n] : acc)
    out.push_back({{std::get<0>(k), std::get<1>(k)}, static_cast<Parity>(std::get<2>(k)), n});
  std::stable_sort(out.begin(), out.end(), [](const HarmonicNorm& a, const HarmonicNorm& b) { return a.norm > b.norm; });
  return out;
}

ProximityReport proximity_report(const GeneratingPair& gen, std::array<double, 2> rho) {
  const DeltaFunctions d = delta_functions(gen);
  ProximityReport r;
  r.rho = rho;
  for (int j = 0; j < 2; ++j)
    r.planet[j] = summarize(d.dxi[j], d.deta[j], d.dxi_residual[j], d.deta_residual[j], rho);
  r.delta = std::max(r.planet[0].delta, r.planet[1].delta);
  r.cls = classify(r.delta);
  r.k_star = gen.resonance.k_star;
  r.small_divisor = gen.resonance.small_divisor;
  r.resonance_label = gen.resonance.label();
  return r;
}

ProximityRow evaluate_proximity(const SystemEntry& sys, double rho_scale, const TruncationPolicy& policy) {
  ProximityRow row;
  row.system = sys.name;
  row.a_ratio = sys.planet[0].a / sys.planet[1].a;
  const ExpandedHamiltonian H = expand_hamiltonian(sys, policy);
  row.mu = H.mu;
  const ResonanceChoice res = select_resonance(H.n_star);
  row.report.k_star = res.k_star;
  row.report.small_divisor = res.small_divisor;
  row.report.resonance_label = res.label();
  try {
    const OrderTwoResult o2 = kolmogorov_order2(H, res);
    row.report = proximity_report(o2.gen, choose_rho(sys, rho_scale));
  } catch (const ResonantDivisorError&) {
    row.report.cls = ProximityClass::in_mmr;
    row.report.delta = INFINITY;
    row.error = "divisor floor";
  }
  return row;
}

void write_proximity_table(std::ostream& os, const std::vector<ProximityRow>& rows) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-14s %8s %10s %6s %11s %11s %-16s %11s %-16s %11s %s\n", "system", "a1/a2", "mu",
                "res", "k*.n*", "delta1", "harmonic1", "delta2", "harmonic2", "residual", "class");
  os << buf;
  for (const auto& r : rows) {
    const ProximityReport& p = r.report;
    std::string cls = to_string(p.cls);
    if (!r.error.empty()) cls += " (" + r.error + ")";
    std::snprintf(buf, sizeof buf, "%-14s %8.4f %10.3e %6s %11.4e %11s %-16s %11s %-16s %11.3e %s\n", r.system.c_str(),
                  r.a_ratio, r.mu, p.resonance_label.c_str(), p.small_divisor,
                  fmt("%.3e", p.planet[0].delta).c_str(), p.planet[0].dominant.label().c_str(),
                  fmt("%.3e", p.planet[1].delta).c_str(), p.planet[1].dominant.label().c_str(),
                  std::max(p.planet[0].residual_norm, p.planet[1].residual_norm), cls.c_str());
    os << buf;
  }
}

}  // namespace secres
