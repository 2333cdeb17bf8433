#include "secres/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "secres/expansion.hpp"
#include "secres/normal_form.hpp"

namespace secres {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void collect(const PoissonSeries& s, int max_degree, double G, bool second,
             std::map<std::array<int, 4>, SecularCoefficient>& out) {
  for (const auto& [k, c] : s.terms()) {
    if (k.l_degree() || k.k[0] || k.k[1] || k.sec_degree() > max_degree) continue;
    const std::array<int, 4> e = {k.p[0], k.p[1], k.q[0], k.q[1]};
    SecularCoefficient& row = out[e];
    row.exps = e;
    (second ? row.order2 : row.order1) = c * appendix_scale(k.sec_degree(), G);
  }
}

int degree(const std::array<int, 4>& e) { return e[0] + e[1] + e[2] + e[3]; }

}  // namespace

double appendix_scale(int degree, double G) { return std::pow(G, 1.0 - 0.5 * degree); }

std::vector<SecularCoefficient> secular_table(const SystemEntry& sys, const SecularTableOptions& opt) {
  const ExpandedHamiltonian H = expand_hamiltonian(sys, opt.policy);
  ResonanceChoice res = select_resonance(H.n_star);
  if (opt.K_F || opt.K_S) res = with_truncation(res, opt.K_F.value_or(res.K_F), opt.K_S.value_or(res.K_S));
  std::map<std::array<int, 4>, SecularCoefficient> rows;
  collect(average_order1(H).series, opt.max_degree, sys.G, false, rows);
  collect(average_order2(kolmogorov_order2(H, res)).series, opt.max_degree, sys.G, true, rows);
  std::vector<SecularCoefficient> out;
  for (const auto& [e, r] : rows) out.push_back(r);
  std::stable_sort(out.begin(), out.end(), [](const SecularCoefficient& a, const SecularCoefficient& b) {
    if (degree(a.exps) != degree(b.exps)) return degree(a.exps) < degree(b.exps);
    return a.exps > b.exps;
  });
  return out;
}

void write_secular_table(std::ostream& os, const std::string& system, const std::vector<SecularCoefficient>& rows) {
  os << "# " << system << " secular Hamiltonian, G-scaled units\n";
  os << "# columns: exp(xi1) exp(xi2) exp(eta1) exp(eta2) first_order second_order\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d %d %d %d %.17g %.17g\n", r.exps[0], r.exps[1], r.exps[2], r.exps[3], r.order1,
                  r.order2);
    os << buf;
  }
}

std::vector<SecularCoefficient> read_secular_table(std::istream& is) {
  std::vector<SecularCoefficient> out;
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    SecularCoefficient r;
    if (!(ls >> r.exps[0] >> r.exps[1] >> r.exps[2] >> r.exps[3] >> r.order1 >> r.order2))
      throw std::runtime_error("secular table line " + std::to_string(n) + ": expected 4 exponents and 2 values");
    out.push_back(r);
  }
  return out;
}

std::vector<PeriodEntry> period_table(const SystemEntry& sys, const std::vector<std::pair<int, int>>& truncations,
                                      ChainOptions base) {
  std::vector<PeriodEntry> out;
  for (const auto& [kf, ks] : truncations) {
    base.K_F = kf;
    base.K_S = ks;
    const TransformChain chain = build_chain(sys, base);
    const SecularFrequencies f = secular_frequencies(chain.birkhoff, initial_actions(sys, chain).I);
    out.push_back({kf, ks, f.period, f.phi_dot});
  }
  return out;
}

NumericSecular numeric_secular(const SystemEntry& sys, double t_end, const NumericOptions& opt) {
  const double P = inner_period(sys);
  NumericSecular out;
  out.run = integrate(sys, {opt.scheme, P / opt.steps_per_orbit, t_end, opt.sample_stride});
  out.smoothed = smoothed(out.run.trajectory, opt.smoothing_orbits * P);
  out.period = e1_period(out.smoothed);
  return out;
}

double max_eccentricity_deviation(const SecularTrajectory& analytic, const SecularTrajectory& numeric) {
  const auto e1 = resample(numeric.t, numeric.e1, analytic.t), e2 = resample(numeric.t, numeric.e2, analytic.t);
  double d = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i)
    d = std::max({d, std::abs(analytic.e1[i] - e1[i]), std::abs(analytic.e2[i] - e2[i])});
  return d;
}

AnalyticRun run_analytic(const SystemEntry& sys, const ChainOptions& opt, const std::vector<double>& grid) {
  AnalyticRun r;
  r.order = opt.order;
  try {
    const TransformChain chain = build_chain(sys, opt);
    r.warnings = chain.warnings;
    r.birkhoff_divergence = chain.birkhoff.divergence_order;
    r.propagation = propagate(sys, chain, grid);
    if (!std::isfinite(r.propagation.roundtrip_defect))
      r.warnings.push_back("round trip through the truncated inverse Birkhoff series left the T_O2 domain");
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

Comparison compare_with_numeric(const SystemEntry& sys, double t_end, int samples, ChainOptions base,
                                const NumericOptions& num) {
  Comparison c;
  const std::vector<double> grid = uniform_grid(t_end, samples);
  base.order = 1;
  c.order1 = run_analytic(sys, base, grid);
  base.order = 2;
  c.order2 = run_analytic(sys, base, grid);
  c.dev1 = c.dev2 = kNaN;
  try {
    c.numeric = numeric_secular(sys, t_end, num);
    if (c.order1.ok) c.dev1 = max_eccentricity_deviation(c.order1.propagation.trajectory, c.numeric.smoothed);
    if (c.order2.ok) c.dev2 = max_eccentricity_deviation(c.order2.propagation.trajectory, c.numeric.smoothed);
  } catch (const std::exception& e) {
    c.numeric_error = e.what();
  }

  char buf[160];
  if (!c.order2.ok) {
    c.order2_failed = true;
    c.failure = "order two refused: " + c.order2.error;
  } else if (c.order2.birkhoff_divergence) {
    c.order2_failed = true;
    c.failure = "order two Birkhoff series diverges from order " + std::to_string(c.order2.birkhoff_divergence);
  } else if (c.dev2 > kAgreementLimit) {
    c.order2_failed = true;
    std::snprintf(buf, sizeof buf, "order two deviates from the numeric run by %.3g (> %.3g)", c.dev2,
                  kAgreementLimit);
    c.failure = buf;
  }
  return c;
}

}  // namespace secres
