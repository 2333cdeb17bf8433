#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "secres/catalog.hpp"
#include "secres/proximity.hpp"

using namespace secres;
using Catch::Approx;

namespace {

const TruncationPolicy kP{1, 6, 12};

MonomialKey key(int p1, int p2, int q1, int q2, int k1, int k2, Parity par) {
  MonomialKey m = key_sec(p1, p2, q1, q2);
  m.k = {k1, k2};
  m.parity = par;
  return m;
}

GeneratingPair pair_of(const PoissonSeries& chi1) {
  GeneratingPair g;
  g.chi1 = chi1;
  g.chi2 = PoissonSeries(kP);
  g.resonance = select_resonance({5.0, 1.0});
  return g;
}

PoissonSeries sample_chi() {
  return PoissonSeries::from_terms({{key(2, 0, 1, 0, 1, -2, Parity::cos), 3e-3},
                                    {key(0, 1, 0, 0, 1, -3, Parity::sin), -2e-3},
                                    {key(1, 1, 0, 1, 2, -1, Parity::cos), 5e-4}},
                                   kP);
}

}  // namespace

TEST_CASE("class thresholds") {
  CHECK(classify(0.0) == ProximityClass::secular);
  CHECK(classify(kSecularThreshold) == ProximityClass::secular);
  CHECK(classify(std::nextafter(kSecularThreshold, 1.0)) == ProximityClass::near_mmr);
  CHECK(classify(kResonanceThreshold) == ProximityClass::near_mmr);
  CHECK(classify(0.3) == ProximityClass::in_mmr);
  CHECK(to_string(ProximityClass::near_mmr) != to_string(ProximityClass::in_mmr));
}

TEST_CASE("harmonic labels") {
  CHECK(HarmonicNorm{{1, -5}, Parity::cos, 0.0}.label() == "cos(l1-5l2)");
  CHECK(HarmonicNorm{{-1, 2}, Parity::sin, 0.0}.label() == "sin(-l1+2l2)");
  CHECK(HarmonicNorm{{0, 0}, Parity::cos, 0.0}.label() == "cos(0)");
}

TEST_CASE("formal division of a single monomial") {
  // chi = c xi1^2 eta1 cos(l1 - 2 l2)
  const double c = 3e-3;
  const PoissonSeries chi = PoissonSeries::term(key(2, 0, 1, 0, 1, -2, Parity::cos), c, kP);
  const DeltaFunctions d = delta_functions(pair_of(chi));
  // (1/xi1) d/deta1 -> c xi1, (1/eta1) d/dxi1 -> 2 c xi1
  CHECK(d.dxi[0].coefficient(key(1, 0, 0, 0, 1, -2, Parity::cos)) == Approx(c));
  CHECK(d.deta[0].coefficient(key(1, 0, 0, 0, 1, -2, Parity::cos)) == Approx(2 * c));
  CHECK(d.dxi[0].size() == 1);
  CHECK(d.dxi_residual[0].empty());
  CHECK(d.dxi[1].empty());
  CHECK(d.deta[1].empty());

  const ProximityReport r = proximity_report(pair_of(chi), {0.1, 0.2});
  CHECK(r.planet[0].delta_xi == Approx(c * 0.1));
  CHECK(r.planet[0].delta_eta == Approx(2 * c * 0.1));
  CHECK(r.planet[0].delta == Approx(c * 0.1));
  CHECK(r.planet[0].dominant.label() == "cos(l1-2l2)");
  CHECK(r.delta == Approx(c * 0.1));
}

TEST_CASE("terms without the dividing variable go to the residual") {
  // eta2 cos(l1 - 3 l2): d/deta2 = cos, no xi2 to divide by
  const PoissonSeries chi = PoissonSeries::term(key(0, 0, 0, 1, 1, -3, Parity::cos), 1e-3, kP);
  const DeltaFunctions d = delta_functions(pair_of(chi));
  CHECK(d.dxi[1].empty());
  CHECK(d.dxi_residual[1].coefficient(key(0, 0, 0, 0, 1, -3, Parity::cos)) == Approx(1e-3));
  const ProximityReport r = proximity_report(pair_of(chi), {0.1, 0.1});
  CHECK(r.planet[1].delta == 0.0);
  CHECK(r.planet[1].residual_norm > 0.0);
}

TEST_CASE("proximity properties") {
  const PoissonSeries chi = sample_chi();
  const std::array<double, 2> rho{0.05, 0.08};

  SECTION("zero generating function") {
    const ProximityReport r = proximity_report(pair_of(PoissonSeries(kP)), rho);
    CHECK(r.delta == 0.0);
    CHECK(r.cls == ProximityClass::secular);
  }
  SECTION("linear in chi") {
    const double d1 = proximity_report(pair_of(chi), rho).delta;
    const double d3 = proximity_report(pair_of(chi.scaled(3.0)), rho).delta;
    CHECK(d1 > 0.0);
    CHECK(d3 == Approx(3.0 * d1));
    CHECK(proximity_report(pair_of(chi.scaled(-1.0)), rho).delta == Approx(d1));
  }
  SECTION("monotone in the radii") {
    const double d = proximity_report(pair_of(chi), rho).delta;
    CHECK(proximity_report(pair_of(chi), {2 * rho[0], 2 * rho[1]}).delta >= d);
  }
  SECTION("delta combines the planets") {
    const ProximityReport r = proximity_report(pair_of(chi), rho);
    for (const auto& p : r.planet) {
      CHECK(p.delta == std::min(p.delta_xi, p.delta_eta));
      CHECK(p.top_xi.size() <= 3);
      CHECK(p.top_eta.size() <= 3);
      for (std::size_t i = 1; i < p.top_xi.size(); ++i) CHECK(p.top_xi[i - 1].norm >= p.top_xi[i].norm);
    }
    CHECK(r.delta == std::max(r.planet[0].delta, r.planet[1].delta));
    CHECK(r.cls == classify(r.delta));
    CHECK(r.resonance_label == "5:1");
  }
}

TEST_CASE("polydisk radii") {
  SystemEntry s = Catalog::load(SECRES_CATALOG_FILE).find("ups_And");
  const auto rho = choose_rho(s);
  CHECK(rho[0] > 0.0);
  CHECK(rho[1] > 0.0);
  SystemEntry twice = s;
  twice.planet[0].e *= 2;
  // rho = sqrt(2 Lambda (1 - sqrt(1 - e^2)))
  const double e = s.planet[0].e;
  const double ratio = std::sqrt((1 - std::sqrt(1 - 4 * e * e)) / (1 - std::sqrt(1 - e * e)));
  CHECK(choose_rho(twice)[0] == Approx(ratio * rho[0]).epsilon(1e-12));
  CHECK(choose_rho(s, 3.0)[1] == Approx(3 * rho[1]));
  s.planet[1].e = 0.0;
  try {
    choose_rho(s);
    FAIL("no exception");
  } catch (const DegenerateRadiusError& e) {
    CHECK(e.planet == 1);
  }
}

TEST_CASE("proximity table output") {
  ProximityRow row;
  row.system = "toy";
  row.a_ratio = 0.2;
  row.mu = 1e-3;
  row.report = proximity_report(pair_of(sample_chi()), {0.05, 0.08});
  std::ostringstream os;
  write_proximity_table(os, {row});
  const std::string out = os.str();
  CHECK(out.find("toy") != std::string::npos);
  CHECK(out.find(to_string(row.report.cls)) != std::string::npos);
}
