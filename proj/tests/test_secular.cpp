#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "secres/birkhoff.hpp"
#include "secres/catalog.hpp"
#include "secres/diagonalize.hpp"
#include "secres/propagation.hpp"

using namespace secres;
using Catch::Approx;

namespace {

const TransformChain& ups_chain() {
  static const TransformChain c = [] {
    const Catalog cat = Catalog::load(SECRES_CATALOG_FILE);
    ChainOptions o;
    o.order = 1;
    return build_chain(cat.find("ups_And"), o);
  }();
  return c;
}

const SystemEntry& ups() {
  static const SystemEntry s = Catalog::load(SECRES_CATALOG_FILE).find("ups_And");
  return s;
}

// Hamilton's equations of a secular series in (xi, eta).
std::array<double, 4> secular_field(const std::array<PoissonSeries, 4>& d, const std::array<double, 4>& v) {
  PhaseState s;
  s.xi = {v[0], v[1]};
  s.eta = {v[2], v[3]};
  // xi' = {xi, H} = sigma dH/deta, eta' = -sigma dH/dxi
  return {kXiEtaBracket * evaluate(d[2], s), kXiEtaBracket * evaluate(d[3], s), -kXiEtaBracket * evaluate(d[0], s),
          -kXiEtaBracket * evaluate(d[1], s)};
}

}  // namespace

TEST_CASE("linear diagonalization") {
  const TransformChain& c = ups_chain();
  CHECK(symplecticity_defect(c.D.matrix) <= 1e-12);
  const PoissonSeries q = apply_map(c.D, c.secular.series);
  const Mat4 S = quadratic_hessian(q);
  double diag = 0.0, off = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) (i == j ? diag : off) = std::max(i == j ? diag : off, std::abs(S[i][j]));
  CHECK(off <= 1e-12 * diag);
  CHECK(S[0][0] == Approx(S[2][2]).epsilon(1e-12));
  CHECK(S[1][1] == Approx(S[3][3]).epsilon(1e-12));

  SECTION("hyperbolic equilibrium is rejected") {
    const TruncationPolicy p{0, 2, 0};
    const PoissonSeries h = PoissonSeries::term(key_sec(2, 0, 0, 0), 1.0, p) -
                            PoissonSeries::term(key_sec(0, 0, 2, 0), 1.0, p) +
                            PoissonSeries::term(key_sec(0, 2, 0, 0), 1.0, p) +
                            PoissonSeries::term(key_sec(0, 0, 0, 2), 1.0, p);
    CHECK_THROWS_AS(diagonalize_quadratic(h), std::domain_error);
  }
}

TEST_CASE("Birkhoff normal form structure") {
  const BirkhoffForm& B = ups_chain().birkhoff;
  REQUIRE(B.Z.size() == static_cast<std::size_t>(B.r + 1));
  for (int s = 1; s <= B.r; s += 2) CHECK(B.Z[s].empty());
  for (const auto& Z : B.Z)
    for (const auto& [packed, c] : Z.entries()) {
      const CKey k = CKey::unpack(packed);
      CHECK(k.e[0] == k.e[1]);
      CHECK(k.e[2] == k.e[3]);
      CHECK(std::abs(c.imag()) <= 1e-12 * std::abs(c));
    }
  // d'Alembert in the normal variables: harmonics of X are multiples of (1, -1).
  for (const auto& X : B.X)
    for (const auto& [packed, c] : X.entries()) {
      const CKey k = CKey::unpack(packed);
      CHECK((k.e[0] - k.e[1]) + (k.e[2] - k.e[3]) == 0);
    }
  CHECK(B.divergence_order == 0);

  SECTION("vanishing actions give the linear frequencies") {
    const SecularFrequencies f = secular_frequencies(B, {0.0, 0.0});
    CHECK(std::abs(f.phi_dot[0]) == Approx(std::abs(B.nu[0])).epsilon(1e-14));
    CHECK(std::abs(f.phi_dot[1]) == Approx(std::abs(B.nu[1])).epsilon(1e-14));
    CHECK_THROWS_AS(secular_frequencies(B, {-1.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("Birkhoff reports an exact secular resonance") {
  const ComplexSeries z1 = ComplexSeries::variable(0), zb1 = ComplexSeries::variable(1);
  const ComplexSeries z2 = ComplexSeries::variable(2), zb2 = ComplexSeries::variable(3);
  const CTruncation t{6, 0, 0};
  ComplexSeries H = mul(z1, zb1, t) + mul(z2, zb2, t);
  const ComplexSeries m = mul(mul(z1, z1, t), mul(zb1, zb2, t), t);
  H = H + m + m.conj();
  CHECK_THROWS_AS(birkhoff_normalize(H, 4), BirkhoffResonanceError);
}

TEST_CASE("order-one Birkhoff period matches direct integration of the secular equations") {
  const TransformChain& c = ups_chain();
  const ActionAngle aa = initial_actions(ups(), c);
  const double T = secular_frequencies(c.birkhoff, aa.I).period;

  std::array<PoissonSeries, 4> d = {partial_derivative(c.secular.series, Var::xi1),
                                    partial_derivative(c.secular.series, Var::xi2),
                                    partial_derivative(c.secular.series, Var::eta1),
                                    partial_derivative(c.secular.series, Var::eta2)};
  std::array<double, 4> v = {aa.fast.xi[0], aa.fast.xi[1], aa.fast.eta[0], aa.fast.eta[1]};
  const double h = 2.0, t_end = 4.0 * T;
  std::vector<double> ts, ecc;
  for (double t = 0.0; t <= t_end; t += h) {
    ts.push_back(t);
    ecc.push_back(v[0] * v[0] + v[2] * v[2]);
    auto add = [&](const std::array<double, 4>& a, const std::array<double, 4>& k, double s) {
      std::array<double, 4> r;
      for (int i = 0; i < 4; ++i) r[i] = a[i] + s * k[i];
      return r;
    };
    const auto k1 = secular_field(d, v), k2 = secular_field(d, add(v, k1, h / 2));
    const auto k3 = secular_field(d, add(v, k2, h / 2)), k4 = secular_field(d, add(v, k3, h));
    for (int i = 0; i < 4; ++i) v[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  // Delta varpi librates for this system, so the eccentricity oscillation carries the period.
  CHECK(crossing_period(ts, ecc) == Approx(T).epsilon(2e-3));
}

TEST_CASE("propagation round trip and energy") {
  const TransformChain& c = ups_chain();
  const Propagation p = propagate(ups(), c, uniform_grid(7000.0, 64));
  CHECK(p.roundtrip_defect < 1e-5);
  const auto el = to_elements(c, p.initial, false);
  for (int j = 0; j < 2; ++j) CHECK(el[j].e == Approx(ups().planet[j].e).margin(1e-9));
  double lo = p.secular_energy.front(), hi = lo;
  for (double e : p.secular_energy) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  CHECK((hi - lo) / std::abs(lo) < 1e-9);
}
