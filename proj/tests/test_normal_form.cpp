#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "secres/catalog.hpp"
#include "secres/expansion.hpp"
#include "secres/normal_form.hpp"

using namespace secres;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

SystemEntry toy_system() {
  SystemEntry s;
  s.name = "toy";
  s.m0 = 1.0;
  s.planet[0] = {1e-3, 1.0, 0.05, 0.3, 1.1};
  s.planet[1] = {5e-4, 2.2, 0.04, 2.0, 4.0};
  return s;
}

const ExpandedHamiltonian& toy_H() {
  static const ExpandedHamiltonian H = expand_hamiltonian(toy_system(), {1, 6, 8});
  return H;
}

double max_abs(const PoissonSeries& f) {
  double m = 0.0;
  for (const auto& e : f.entries()) m = std::max(m, std::abs(e.second));
  return m;
}

}  // namespace

TEST_CASE("resonance selection") {
  SECTION("ups And sits next to 5:1") {
    const Catalog c = Catalog::load(SECRES_CATALOG_FILE);
    const SystemEntry& s = c.find("ups_And");
    const ResonanceChoice r = select_resonance(expand_hamiltonian(s, {1, 2, 2}).n_star);
    CHECK(r.k_star == std::array<int, 2>{1, -5});
    CHECK(r.label() == "5:1");
    CHECK(r.K_F == 6);
    CHECK(r.K_S == 4);
    CHECK(std::abs(r.small_divisor) == Approx(0.534).margin(0.01));
  }
  SECTION("exact 2:1") {
    const ResonanceChoice r = select_resonance({2.0, 1.0});
    CHECK(r.k_star == std::array<int, 2>{1, -2});
    CHECK(r.small_divisor == 0.0);
    CHECK(r.K_F == 3);
    CHECK(r.K_S == 1);
  }
  CHECK_THROWS_AS(select_resonance({1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(with_truncation(select_resonance({2.0, 1.0}), 0, 1), std::invalid_argument);
}

TEST_CASE("homological equation") {
  const TruncationPolicy p{1, 4, 6};
  SECTION("single harmonic") {
    const PoissonSeries f = PoissonSeries::term(key_trig(1, -1, Parity::cos), 1.0, p);
    const PoissonSeries chi = solve_homological(f, {2.0, 1.0}, 2, 0);
    CHECK(chi.coefficient(key_trig(1, -1, Parity::sin)) == Approx(-1.0));
    CHECK(chi.size() == 1);
  }
  SECTION("residual vanishes on the solved slice") {
    const std::array<double, 2> n = toy_H().n_star;
    const PoissonSeries P = restrict_L_degree(toy_H().pert, 0);
    const PoissonSeries chi = solve_homological(P, n, 5, 3);
    const PoissonSeries r = n[0] * partial_derivative(chi, Var::lambda1) +
                            n[1] * partial_derivative(chi, Var::lambda2) +
                            restrict_sec_degree(fourier_slice(P, 5), 3);
    CHECK(max_abs(r) <= 1e-14 * max_abs(P));
    for (const auto& [k, c] : chi.terms()) {
      CHECK(std::abs(k.k[0]) + std::abs(k.k[1]) <= 5);
      CHECK(k.sec_degree() <= 3);
    }
  }
  SECTION("resonant divisor") {
    const PoissonSeries f = PoissonSeries::term(key_trig(1, -2, Parity::cos), 1.0, p);
    CHECK_THROWS_AS(solve_homological(f, {2.0, 1.0}, 3, 1), ResonantDivisorError);
  }
}

TEST_CASE("order-two generating functions") {
  const ExpandedHamiltonian& H = toy_H();
  const ResonanceChoice res = select_resonance(H.n_star);
  const OrderTwoResult r = kolmogorov_order2(H, res);
  for (const auto& [k, c] : r.gen.chi1.terms()) CHECK(k.l_degree() == 0);
  for (const auto& [k, c] : r.gen.chi2.terms()) CHECK(k.l_degree() == 1);
  CHECK(!r.gen.chi1.empty());

  SECTION("the normalized pieces have no fast terms in the solved slices") {
    const PoissonSeries g1 = restrict_sec_degree(fourier_slice(r.H.grade1, res.K_F), res.K_S);
    CHECK(max_abs(restrict_L_degree(g1, 0)) <= 1e-14 * max_abs(H.pert));
    CHECK(max_abs(restrict_L_degree(g1, 1)) <= 1e-13 * max_abs(H.pert));
  }
  SECTION("T_O2 and its inverse compose to the identity") {
    PhaseState y;
    y.L = {1e-6, -2e-6};
    y.lambda = {0.4, 2.5};
    y.xi = {0.001, -0.0007};
    y.eta = {0.0005, 0.0012};
    const PhaseState back = apply_T_O2_inverse(r.gen, apply_T_O2(r.gen, y));
    for (int j = 0; j < 2; ++j) {
      CHECK(back.L[j] == Approx(y.L[j]).margin(1e-15));
      CHECK(back.lambda[j] == Approx(y.lambda[j]).margin(1e-12));
      CHECK(back.xi[j] == Approx(y.xi[j]).margin(1e-15));
      CHECK(back.eta[j] == Approx(y.eta[j]).margin(1e-15));
    }
  }
  SECTION("order two only shifts the secular Hamiltonian at second order") {
    const PoissonSeries d = average_order2(r).series - average_order1(H).series;
    const PoissonSeries sec = angle_average(restrict_L_degree(H.pert, 0));
    const PhaseState y = H.translate(elements_to_poincare(toy_system().planet, toy_system().masses()));
    CHECK(std::abs(evaluate(d, y)) < 0.05 * std::abs(evaluate(sec, y)));
  }
}

TEST_CASE("order-one average equals grid quadrature") {
  const ExpandedHamiltonian& H = toy_H();
  const PoissonSeries full = H.total();
  const PoissonSeries avg = average_order1(H).series;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int N = 32;
  for (int i = 0; i < 4; ++i) {
    PhaseState s;
    for (int j = 0; j < 2; ++j) {
      s.xi[j] = 0.01 * U(rng);
      s.eta[j] = 0.01 * U(rng);
    }
    double q = 0.0;
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        s.lambda = {2 * kPi * a / N, 2 * kPi * b / N};
        q += evaluate(full, s);
      }
    q /= N * N;
    CHECK(evaluate(avg, s) == Approx(q).epsilon(1e-13));
  }
}
