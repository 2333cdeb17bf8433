#include "secres/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "secres/complex_series.hpp"
#include "secres/detail/accumulator.hpp"
#include "secres/laplace.hpp"

namespace secres {

namespace {

const cplx I{0.0, 1.0};

// Orbit shape of one planet in the rotating variable w = u exp(-i lambda),
// u = (xi - i eta)/sqrt(Lambda): position z = a exp(i lambda) g, velocity
// dz/dt = n a exp(i lambda) h.
struct OrbitShape {
  ComplexSeries g, h;
};

ComplexSeries exp_i(const ComplexSeries& G, const CTruncation& t) {
  // G has no constant term, so the series terminates at t.max_degree.
  ComplexSeries sum = ComplexSeries::constant(1.0);
  ComplexSeries term = sum;
  const ComplexSeries iG = G.scaled(I);
  for (int n = 1; n <= t.max_degree; ++n) {
    term = mul(term, iG, t).scaled(1.0 / n);
    if (term.empty()) break;
    sum = sum + term;
  }
  return sum;
}

OrbitShape orbit_shape(int planet, int degree) {
  const CTruncation t{degree, 0, 0};
  const ComplexSeries w = ComplexSeries::variable(2 * planet);
  const ComplexSeries wb = ComplexSeries::variable(2 * planet + 1);
  const ComplexSeries ww = mul(w, wb, t);

  // c = sqrt(1 - |w|^2/4)
  ComplexSeries c = ComplexSeries::constant(1.0);
  {
    ComplexSeries pw = ComplexSeries::constant(1.0);
    const ComplexSeries x = ww.scaled(-0.25);
    double binom = 1.0;
    for (int n = 1; 2 * n <= degree; ++n) {
      binom *= (0.5 - (n - 1)) / n;
      pw = mul(pw, x, t);
      c = c + pw.scaled(binom);
    }
  }

  // G = E - M solves G = c Im(conj(w) exp(iG)); each pass fixes one more degree.
  ComplexSeries G;
  ComplexSeries E = ComplexSeries::constant(1.0);
  for (int it = 0; it < degree; ++it) {
    const ComplexSeries X = mul(wb, E, t);
    const ComplexSeries im = (X - X.conj()).scaled(cplx(0.0, -0.5));
    G = mul(c, im, t);
    E = exp_i(G, t);
  }
  const ComplexSeries Em = E.conj();

  const ComplexSeries one_minus = ComplexSeries::constant(1.0) - ww.scaled(0.25);
  OrbitShape s;
  s.g = mul(one_minus, E, t) + mul(mul(w, w, t).scaled(0.25), Em, t) - mul(w, c, t);
  s.h = s.g.scaled(I) - mul(w, s.g.derivative(2 * planet), t).scaled(I) +
        mul(wb, s.g.derivative(2 * planet + 1), t).scaled(I);
  return s;
}

// Real monomials of (xi - i eta)^a (xi + i eta)^b.
struct RealMonomial {
  int p, q;
  cplx c;
};

class PowerTable {
 public:
  explicit PowerTable(int max_degree) : n_(max_degree + 1), table_(n_ * n_) {
    std::vector<std::vector<double>> binom(n_, std::vector<double>(n_, 0.0));
    for (int i = 0; i < n_; ++i) {
      binom[i][0] = 1.0;
      for (int k = 1; k <= i; ++k) binom[i][k] = binom[i - 1][k - 1] + (k < i ? binom[i - 1][k] : 0.0);
    }
    for (int a = 0; a < n_; ++a)
      for (int b = 0; a + b < n_; ++b) {
        std::vector<cplx> poly(a + b + 1);  // index = power of eta
        for (int r = 0; r <= a; ++r)
          for (int s = 0; s <= b; ++s)
            poly[r + s] += binom[a][r] * binom[b][s] * std::pow(-I, r) * std::pow(I, s);
        auto& out = table_[a * n_ + b];
        for (int q = 0; q <= a + b; ++q)
          if (poly[q] != cplx{}) out.push_back({a + b - q, q, poly[q]});
      }
  }
  const std::vector<RealMonomial>& get(int a, int b) const { return table_[a * n_ + b]; }

 private:
  int n_;
  std::vector<std::vector<RealMonomial>> table_;
};

// Re(S exp(i extra.lambda)) as a real series; S uses w, conj w per planet,
// ell_j = L_j/Lambda*_j and exp(i j psi) with psi = lambda1 - lambda2.
PoissonSeries to_real(const ComplexSeries& S, std::array<int, 2> extra,
                      const std::array<double, 2>& Lambda_star, const TruncationPolicy& policy) {
  const PowerTable powers(policy.max_sec_degree);
  detail::KeyAccumulator<double> acc(4 * S.size() + 16);
  const int Lmax = std::min(policy.max_L_degree, 1);
  for (const auto& [packed, coef] : S.entries()) {
    const CKey ck = CKey::unpack(packed);
    const int d1 = ck.e[0] + ck.e[1], d2 = ck.e[2] + ck.e[3];
    if (d1 + d2 > policy.max_sec_degree) continue;
    const int k1 = ck.e[1] - ck.e[0] + ck.j + extra[0];
    const int k2 = ck.e[3] - ck.e[2] - ck.j + extra[1];
    if (std::abs(k1) + std::abs(k2) > policy.max_trig_degree) continue;
    if (ck.ell[0] + ck.ell[1] > Lmax) continue;
    const double scale = std::pow(Lambda_star[0], -0.5 * d1) * std::pow(Lambda_star[1], -0.5 * d2);

    // Lambda^{-d/2} = Lambda*^{-d/2} (1 - d ell/2 + ...).
    struct LPart {
      std::array<int, 2> l;
      double f;
    };
    std::vector<LPart> lparts;
    if (ck.ell[0] + ck.ell[1] == 1) {
      lparts.push_back({{ck.ell[0], ck.ell[1]}, 1.0 / (ck.ell[0] ? Lambda_star[0] : Lambda_star[1])});
    } else {
      lparts.push_back({{0, 0}, 1.0});
      if (Lmax >= 1) {
        if (d1) lparts.push_back({{1, 0}, -0.5 * d1 / Lambda_star[0]});
        if (d2) lparts.push_back({{0, 1}, -0.5 * d2 / Lambda_star[1]});
      }
    }

    const auto& m1 = powers.get(ck.e[0], ck.e[1]);
    const auto& m2 = powers.get(ck.e[2], ck.e[3]);
    for (const auto& x1 : m1)
      for (const auto& x2 : m2) {
        const cplx c = coef * scale * x1.c * x2.c;
        for (int par = 0; par < 2; ++par) {
          // Re(c e^{i theta}) = Re(c) cos theta - Im(c) sin theta
          const double v = par == 0 ? c.real() : -c.imag();
          if (v == 0.0) continue;
          for (const auto& lp : lparts) {
            MonomialKey key;
            key.l = lp.l;
            key.p = {x1.p, x2.p};
            key.q = {x1.q, x2.q};
            key.k = {k1, k2};
            key.parity = par == 0 ? Parity::cos : Parity::sin;
            const int sign = key.canonicalize();
            if (sign == 0) continue;
            acc.add(key.pack(), sign * v * lp.f);
          }
        }
      }
  }
  return PoissonSeries::from_packed(acc.drain(), policy);
}

double binom_minus_half(int s) {
  double c = 1.0;
  for (int i = 0; i < s; ++i) c *= (-0.5 - i) / (i + 1);
  return c;
}

}  // namespace

std::array<double, 2> reference_actions(const SystemEntry& sys) {
  if (sys.Lambda_star) return *sys.Lambda_star;
  const Masses ms = sys.masses();
  return {Lambda_from_a(ms, 0, sys.planet[0].a), Lambda_from_a(ms, 1, sys.planet[1].a)};
}

PoissonSeries ExpandedHamiltonian::total() const {
  const TruncationPolicy p = kepler.policy();
  TruncationPolicy q = pert.policy();
  q.max_L_degree = std::max(p.max_L_degree, q.max_L_degree);
  return kepler.truncated(q) + pert.truncated(q);
}

PhaseState ExpandedHamiltonian::translate(const PoincareState& s) const {
  PhaseState out;
  for (int j = 0; j < 2; ++j) {
    out.L[j] = s.Lambda[j] - Lambda_star[j];
    out.lambda[j] = s.lambda[j];
    out.xi[j] = s.xi[j];
    out.eta[j] = s.eta[j];
  }
  return out;
}

PoincareState ExpandedHamiltonian::untranslate(const PhaseState& s) const {
  PoincareState out;
  for (int j = 0; j < 2; ++j) {
    out.Lambda[j] = s.L[j] + Lambda_star[j];
    out.lambda[j] = s.lambda[j];
    out.xi[j] = s.xi[j];
    out.eta[j] = s.eta[j];
  }
  return out;
}

OrbitSeries kepler_orbit_series(const SystemEntry& sys, int planet, const TruncationPolicy& policy) {
  if (planet < 0 || planet > 1) throw std::invalid_argument("planet index must be 0 or 1");
  const Masses ms = sys.masses();
  const auto Ls = reference_actions(sys);
  const double a = a_from_Lambda(ms, planet, Ls[planet]);
  const double na = std::sqrt(ms.mu(planet) / a);
  const double beta = ms.beta(planet);
  const int Lmax = std::min(policy.max_L_degree, 1);
  const CTruncation t{policy.max_sec_degree, Lmax, 1000};
  const OrbitShape shape = orbit_shape(planet, policy.max_sec_degree);

  const ComplexSeries ell = ComplexSeries::ell(planet);
  // a = a*(1 + ell)^2, n a = n* a* / (1 + ell)
  const ComplexSeries afac = (ComplexSeries::constant(1.0) + ell.scaled(2.0)).truncated(t);
  const ComplexSeries vfac = (ComplexSeries::constant(1.0) - ell).truncated(t);
  const ComplexSeries z = mul(afac, shape.g, t).scaled(a);
  const ComplexSeries p = mul(vfac, shape.h, t).scaled(beta * na);
  std::array<int, 2> extra{};
  extra[planet] = 1;
  OrbitSeries o;
  o.x = to_real(z, extra, Ls, policy);
  o.y = to_real(z.scaled(-I), extra, Ls, policy);
  o.px = to_real(p, extra, Ls, policy);
  o.py = to_real(p.scaled(-I), extra, Ls, policy);
  return o;
}

ExpandedHamiltonian expand_hamiltonian(const SystemEntry& sys, const TruncationPolicy& policy) {
  const Masses ms = sys.masses();
  if (!(ms.m0 > 0.0)) throw std::invalid_argument(sys.name + ": star mass must be positive");
  for (int j = 0; j < 2; ++j)
    if (!(ms.m[j] >= 0.0)) throw std::invalid_argument(sys.name + ": planet mass must be >= 0");

  ExpandedHamiltonian H;
  H.name = sys.name;
  H.masses = ms;
  H.Lambda_star = reference_actions(sys);
  for (int j = 0; j < 2; ++j) {
    H.a_star[j] = ms.m[j] > 0.0 ? a_from_Lambda(ms, j, H.Lambda_star[j]) : sys.planet[j].a;
    H.n_star[j] = std::sqrt(ms.mu(j) / (H.a_star[j] * H.a_star[j] * H.a_star[j]));
  }
  H.mu = std::max(ms.m[0], ms.m[1]) / ms.m0;

  const double a_in = std::min(H.a_star[0], H.a_star[1]);
  const double a_out = std::max(H.a_star[0], H.a_star[1]);
  const double alpha = a_in / a_out;
  const int inner = H.a_star[0] < H.a_star[1] ? 0 : 1;
  const double apo = sys.planet[inner].a * (1.0 + sys.planet[inner].e);
  const double peri = sys.planet[1 - inner].a * (1.0 - sys.planet[1 - inner].e);
  if (!(alpha < 1.0) || apo >= peri)
    throw std::domain_error(sys.name + ": orbits cross, the expansion of 1/|r1 - r2| diverges");

  // Keplerian part.
  TruncationPolicy kp = policy;
  kp.max_L_degree = std::max(2, policy.max_L_degree);
  {
    std::vector<std::pair<MonomialKey, double>> terms;
    double F0 = 0.0;
    for (int j = 0; j < 2; ++j) {
      MonomialKey lin = key_L(j == 0, j == 1);
      terms.emplace_back(lin, H.n_star[j]);
      if (ms.m[j] == 0.0) continue;
      const double Fj = keplerian_energy(ms, j, H.Lambda_star[j]);
      F0 += Fj;
      MonomialKey quad = key_L(j == 0 ? 2 : 0, j == 1 ? 2 : 0);
      terms.emplace_back(quad, 3.0 * Fj / (H.Lambda_star[j] * H.Lambda_star[j]));
    }
    terms.emplace_back(key_L(0, 0), F0);
    H.kepler = PoissonSeries::from_terms(terms, kp);
  }

  TruncationPolicy pp = policy;
  pp.max_L_degree = std::min(policy.max_L_degree, 1);
  if (ms.m[0] == 0.0 || ms.m[1] == 0.0) {
    H.pert = PoissonSeries(pp);
    return H;
  }

  const int D = pp.max_sec_degree;
  const int T = pp.max_trig_degree;
  const CTruncation t{D, pp.max_L_degree, T + D};
  const OrbitShape o1 = orbit_shape(0, D);
  const OrbitShape o2 = orbit_shape(1, D);
  const ComplexSeries one = ComplexSeries::constant(1.0);
  const ComplexSeries l1 = ComplexSeries::ell(0), l2 = ComplexSeries::ell(1);
  const double a1 = H.a_star[0], a2 = H.a_star[1];

  // T1 = p1 . p2 / m0
  ComplexSeries T1;
  {
    const double c = ms.beta(0) * ms.beta(1) * std::sqrt(ms.mu(0) / a1) * std::sqrt(ms.mu(1) / a2) / ms.m0;
    const ComplexSeries lf = mul(one - l1, one - l2, t);
    T1 = mul(mul(lf, o1.h, t), o2.h.conj(), t);
    T1 = mul(T1, ComplexSeries::harmonic(1, c), t);
  }

  // |r1 - r2|^2 = A + B e^{i psi} + conj, expanded around the circular value.
  ComplexSeries q;
  {
    const ComplexSeries A = mul(one + l1.scaled(4.0), mul(o1.g, o1.g.conj(), t), t).scaled(a1 * a1) +
                            mul(one + l2.scaled(4.0), mul(o2.g, o2.g.conj(), t), t).scaled(a2 * a2);
    const ComplexSeries B =
        mul(one + l1.scaled(2.0) + l2.scaled(2.0), mul(o1.g, o2.g.conj(), t), t).scaled(-a1 * a2);
    const ComplexSeries dA = A - ComplexSeries::constant(a1 * a1 + a2 * a2);
    const ComplexSeries dB = mul(B + ComplexSeries::constant(a1 * a2), ComplexSeries::harmonic(1, 1.0), t);
    q = dA + dB + dB.conj();
  }

  // 1/Delta = sum_s binom(-1/2, s) q^s Delta0^{-(2s+1)}
  const int J = T + 2 * D;
  ComplexSeries inv;
  ComplexSeries qs = one;
  for (int s = 0; s <= D; ++s) {
    if (s > 0) qs = mul(qs, q, t);
    if (qs.empty()) break;
    const auto b = laplace_coefficients(s + 0.5, J, alpha);
    const double pre = binom_minus_half(s) * std::pow(a_out, -(2.0 * s + 1.0));
    std::vector<ComplexSeries::Entry> kernel;
    for (int j = -J; j <= J; ++j) {
      CKey k;
      k.j = j;
      kernel.emplace_back(k.pack(), 0.5 * pre * b[std::abs(j)]);
    }
    inv = inv + mul(qs, ComplexSeries::from_entries(std::move(kernel)), t);
  }
  const ComplexSeries U1 = inv.scaled(-ms.G * ms.m[0] * ms.m[1]);

  H.pert = to_real(T1 + U1, {0, 0}, H.Lambda_star, pp);
  return H;
}

double exact_energy(const Masses& ms, const PoincareState& s) {
  return exact_hamiltonian(elements_to_cartesian(poincare_to_elements(s, ms), ms), ms);
}

}  // namespace secres
