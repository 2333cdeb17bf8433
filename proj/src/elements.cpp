#include "secres/elements.hpp"

#include <cmath>
#include <stdexcept>

namespace secres {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_e(double e) {
  if (!(e >= 0.0 && e < 1.0)) throw std::domain_error("eccentricity outside [0, 1)");
}

}  // namespace

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

double Lambda_from_a(const Masses& ms, int j, double a) { return ms.beta(j) * std::sqrt(ms.mu(j) * a); }

double a_from_Lambda(const Masses& ms, int j, double Lambda) {
  const double b = ms.beta(j);
  return Lambda * Lambda / (b * b * ms.mu(j));
}

double keplerian_energy(const Masses& ms, int j, double Lambda) {
  const double b = ms.beta(j), mu = ms.mu(j);
  return -b * b * b * mu * mu / (2.0 * Lambda * Lambda);
}

PoincareState elements_to_poincare(const std::array<PlanetElements, 2>& el, const Masses& ms) {
  PoincareState s;
  for (int j = 0; j < 2; ++j) {
    check_e(el[j].e);
    s.Lambda[j] = Lambda_from_a(ms, j, el[j].a);
    s.lambda[j] = wrap_angle(el[j].M + el[j].omega);
    const double e2 = el[j].e * el[j].e;
    // 1 - sqrt(1 - e^2) without cancellation for small e.
    const double amp = std::sqrt(2.0 * s.Lambda[j] * e2 / (1.0 + std::sqrt(1.0 - e2)));
    s.xi[j] = amp * std::cos(el[j].omega);
    s.eta[j] = -amp * std::sin(el[j].omega);
  }
  return s;
}

PoincareState elements_to_poincare(const SystemEntry& sys) {
  PoincareState s = elements_to_poincare(sys.planet, sys.masses());
  return s;
}

std::array<PlanetElements, 2> poincare_to_elements(const PoincareState& s, const Masses& ms) {
  std::array<PlanetElements, 2> el;
  for (int j = 0; j < 2; ++j) {
    if (!(s.Lambda[j] > 0.0)) throw std::domain_error("Lambda must be positive");
    const double r2 = s.xi[j] * s.xi[j] + s.eta[j] * s.eta[j];
    const double x = r2 / (2.0 * s.Lambda[j]);  // 1 - sqrt(1 - e^2)
    if (x >= 1.0) throw std::domain_error("xi^2 + eta^2 >= 2 Lambda");
    el[j].m = ms.m[j];
    el[j].a = a_from_Lambda(ms, j, s.Lambda[j]);
    el[j].e = std::sqrt(x * (2.0 - x));
    el[j].omega = r2 == 0.0 ? 0.0 : wrap_angle(std::atan2(-s.eta[j], s.xi[j]));
    el[j].M = wrap_angle(s.lambda[j] - el[j].omega);
  }
  return el;
}

double kepler_solve(double M, double e) {
  check_e(e);
  if (e == 0.0) return M;
  const double turns = std::floor(M / kTwoPi);
  const double m = M - turns * kTwoPi;  // [0, 2 pi)
  // E - e sin E - m is increasing with a root in [m - e, m + e] ∩ [0, 2 pi].
  double lo = std::max(0.0, m - e), hi = std::min(kTwoPi, m + e);
  double E = e < 0.8 ? m : std::numbers::pi;
  for (int it = 0; it < 100; ++it) {
    const double f = E - e * std::sin(E) - m;
    if (f > 0.0)
      hi = std::min(hi, E);
    else
      lo = std::max(lo, E);
    const double fp = 1.0 - e * std::cos(E);
    double next = E - f / fp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - E) <= 1e-16 * std::max(1.0, std::abs(E)) || hi - lo < 1e-16) {
      E = next;
      break;
    }
    E = next;
  }
  return E + turns * kTwoPi;
}

void elements_to_rv(const PlanetElements& el, double mu, Vec2& r, Vec2& v) {
  check_e(el.e);
  const double a = el.a, e = el.e;
  const double E = kepler_solve(el.M, e);
  const double cE = std::cos(E), sE = std::sin(E);
  const double sq = std::sqrt(1.0 - e * e);
  const double n = std::sqrt(mu / (a * a * a));
  const double x = a * (cE - e), y = a * sq * sE;
  const double edot = n / (1.0 - e * cE);
  const double vx = -a * sE * edot, vy = a * sq * cE * edot;
  const double co = std::cos(el.omega), so = std::sin(el.omega);
  r = {co * x - so * y, so * x + co * y};
  v = {co * vx - so * vy, so * vx + co * vy};
}

PlanetElements rv_to_elements(const Vec2& rv_r, const Vec2& rv_v, double mu) {
  const double x = rv_r[0], y = rv_r[1];
  const double vx = rv_v[0], vy = rv_v[1];
  const double r = std::hypot(x, y);
  const double v2 = vx * vx + vy * vy;
  const double energy = 0.5 * v2 - mu / r;
  if (!(energy < 0.0)) throw std::domain_error("unbound osculating orbit");
  const double a = -mu / (2.0 * energy);
  const double h = x * vy - y * vx;
  // Eccentricity vector.
  const double rv = x * vx + y * vy;
  const double ex = (v2 - mu / r) * x / mu - rv * vx / mu;
  const double ey = (v2 - mu / r) * y / mu - rv * vy / mu;
  const double e = std::hypot(ex, ey);
  if (!(e < 1.0)) throw std::domain_error("unbound osculating orbit");
  if (h <= 0.0) throw std::domain_error("retrograde osculating orbit");
  PlanetElements el;
  el.a = a;
  el.e = e;
  el.omega = e == 0.0 ? 0.0 : wrap_angle(std::atan2(ey, ex));
  // Eccentric anomaly from r cos and r sin in the perifocal frame.
  const double co = std::cos(el.omega), so = std::sin(el.omega);
  const double px = co * x + so * y, py = -so * x + co * y;
  const double cE = px / a + e;
  const double sE = py / (a * std::sqrt(1.0 - e * e));
  const double E = std::atan2(sE, cE);
  el.M = wrap_angle(E - e * std::sin(E));
  return el;
}

CartesianState elements_to_cartesian(const std::array<PlanetElements, 2>& el, const Masses& ms) {
  CartesianState s;
  for (int j = 0; j < 2; ++j) {
    Vec2 v;
    elements_to_rv(el[j], ms.mu(j), s.r[j], v);
    const double b = ms.beta(j);
    s.p[j] = {b * v[0], b * v[1]};
  }
  return s;
}

std::array<PlanetElements, 2> cartesian_to_elements(const CartesianState& s, const Masses& ms) {
  std::array<PlanetElements, 2> el;
  for (int j = 0; j < 2; ++j) {
    const double b = ms.beta(j);
    el[j] = rv_to_elements(s.r[j], {s.p[j][0] / b, s.p[j][1] / b}, ms.mu(j));
    el[j].m = ms.m[j];
  }
  return el;
}

double exact_hamiltonian(const CartesianState& s, const Masses& ms) {
  double H = 0.0;
  for (int j = 0; j < 2; ++j) {
    const double p2 = s.p[j][0] * s.p[j][0] + s.p[j][1] * s.p[j][1];
    H += 0.5 * p2 * (1.0 / ms.m0 + 1.0 / ms.m[j]);
    H -= ms.G * ms.m0 * ms.m[j] / std::hypot(s.r[j][0], s.r[j][1]);
  }
  H += (s.p[0][0] * s.p[1][0] + s.p[0][1] * s.p[1][1]) / ms.m0;
  H -= ms.G * ms.m[0] * ms.m[1] / std::hypot(s.r[0][0] - s.r[1][0], s.r[0][1] - s.r[1][1]);
  return H;
}

}  // namespace secres
