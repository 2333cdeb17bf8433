#include "secres/nbody.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace secres {

namespace {

// SBAB3 stage coefficients.
const double kC1 = 0.5 - std::sqrt(5.0) / 10.0;
const double kC2 = std::sqrt(5.0) / 5.0;
constexpr double kD1 = 1.0 / 12.0;
constexpr double kD2 = 5.0 / 12.0;
// Corrector coefficient of SBAB3.
const double kG = (13.0 - 5.0 * std::sqrt(5.0)) / 288.0;

double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

// Gradient and Hessian of 1 / |x|.
Vec2 grad_inv(const Vec2& x) {
  const double r = norm(x);
  const double r3 = r * r * r;
  return {-x[0] / r3, -x[1] / r3};
}

using Mat2 = std::array<std::array<double, 2>, 2>;

Mat2 hess_inv(const Vec2& x) {
  const double r = norm(x);
  const double r3 = r * r * r, r5 = r3 * r * r;
  Mat2 h;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) h[i][k] = 3.0 * x[i] * x[k] / r5 - (i == k ? 1.0 / r3 : 0.0);
  return h;
}

Vec2 mat_vec(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
  if (name == "SBAB3" || name == "sbab3") return Scheme::SBAB3;
  if (name == "SBAB3C" || name == "sbab3c") return Scheme::SBAB3C;
  if (name == "leapfrog") return Scheme::leapfrog;
  throw std::invalid_argument("unknown integrator scheme '" + name + "'");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::SBAB3: return "SBAB3";
    case Scheme::SBAB3C: return "SBAB3C";
    case Scheme::leapfrog: return "leapfrog";
  }
  return "unknown";
}

CloseEncounterError::CloseEncounterError(double t_, double sep)
    : std::runtime_error("close encounter at t = " + std::to_string(t_) + " yr (separation " +
                         std::to_string(sep) + " AU)"),
      t(t_),
      separation(sep) {}

void kepler_drift(Vec2& r, Vec2& v, double mu, double dt) {
  const double r0 = norm(r);
  const double v2 = v[0] * v[0] + v[1] * v[1];
  const double alpha = 2.0 / r0 - v2 / mu;  // 1 / a
  if (!(alpha > 0.0)) throw std::domain_error("unbound two-body orbit in Kepler drift");
  const double a = 1.0 / alpha;
  const double n = std::sqrt(mu * alpha * alpha * alpha);
  const double ec = 1.0 - r0 * alpha;                               // e cos E0
  const double es = (r[0] * v[0] + r[1] * v[1]) / std::sqrt(mu * a);  // e sin E0
  const double dM = n * dt;
  // dM = dE - ec sin dE + es (1 - cos dE)
  double dE = dM;
  for (int it = 0; it < 50; ++it) {
    const double s = std::sin(dE), c = std::cos(dE), h = std::sin(0.5 * dE);
    const double f = dE - ec * s + es * 2.0 * h * h - dM;
    const double fp = 1.0 - ec * c + es * s;
    const double fpp = ec * s + es * c;
    // Halley step.
    const double step = f / (fp - 0.5 * f * fpp / fp);
    dE -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(dE))) break;
  }
  const double s = std::sin(dE), c = std::cos(dE), h = std::sin(0.5 * dE);
  const double omc = 2.0 * h * h;  // 1 - cos dE without cancellation
  const double r1 = a * (1.0 - ec * c + es * s);
  const double f = 1.0 - a / r0 * omc;
  const double g = dt - (dE - s) / n;
  const double fd = -std::sqrt(mu * a) * s / (r1 * r0);
  const double gd = 1.0 - a / r1 * omc;
  const Vec2 rn = {f * r[0] + g * v[0], f * r[1] + g * v[1]};
  const Vec2 vn = {fd * r[0] + gd * v[0], fd * r[1] + gd * v[1]};
  r = rn;
  v = vn;
}

NBodyState NBodyState::from_canonical(const CartesianState& s, const Masses& ms) {
  NBodyState out;
  out.t = s.t;
  for (int j = 0; j < 2; ++j) {
    out.r[j] = s.r[j];
    const double b = ms.beta(j);
    if (b > 0.0) {
      out.v[j] = {s.p[j][0] / b, s.p[j][1] / b};
    } else {
      throw std::invalid_argument("massless planet: build the state from elements");
    }
  }
  return out;
}

CartesianState NBodyState::canonical(const Masses& ms) const {
  CartesianState out;
  out.t = t;
  for (int j = 0; j < 2; ++j) {
    out.r[j] = r[j];
    const double b = ms.beta(j);
    out.p[j] = {b * v[j][0], b * v[j][1]};
  }
  return out;
}

NBodyIntegrator::NBodyIntegrator(const Masses& ms, Scheme scheme, double encounter)
    : ms_(ms), scheme_(scheme), encounter_(encounter) {}

void NBodyIntegrator::drift(NBodyState& s, double h) const {
  for (int j = 0; j < 2; ++j) kepler_drift(s.r[j], s.v[j], ms_.mu(j), h);
}

// Flow of T1 + U1 = p1.p2/m0 - G m1 m2 / |r1 - r2| over h, as T1(h/2) U1(h) T1(h/2).
// Both parts are exactly solvable; their commutator is of second order in the masses.
void NBodyIntegrator::perturbation(NBodyState& s, double h) const {
  const double m0 = ms_.m0;
  const double b0 = ms_.beta(0), b1 = ms_.beta(1);
  auto t1 = [&](double k) {
    const Vec2 v0 = s.v[0], v1 = s.v[1];
    for (int i = 0; i < 2; ++i) {
      s.r[0][i] += k * b1 * v1[i] / m0;
      s.r[1][i] += k * b0 * v0[i] / m0;
    }
  };
  t1(0.5 * h);
  const Vec2 d = {s.r[0][0] - s.r[1][0], s.r[0][1] - s.r[1][1]};
  const double dist = norm(d);
  if (dist < encounter_) throw CloseEncounterError(s.t, dist);
  const double k = ms_.G * h / (dist * dist * dist);
  // dv_j/dt = -(1/beta_j) dU1/dr_j, with m_j / beta_j = (m0 + m_j) / m0.
  const double f0 = k * ms_.m[1] * (m0 + ms_.m[0]) / m0;
  const double f1 = k * ms_.m[0] * (m0 + ms_.m[1]) / m0;
  for (int i = 0; i < 2; ++i) {
    s.v[0][i] -= f0 * d[i];
    s.v[1][i] += f1 * d[i];
  }
  t1(0.5 * h);
}

void NBodyIntegrator::check_encounter(const std::array<Vec2, 2>& r, double t) const {
  const double dist = std::hypot(r[0][0] - r[1][0], r[0][1] - r[1][1]);
  if (dist < encounter_) throw CloseEncounterError(t, dist);
}

// Jacobi coordinates: rho1 = r1, rho2 = r2 - m1 r1 / (m0 + m1). The Kepler parts use
// mu = G (m0 + m1) and G (m0 + m1 + m2); the rest of the Hamiltonian,
//   B = G M1 m2 / |rho2| - G m0 m2 / |r2| - G m1 m2 / |r2 - r1|,
// depends on positions only.
NBodyIntegrator::Jacobi NBodyIntegrator::to_jacobi(const NBodyState& s) const {
  const double m0 = ms_.m0, m1 = ms_.m[0], m2 = ms_.m[1];
  const double c1 = m1 / (m0 + m1);
  // Barycentric velocities from the heliocentric momenta p_j = beta_j v_j.
  std::array<Vec2, 2> V;
  Vec2 V0{};
  for (int j = 0; j < 2; ++j) {
    const double f = m0 / (m0 + ms_.m[j]);  // beta_j / m_j
    V[j] = {f * s.v[j][0], f * s.v[j][1]};
    for (int i = 0; i < 2; ++i) V0[i] -= ms_.beta(j) * s.v[j][i] / m0;
  }
  (void)m2;
  Jacobi J;
  for (int i = 0; i < 2; ++i) {
    const double rd1 = V[0][i] - V0[i], rd2 = V[1][i] - V0[i];
    J.rho[0][i] = s.r[0][i];
    J.rho[1][i] = s.r[1][i] - c1 * s.r[0][i];
    J.u[0][i] = rd1;
    J.u[1][i] = rd2 - c1 * rd1;
  }
  return J;
}

void NBodyIntegrator::from_jacobi(const Jacobi& J, NBodyState& s) const {
  const double m0 = ms_.m0, m1 = ms_.m[0], m2 = ms_.m[1];
  const double c1 = m1 / (m0 + m1);
  const double mt = m0 + m1 + m2;
  for (int i = 0; i < 2; ++i) {
    const double rd1 = J.u[0][i], rd2 = J.u[1][i] + c1 * J.u[0][i];
    const double V0 = -(m1 * rd1 + m2 * rd2) / mt;
    s.r[0][i] = J.rho[0][i];
    s.r[1][i] = J.rho[1][i] + c1 * J.rho[0][i];
    s.v[0][i] = (m0 + m1) / m0 * (rd1 + V0);
    s.v[1][i] = (m0 + m2) / m0 * (rd2 + V0);
  }
}

void NBodyIntegrator::jacobi_drift(Jacobi& J, double h) const {
  const double m01 = ms_.m0 + ms_.m[0];
  kepler_drift(J.rho[0], J.u[0], ms_.G * m01, h);
  kepler_drift(J.rho[1], J.u[1], ms_.G * (m01 + ms_.m[1]), h);
}

void NBodyIntegrator::jacobi_kick(Jacobi& J, double h, double c) const {
  const double G = ms_.G, m0 = ms_.m0, m1 = ms_.m[0], m2 = ms_.m[1];
  const double M1 = m0 + m1, Mt = M1 + m2;
  const double c0 = m0 / M1, c1 = m1 / M1;
  Vec2 xb, xc;  // r2 and r2 - r1
  for (int i = 0; i < 2; ++i) {
    xb[i] = J.rho[1][i] + c1 * J.rho[0][i];
    xc[i] = J.rho[1][i] - c0 * J.rho[0][i];
  }
  const Vec2 ga = grad_inv(J.rho[1]), gb = grad_inv(xb), gc = grad_inv(xc);
  // a_j = -(1 / mtilde_j) dB/drho_j with mtilde_1 = m0 m1 / M1, mtilde_2 = M1 m2 / Mt.
  std::array<Vec2, 2> acc;
  for (int i = 0; i < 2; ++i) {
    acc[0][i] = -G * m2 * (gc[i] - gb[i]);
    acc[1][i] = -(Mt / M1) * G * (M1 * ga[i] - m0 * gb[i] - m1 * gc[i]);
  }
  if (c != 0.0) {
    // C = sum_j mtilde_j |a_j|^2; its flow kicks u_k by 2 c sum_j (B_kj / mtilde_k) a_j.
    const Mat2 Ha = hess_inv(J.rho[1]), Hb = hess_inv(xb), Hc = hess_inv(xc);
    const double mt1 = m0 * m1 / M1;
    Mat2 H11, H12, H21, H22;
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        H11[i][k] = -G * m2 * (c1 * Hb[i][k] + c0 * Hc[i][k]);
        H12[i][k] = -G * m2 * (Hb[i][k] - Hc[i][k]);
        H21[i][k] = -G * mt1 * (Mt / M1) * (Hb[i][k] - Hc[i][k]);
        H22[i][k] = (Mt / M1) * G * (M1 * Ha[i][k] - m0 * Hb[i][k] - m1 * Hc[i][k]);
      }
    const Vec2 k1a = mat_vec(H11, acc[0]), k1b = mat_vec(H12, acc[1]);
    const Vec2 k2a = mat_vec(H21, acc[0]), k2b = mat_vec(H22, acc[1]);
    for (int i = 0; i < 2; ++i) {
      J.u[0][i] += 2.0 * c * (k1a[i] + k1b[i]);
      J.u[1][i] += 2.0 * c * (k2a[i] + k2b[i]);
    }
  }
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) J.u[j][i] += h * acc[j][i];
}

void NBodyIntegrator::sbab3c(Jacobi& J, double dt) const {
  const double c = -0.5 * kG * dt * dt * dt;
  jacobi_kick(J, 0.0, c);
  jacobi_kick(J, kD1 * dt, 0.0);
  jacobi_drift(J, kC1 * dt);
  jacobi_kick(J, kD2 * dt, 0.0);
  jacobi_drift(J, kC2 * dt);
  jacobi_kick(J, kD2 * dt, 0.0);
  jacobi_drift(J, kC1 * dt);
  jacobi_kick(J, kD1 * dt, 0.0);
  jacobi_kick(J, 0.0, c);
}

void NBodyIntegrator::sbab3(NBodyState& s, double dt) const {
  perturbation(s, kD1 * dt);
  drift(s, kC1 * dt);
  perturbation(s, kD2 * dt);
  drift(s, kC2 * dt);
  perturbation(s, kD2 * dt);
  drift(s, kC1 * dt);
  perturbation(s, kD1 * dt);
}

void NBodyIntegrator::step(NBodyState& s, double dt) const {
  switch (scheme_) {
    case Scheme::leapfrog:
      perturbation(s, 0.5 * dt);
      drift(s, dt);
      perturbation(s, 0.5 * dt);
      break;
    case Scheme::SBAB3:
      sbab3(s, dt);
      break;
    case Scheme::SBAB3C: {
      Jacobi J = to_jacobi(s);
      sbab3c(J, dt);
      from_jacobi(J, s);
      check_encounter(s.r, s.t);
      break;
    }
  }
  s.t += dt;
}

void NBodyIntegrator::run(NBodyState& s, const IntegratorConfig& cfg,
                          const std::function<void(const NBodyState&)>& on_sample) const {
  if (cfg.dt == 0.0 || !std::isfinite(cfg.dt)) throw std::invalid_argument("time step must be nonzero");
  if (cfg.sample_stride < 1) throw std::invalid_argument("sample stride must be positive");
  const long steps = std::lround(std::abs(cfg.t_end / cfg.dt));
  const double t0 = s.t;
  if (on_sample) on_sample(s);
  if (scheme_ == Scheme::SBAB3C) {
    // Stay in Jacobi coordinates between samples.
    Jacobi J = to_jacobi(s);
    for (long i = 1; i <= steps; ++i) {
      sbab3c(J, cfg.dt);
      s.t = t0 + i * cfg.dt;
      const bool sample = on_sample && i % cfg.sample_stride == 0;
      if (sample || i == steps || i % 64 == 0) {
        from_jacobi(J, s);
        check_encounter(s.r, s.t);
      }
      if (sample) on_sample(s);
    }
    return;
  }
  for (long i = 1; i <= steps; ++i) {
    step(s, cfg.dt);
    // Avoid drift of the clock from repeated addition.
    s.t = t0 + i * cfg.dt;
    if (on_sample && i % cfg.sample_stride == 0) on_sample(s);
  }
}

double inner_period(const SystemEntry& sys) {
  const Masses ms = sys.masses();
  const double a = sys.planet[0].a;
  return 2.0 * std::numbers::pi * std::sqrt(a * a * a / ms.mu(0));
}

double angular_momentum(const CartesianState& s) {
  double h = 0.0;
  for (int j = 0; j < 2; ++j) h += s.r[j][0] * s.p[j][1] - s.r[j][1] * s.p[j][0];
  return h;
}

namespace {

NBodyState state_from_elements(const std::array<PlanetElements, 2>& el, const Masses& ms) {
  NBodyState out;
  for (int j = 0; j < 2; ++j) elements_to_rv(el[j], ms.mu(j), out.r[j], out.v[j]);
  return out;
}

double delta_varpi(const std::array<PlanetElements, 2>& el) { return el[0].omega - el[1].omega; }

NumericRun run_from(NBodyState s, const Masses& ms, const IntegratorConfig& cfg) {
  NBodyIntegrator integ(ms, cfg.scheme);
  NumericRun out;
  out.trajectory.source = TrajectorySource::numeric;
  const bool massive = ms.m[0] > 0.0 && ms.m[1] > 0.0;
  const double E0 = massive ? exact_hamiltonian(s.canonical(ms), ms) : 0.0;
  integ.run(s, cfg, [&](const NBodyState& st) {
    std::array<PlanetElements, 2> el;
    for (int j = 0; j < 2; ++j) el[j] = rv_to_elements(st.r[j], st.v[j], ms.mu(j));
    out.trajectory.push(st.t, el[0].e, el[1].e, delta_varpi(el));
    if (!massive) return;
    const double rel = (exact_hamiltonian(st.canonical(ms), ms) - E0) / std::abs(E0);
    out.energy.push_back({st.t, rel});
    out.max_rel_energy_err = std::max(out.max_rel_energy_err, std::abs(rel));
  });
  out.final_state = s.canonical(ms);
  return out;
}

}  // namespace

NumericRun integrate(const SystemEntry& sys, const IntegratorConfig& cfg) {
  return run_from(state_from_elements(sys.planet, sys.masses()), sys.masses(), cfg);
}

NumericRun integrate(const CartesianState& start, const Masses& ms, const IntegratorConfig& cfg) {
  return run_from(NBodyState::from_canonical(start, ms), ms, cfg);
}

}  // namespace secres
