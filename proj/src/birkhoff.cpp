#include "secres/birkhoff.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "secres/series.hpp"

namespace secres {

namespace {

double sec_sigma() { return kXiEtaBracket; }

bool is_normal(const CKey& k) { return k.e[0] == k.e[1] && k.e[2] == k.e[3]; }

double non_normal_norm(const ComplexSeries& f, std::array<double, 2> rho) {
  std::vector<ComplexSeries::Entry> keep;
  for (const auto& e : f.entries())
    if (!is_normal(CKey::unpack(e.first))) keep.push_back(e);
  return polydisk_norm(ComplexSeries::from_entries(std::move(keep)), rho);
}

std::string format_k(std::array<int, 2> k) {
  return "(" + std::to_string(k[0]) + ", " + std::to_string(k[1]) + ")";
}

}  // namespace

BirkhoffResonanceError::BirkhoffResonanceError(std::array<int, 2> k_, double divisor)
    : std::runtime_error("secular frequencies resonant at k = " + format_k(k_) +
                         " (k.nu = " + std::to_string(divisor) + ")"),
      k(k_) {}

double birkhoff_sigma() { return sec_sigma(); }

ComplexSeries BirkhoffForm::normal_form() const {
  ComplexSeries sum;
  for (const auto& z : Z) sum = sum + z;
  return sum;
}

double polydisk_norm(const ComplexSeries& f, std::array<double, 2> rho) {
  double s = 0.0;
  for (const auto& [packed, c] : f.entries()) {
    const CKey k = CKey::unpack(packed);
    s += std::abs(c) * std::pow(rho[0], k.e[0] + k.e[1]) * std::pow(rho[1], k.e[2] + k.e[3]);
  }
  return s;
}

ComplexSeries lie_exp(const ComplexSeries& chi, const ComplexSeries& f, const CTruncation& t) {
  ComplexSeries sum = f.truncated(t);
  ComplexSeries term = sum;
  for (int n = 1; n <= t.max_degree + 1 && !term.empty(); ++n) {
    term = bracket(chi, term, t, sec_sigma()).scaled(1.0 / n);
    sum = sum + term;
  }
  return sum;
}

BirkhoffForm birkhoff_normalize(const ComplexSeries& H, int r, std::array<double, 2> rho, double divisor_floor) {
  if (r < 0) throw std::invalid_argument("Birkhoff order must be non-negative");
  BirkhoffForm B;
  B.r = r;
  B.rho = rho;

  // Off-diagonal round-off from the linear diagonalization is dropped.
  const ComplexSeries H2 = H.degree_part(2);
  const double tol = 1e-10 * max_abs_coefficient(H2);
  std::vector<ComplexSeries::Entry> diag;
  for (const auto& [packed, c] : H2.entries()) {
    const CKey k = CKey::unpack(packed);
    if (!is_normal(k)) {
      if (std::abs(c) > tol) throw std::invalid_argument("quadratic part is not diagonal");
      continue;
    }
    if (std::abs(c.imag()) > tol) throw std::invalid_argument("quadratic part is not real");
    B.nu[k.e[0] ? 0 : 1] = c.real();
    diag.emplace_back(packed, cplx(c.real(), 0.0));
  }
  const ComplexSeries Z0 = ComplexSeries::from_entries(diag);
  B.Z.push_back(Z0);

  // One extra even order is carried to measure the remainder left after order r.
  const CTruncation t{r + 4, 0, 0};
  ComplexSeries h = (H - H2 + Z0).truncated(t);
  const cplx unit(0.0, sec_sigma());
  int growth_start = 0, growth_len = 0;
  double last_rem = -1.0;
  for (int s = 1; s <= r; ++s) {
    const ComplexSeries f = h.degree_part(s + 2);
    std::vector<ComplexSeries::Entry> zs, xs;
    for (const auto& [packed, c] : f.entries()) {
      const CKey k = CKey::unpack(packed);
      if (is_normal(k)) {
        zs.emplace_back(packed, cplx(c.real(), 0.0));
        continue;
      }
      const std::array<int, 2> kk = {k.e[0] - k.e[1], k.e[2] - k.e[3]};
      const double kn = kk[0] * B.nu[0] + kk[1] * B.nu[1];
      if (std::abs(kn) < divisor_floor) throw BirkhoffResonanceError(kk, kn);
      // {m, Z0} = -i sigma (k.nu) m, so X = f / (i sigma k.nu) solves {X, Z0} + f = 0.
      xs.emplace_back(packed, c / (unit * kn));
    }
    ComplexSeries Zs = ComplexSeries::from_entries(zs);
    ComplexSeries Xs = ComplexSeries::from_entries(xs);
    if (!Xs.empty()) h = lie_exp(Xs, h, t);

    BirkhoffOrderReport rep;
    rep.order = s;
    rep.X_norm = polydisk_norm(Xs, rho);
    rep.Z_norm = polydisk_norm(Zs, rho);
    const double rem = non_normal_norm(h.degree_part(s + 3), rho) + non_normal_norm(h.degree_part(s + 4), rho);
    rep.remainder_norm = rem;
    B.report.push_back(rep);
    B.Z.push_back(std::move(Zs));
    B.X.push_back(std::move(Xs));

    if (s % 2 == 0) {
      if (last_rem >= 0.0 && rem > last_rem) {
        if (growth_len == 0) growth_start = s;
        if (++growth_len >= 3 && B.divergence_order == 0) B.divergence_order = growth_start;
      } else {
        growth_len = 0;
      }
      last_rem = rem;
    }
  }
  B.remainder_norm = B.report.empty() ? 0.0 : B.report.back().remainder_norm;
  return B;
}

SecularFrequencies secular_frequencies(const BirkhoffForm& B, std::array<double, 2> I0) {
  if (I0[0] < 0.0 || I0[1] < 0.0) throw std::invalid_argument("actions must be non-negative");
  SecularFrequencies out;
  for (const auto& Zs : B.Z)
    for (const auto& [packed, c] : Zs.entries()) {
      const CKey k = CKey::unpack(packed);
      const int a1 = k.e[0], a2 = k.e[2];
      if (a1 > 0) out.phi_dot[0] += c.real() * a1 * std::pow(I0[0], a1 - 1) * std::pow(I0[1], a2);
      if (a2 > 0) out.phi_dot[1] += c.real() * a2 * std::pow(I0[0], a1) * std::pow(I0[1], a2 - 1);
    }
  // phi' = {phi, H}: with {z, conj z} = -i sigma this is -sigma dH/dI.
  for (double& f : out.phi_dot) f *= -sec_sigma();
  out.dpomega_rate = out.phi_dot[0] - out.phi_dot[1];
  out.period = 2.0 * std::numbers::pi / std::abs(out.dpomega_rate);
  return out;
}

BirkhoffMaps birkhoff_maps(const BirkhoffForm& B) {
  const CTruncation t{B.r + 1, 0, 0};
  BirkhoffMaps m;
  for (int j = 0; j < 2; ++j) {
    ComplexSeries fwd = ComplexSeries::variable(2 * j);
    for (const auto& X : B.X) fwd = lie_exp(X, fwd, t);
    m.to_old[j] = fwd;
    ComplexSeries inv = ComplexSeries::variable(2 * j);
    for (auto it = B.X.rbegin(); it != B.X.rend(); ++it) inv = lie_exp(it->scaled(-1.0), inv, t);
    m.to_new[j] = inv;
  }
  return m;
}

std::array<cplx, 2> map_point(const std::array<ComplexSeries, 2>& map, std::array<cplx, 2> z) {
  return {evaluate(map[0], z), evaluate(map[1], z)};
}

std::array<cplx, 2> invert_to_old(const BirkhoffMaps& maps, std::array<cplx, 2> z) {
  using Vec = Eigen::Vector4d;
  const double scale = std::max({std::abs(z[0]), std::abs(z[1]), 1e-300});
  auto pack = [](const std::array<cplx, 2>& w) { return Vec(w[0].real(), w[0].imag(), w[1].real(), w[1].imag()); };
  auto unpack = [](const Vec& x) { return std::array<cplx, 2>{cplx(x(0), x(1)), cplx(x(2), x(3))}; };
  const Vec target = pack(z);
  auto residual = [&](const Vec& x) { return Vec(pack(map_point(maps.to_old, unpack(x))) - target); };

  // Newton on the real form of to_old(w) = z; the map involves conj(w), so it is not holomorphic.
  Vec x = pack(map_point(maps.to_new, z));
  Vec F = residual(x);
  const double h = 1e-7 * scale;
  for (int it = 0; it < 50 && F.lpNorm<Eigen::Infinity>() > 4e-16 * scale; ++it) {
    Eigen::Matrix4d J;
    for (int k = 0; k < 4; ++k) {
      Vec xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      J.col(k) = (residual(xp) - residual(xm)) / (2.0 * h);
    }
    const Vec step = J.fullPivLu().solve(F);
    if (!step.allFinite()) break;
    double t = 1.0;
    Vec xn = x - step, Fn = residual(xn);
    while (Fn.lpNorm<Eigen::Infinity>() >= F.lpNorm<Eigen::Infinity>() && t > 1e-3) {
      t *= 0.5;
      xn = x - t * step;
      Fn = residual(xn);
    }
    if (Fn.lpNorm<Eigen::Infinity>() >= F.lpNorm<Eigen::Infinity>()) break;
    x = xn;
    F = Fn;
  }
  if (F.lpNorm<Eigen::Infinity>() <= 1e-13 * scale) return unpack(x);
  throw std::runtime_error("Birkhoff coordinate map is not invertible near the initial condition");
}

}  // namespace secres
