#include "secres/diagonalize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace secres {

namespace {

using Eigen::Matrix4d;


Matrix4d to_eigen(const Mat4& m) {
  Matrix4d out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = m[i][j];
  return out;
}

Mat4 from_eigen(const Matrix4d& m) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = m(i, j);
  return out;
}

Matrix4d poisson_matrix() {
  Matrix4d P = Matrix4d::Zero();
  P(0, 2) = P(1, 3) = kXiEtaBracket;
  P(2, 0) = P(3, 1) = -kXiEtaBracket;
  return P;
}

int exponent(const MonomialKey& k, int v) { return v < 2 ? k.p[v] : k.q[v - 2]; }

void require_secular(const MonomialKey& k) {
  if (k.l_degree() != 0 || k.k[0] != 0 || k.k[1] != 0)
    throw std::invalid_argument("expected a series in the secular variables only");
}

template <class S, class Mul>
S substitute(const PoissonSeries& H, const std::array<S, 4>& forms, const S& one, Mul mul) {
  int max_deg = 0;
  for (const auto& [k, c] : H.terms()) max_deg = std::max(max_deg, k.sec_degree());
  std::array<std::vector<S>, 4> pw;
  for (int v = 0; v < 4; ++v) {
    pw[v].push_back(one);
    for (int n = 1; n <= max_deg; ++n) pw[v].push_back(mul(pw[v].back(), forms[v]));
  }
  S out{};
  bool first = true;
  for (const auto& [k, c] : H.terms()) {
    require_secular(k);
    S t = pw[0][exponent(k, 0)];
    for (int v = 1; v < 4; ++v)
      if (exponent(k, v)) t = mul(t, pw[v][exponent(k, v)]);
    t = t.scaled(c);
    out = first ? t : out + t;
    first = false;
  }
  return out;
}

}  // namespace

Vec4 DiagonalizingMap::to_normal(const Vec4& v) const {
  Vec4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i] += inverse[i][j] * v[j];
  return out;
}

Vec4 DiagonalizingMap::from_normal(const Vec4& v) const {
  Vec4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i] += matrix[i][j] * v[j];
  return out;
}

Mat4 quadratic_hessian(const PoissonSeries& H) {
  Mat4 S{};
  for (const auto& [k, c] : H.terms()) {
    if (k.sec_degree() != 2) continue;
    require_secular(k);
    int idx[2], n = 0;
    for (int v = 0; v < 4; ++v)
      for (int e = 0; e < exponent(k, v); ++e) idx[n++] = v;
    if (idx[0] == idx[1]) {
      S[idx[0]][idx[0]] += 2.0 * c;
    } else {
      S[idx[0]][idx[1]] += c;
      S[idx[1]][idx[0]] += c;
    }
  }
  return S;
}

double symplecticity_defect(const Mat4& M) {
  const Matrix4d m = to_eigen(M);
  const Matrix4d P = poisson_matrix();
  return (m * P * m.transpose() - P).cwiseAbs().maxCoeff();
}

DiagonalizingMap diagonalize_quadratic(const PoissonSeries& H) {
  const Matrix4d S = to_eigen(quadratic_hessian(H));
  const Matrix4d P = poisson_matrix();
  const Matrix4d A = P * S;
  Eigen::EigenSolver<Matrix4d> es(A);
  if (es.info() != Eigen::Success) throw std::domain_error("eigen decomposition of the secular matrix failed");

  const double scale = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
  struct Mode {
    Eigen::Vector4d cx, cy;
    double nu;
    double planet1_share;
  };
  std::vector<Mode> modes;
  for (int i = 0; i < 4; ++i) {
    const auto lam = es.eigenvalues()(i);
    if (std::abs(lam.real()) > 1e-9 * scale)
      throw std::domain_error("secular equilibrium is not elliptic (eigenvalue with real part " +
                              std::to_string(lam.real()) + ")");
    if (lam.imag() <= 0.0) continue;
    const Eigen::Vector4cd v = es.eigenvectors().col(i);
    modes.push_back({v.real(), kXiEtaBracket * v.imag(), lam.imag(), 0.0});
  }
  if (modes.size() != 2) throw std::domain_error("degenerate secular quadratic form");

  for (auto& m : modes) {
    // Canonical normalization: {x, y} must equal kXiEtaBracket.
    const Eigen::Matrix<double, 4, 2> C = (Eigen::Matrix<double, 4, 2>() << m.cx, m.cy).finished();
    const double omega = (C.col(0).transpose() * P.inverse() * C.col(1))(0, 0);
    // For columns c_x, c_y the bracket of the dual coordinates is -1/(c_x^T P^-1 c_y).
    const double s = -1.0 / (omega * kXiEtaBracket);
    if (!std::isfinite(s) || s == 0.0) throw std::domain_error("degenerate secular mode");
    if (s < 0.0) {
      m.cy = -m.cy;
      m.nu = -m.nu;
    }
    const double alpha = std::sqrt(std::abs(s));
    m.cx *= alpha;
    m.cy *= alpha;
    // Fix the phase: the dominant xi component sits in c_x with a positive sign.
    const int p = (m.cx(0) * m.cx(0) + m.cy(0) * m.cy(0) >= m.cx(1) * m.cx(1) + m.cy(1) * m.cy(1)) ? 0 : 1;
    const double th = std::atan2(m.cy(p), m.cx(p));
    const Eigen::Vector4d cx = std::cos(th) * m.cx + std::sin(th) * m.cy;
    const Eigen::Vector4d cy = -std::sin(th) * m.cx + std::cos(th) * m.cy;
    m.cx = cx;
    m.cy = cy;
    const double w1 = m.cx(0) * m.cx(0) + m.cx(2) * m.cx(2) + m.cy(0) * m.cy(0) + m.cy(2) * m.cy(2);
    m.planet1_share = w1 / (m.cx.squaredNorm() + m.cy.squaredNorm());
  }
  if (modes[1].planet1_share > modes[0].planet1_share) std::swap(modes[0], modes[1]);

  Matrix4d M;
  M.col(0) = modes[0].cx;
  M.col(1) = modes[1].cx;
  M.col(2) = modes[0].cy;
  M.col(3) = modes[1].cy;
  DiagonalizingMap D;
  D.matrix = from_eigen(M);
  D.inverse = from_eigen(M.inverse());
  D.nu = {modes[0].nu, modes[1].nu};
  return D;
}

PoissonSeries substitute_linear(const PoissonSeries& H, const Mat4& M) {
  TruncationPolicy pol = H.policy();
  pol.max_L_degree = 0;
  pol.max_trig_degree = 0;
  std::array<PoissonSeries, 4> forms;
  for (int i = 0; i < 4; ++i) {
    std::vector<std::pair<MonomialKey, double>> t;
    for (int m = 0; m < 4; ++m) {
      if (M[i][m] == 0.0) continue;
      MonomialKey k;
      (m < 2 ? k.p[m] : k.q[m - 2]) = 1;
      t.emplace_back(k, M[i][m]);
    }
    forms[i] = PoissonSeries::from_terms(t, pol);
  }
  if (H.empty()) return PoissonSeries(pol);
  return substitute(H, forms, PoissonSeries::constant(1.0, pol),
                    [&](const PoissonSeries& a, const PoissonSeries& b) { return series_mul(a, b, pol); });
}

ComplexSeries to_action_angle(const PoissonSeries& H_xy) {
  int max_deg = 0;
  for (const auto& [k, c] : H_xy.terms()) {
    require_secular(k);
    if (k.sec_degree() % 2 != 0) throw std::logic_error("odd-degree monomial in an even secular series");
    max_deg = std::max(max_deg, k.sec_degree());
  }
  const double r = 1.0 / std::sqrt(2.0);
  const cplx I(0.0, 1.0);
  // x_j = (z + zb)/sqrt2, y_j = -i (z - zb)/sqrt2
  std::array<ComplexSeries, 4> forms;
  for (int j = 0; j < 2; ++j) {
    const ComplexSeries z = ComplexSeries::variable(2 * j), zb = ComplexSeries::variable(2 * j + 1);
    forms[j] = (z + zb).scaled(r);
    forms[2 + j] = (z - zb).scaled(-I * r);
  }
  if (H_xy.empty()) return {};
  const CTruncation t{max_deg, 0, 0};
  return substitute(H_xy, forms, ComplexSeries::constant(1.0),
                    [&](const ComplexSeries& a, const ComplexSeries& b) { return mul(a, b, t); });
}

double evaluate_action_angle(const ComplexSeries& f, std::array<double, 2> I, std::array<double, 2> phi) {
  const std::array<cplx, 2> z = {std::polar(std::sqrt(I[0]), phi[0]), std::polar(std::sqrt(I[1]), phi[1])};
  return evaluate(f, z).real();
}

ComplexSeries rotation_invariant_part(const ComplexSeries& H, double* dropped, double tol) {
  const double top = max_abs_coefficient(H);
  std::array<std::vector<ComplexSeries::Entry>, 2> keep;
  std::array<double, 2> worst{};
  for (int o = 0; o < 2; ++o) {
    const int sign = o == 0 ? 1 : -1;
    for (const auto& e : H.entries()) {
      const CKey k = CKey::unpack(e.first);
      if ((k.e[0] - k.e[1]) + sign * (k.e[2] - k.e[3]) == 0)
        keep[o].push_back(e);
      else
        worst[o] = std::max(worst[o], std::abs(e.second));
    }
  }
  const int o = worst[0] <= worst[1] ? 0 : 1;
  const double rel = top > 0.0 ? worst[o] / top : 0.0;
  if (dropped) *dropped = rel;
  if (rel > tol) return H;
  return ComplexSeries::from_entries(std::move(keep[o]));
}

}  // namespace secres
