#pragma once

#include <array>

#include "secres/complex_series.hpp"
#include "secres/normal_form.hpp"
#include "secres/series.hpp"

namespace secres {

using Mat4 = std::array<std::array<double, 4>, 4>;
using Vec4 = std::array<double, 4>;

// Linear canonical map (xi1, xi2, eta1, eta2) = matrix * (x1, x2, y1, y2) with
// {x_j, y_j} = {xi_j, eta_j}. The quadratic part becomes sum nu_j (x_j^2 + y_j^2) / 2.
struct DiagonalizingMap {
  Mat4 matrix{};
  Mat4 inverse{};
  std::array<double, 2> nu{};

  Vec4 to_normal(const Vec4& xi_eta) const;
  Vec4 from_normal(const Vec4& xy) const;
};

// Hessian of the quadratic part in the order (xi1, xi2, eta1, eta2).
Mat4 quadratic_hessian(const PoissonSeries& H);

// Throws std::domain_error when the origin is not an elliptic equilibrium.
DiagonalizingMap diagonalize_quadratic(const PoissonSeries& H);
inline DiagonalizingMap diagonalize_quadratic(const SecularHamiltonian& H) {
  return diagonalize_quadratic(H.series);
}

// max |M P M^T - P| for the Poisson matrix P of the secular variables.
double symplecticity_defect(const Mat4& M);

// H(matrix * w) as a series whose xi/eta slots now hold x/y.
PoissonSeries substitute_linear(const PoissonSeries& H, const Mat4& M);
inline PoissonSeries apply_map(const DiagonalizingMap& D, const PoissonSeries& H) {
  return substitute_linear(H, D.matrix);
}

// x_j = sqrt(2 I_j) cos phi_j, y_j = sqrt(2 I_j) sin phi_j, stored through
// z_j = (x_j + i y_j)/sqrt(2) = sqrt(I_j) e^{i phi_j}: the monomial
// z^a conj(z)^b stands for I^{(a+b)/2} e^{i (a-b) phi}. Throws std::logic_error on
// odd-degree input.
ComplexSeries to_action_angle(const PoissonSeries& H_xy);
// Drops the terms that break the joint rotation of both pericentres, which only enter
// through rounding in the linear map. `dropped` receives the largest removed coefficient
// relative to the largest one; nothing is removed when that exceeds tol.
ComplexSeries rotation_invariant_part(const ComplexSeries& H, double* dropped = nullptr, double tol = 1e-10);
double evaluate_action_angle(const ComplexSeries& f, std::array<double, 2> I, std::array<double, 2> phi);

}  // namespace secres
