#pragma once

#include <vector>

namespace secres {

// b_s^(j)(alpha) = (1/pi) ∫_0^{2pi} cos(j psi) (1 - 2 alpha cos psi + alpha^2)^{-s} dpsi
// for j = 0..jmax, by trapezoid quadrature refined until successive values agree
// to `tol` relative to b_s^(0).
std::vector<double> laplace_coefficients(double s, int jmax, double alpha, double tol = 1e-13);

double laplace_coefficient(double s, int j, double alpha);

}  // namespace secres
