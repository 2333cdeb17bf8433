#include "secres/laplace.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace secres {

namespace {

std::vector<double> trapezoid(double s, int jmax, double alpha, int n) {
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) {
    const double psi = 2.0 * std::numbers::pi * i / n;
    f[i] = std::pow(1.0 - 2.0 * alpha * std::cos(psi) + alpha * alpha, -s);
  }
  std::vector<double> b(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += f[i] * std::cos(2.0 * std::numbers::pi * ((static_cast<long>(j) * i) % n) / n);
    b[j] = 2.0 * sum / n;
  }
  return b;
}

}  // namespace

std::vector<double> laplace_coefficients(double s, int jmax, double alpha, double tol) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("Laplace coefficient needs 0 <= alpha < 1");
  if (jmax < 0) throw std::invalid_argument("jmax must be >= 0");
  int n = 512;
  while (n < 4 * (jmax + 1)) n *= 2;
  std::vector<double> prev = trapezoid(s, jmax, alpha, n);
  for (int round = 0; round < 12; ++round) {
    n *= 2;
    std::vector<double> next = trapezoid(s, jmax, alpha, n);
    double diff = 0.0;
    for (int j = 0; j <= jmax; ++j) diff = std::max(diff, std::abs(next[j] - prev[j]));
    prev = std::move(next);
    if (diff <= tol * std::abs(prev[0])) return prev;
  }
  throw std::runtime_error("Laplace coefficient quadrature did not converge");
}

double laplace_coefficient(double s, int j, double alpha) {
  return laplace_coefficients(s, std::abs(j), alpha)[std::abs(j)];
}

}  // namespace secres
