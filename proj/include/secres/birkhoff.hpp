#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "secres/complex_series.hpp"

namespace secres {

struct BirkhoffOrderReport {
  int order = 0;
  double X_norm = 0.0;
  double Z_norm = 0.0;
  // Non-normalized part of the next order, after this step.
  double remainder_norm = 0.0;
};

// Series in z_j = sqrt(I_j) e^{i phi_j}, see to_action_angle.
struct BirkhoffForm {
  int r = 0;
  std::array<double, 2> nu{};
  std::array<double, 2> rho{};
  std::vector<ComplexSeries> Z;  // Z[s] has degree s + 2, s = 0..r
  std::vector<ComplexSeries> X;  // X[s - 1] normalizes order s
  double remainder_norm = 0.0;
  std::vector<BirkhoffOrderReport> report;
  int divergence_order = 0;  // order where the remainder started growing; 0 if it did not

  ComplexSeries normal_form() const;
};

class BirkhoffResonanceError : public std::runtime_error {
 public:
  BirkhoffResonanceError(std::array<int, 2> k, double divisor);
  std::array<int, 2> k;
};

// Sign of {z_j, conj z_j} / (-i), i.e. the bracket {x_j, y_j} of the normal variables.
double birkhoff_sigma();

// H must start with a diagonal quadratic part sum nu_j z_j conj(z_j).
BirkhoffForm birkhoff_normalize(const ComplexSeries& H, int r, std::array<double, 2> rho = {1.0, 1.0},
                                double divisor_floor = 1e-12);

ComplexSeries lie_exp(const ComplexSeries& chi, const ComplexSeries& f, const CTruncation& t);

struct SecularFrequencies {
  std::array<double, 2> phi_dot{};
  double dpomega_rate = 0.0;  // phi_dot[0] - phi_dot[1]
  double period = 0.0;        // 2 pi / |dpomega_rate|, yr
};

SecularFrequencies secular_frequencies(const BirkhoffForm& B, std::array<double, 2> I0);

// Polynomial coordinate changes of the normalization truncated at degree r + 1:
// to_old[j] gives z_j before normalization as a function of the normalized
// variables, to_new[j] the reverse.
struct BirkhoffMaps {
  std::array<ComplexSeries, 2> to_old;
  std::array<ComplexSeries, 2> to_new;
};

BirkhoffMaps birkhoff_maps(const BirkhoffForm& B);
std::array<cplx, 2> map_point(const std::array<ComplexSeries, 2>& map, std::array<cplx, 2> z);
// Solves to_old(w) = z by fixed-point iteration from to_new(z); exact inverse of the
// forward map up to rounding. Throws std::runtime_error if the iteration stalls.
std::array<cplx, 2> invert_to_old(const BirkhoffMaps& maps, std::array<cplx, 2> z);

double polydisk_norm(const ComplexSeries& f, std::array<double, 2> rho);

}  // namespace secres
