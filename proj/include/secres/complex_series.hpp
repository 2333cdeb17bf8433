#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace secres {

using cplx = std::complex<double>;

// Polynomial in two conjugate pairs (z1, conj z1, z2, conj z2) with complex
// coefficients, optionally carrying two auxiliary exponents ("ell") and a
// single Fourier index j standing for exp(i j psi).
struct CKey {
  std::array<int, 4> e{};  // exponents of z1, zb1, z2, zb2
  std::array<int, 2> ell{};
  int j = 0;

  int degree() const { return e[0] + e[1] + e[2] + e[3]; }
  int ell_degree() const { return ell[0] + ell[1]; }
  std::uint64_t pack() const;
  static CKey unpack(std::uint64_t packed);
};

struct CTruncation {
  int max_degree = 12;
  int max_ell = 0;
  int max_abs_j = 1000;
};

class ComplexSeries {
 public:
  using Entry = std::pair<std::uint64_t, cplx>;

  ComplexSeries() = default;

  static ComplexSeries constant(cplx c);
  // index 0..3 selects z1, zb1, z2, zb2.
  static ComplexSeries variable(int index);
  static ComplexSeries ell(int index);
  static ComplexSeries harmonic(int j, cplx c);
  static ComplexSeries from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  cplx coefficient(const CKey& key) const;

  ComplexSeries scaled(cplx c) const;
  ComplexSeries conj() const;
  ComplexSeries truncated(const CTruncation& t) const;
  ComplexSeries derivative(int index) const;
  // Homogeneous part of the given total degree in z.
  ComplexSeries degree_part(int degree) const;

  friend ComplexSeries operator+(const ComplexSeries& a, const ComplexSeries& b);
  friend ComplexSeries operator-(const ComplexSeries& a, const ComplexSeries& b);

 private:
  std::vector<Entry> terms_;
};

ComplexSeries mul(const ComplexSeries& a, const ComplexSeries& b, const CTruncation& t);
// Poisson bracket with {z_j, conj z_j} = -i * sigma, where sigma is the value
// of {x_j, y_j} for z = (x + i y)/sqrt(2).
ComplexSeries bracket(const ComplexSeries& f, const ComplexSeries& g, const CTruncation& t,
                      double sigma);
// Value at z = (z1, z2), conj variables evaluated as conjugates; ell and psi given.
cplx evaluate(const ComplexSeries& f, std::array<cplx, 2> z, std::array<double, 2> ell = {},
              double psi = 0.0);
double max_abs_coefficient(const ComplexSeries& f);

}  // namespace secres
