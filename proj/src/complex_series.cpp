#include "secres/complex_series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "secres/detail/accumulator.hpp"

namespace secres {

namespace {

constexpr int kJOffset = 128;
constexpr std::uint64_t kLowMask = (1ULL << 30) - 1;

int field(std::uint64_t v, int shift, int bits) {
  return static_cast<int>((v >> shift) & ((1ULL << bits) - 1));
}

int packed_degree(std::uint64_t v) {
  return field(v, 0, 6) + field(v, 6, 6) + field(v, 12, 6) + field(v, 18, 6);
}
int packed_ell(std::uint64_t v) { return field(v, 24, 3) + field(v, 27, 3); }
int packed_j(std::uint64_t v) { return field(v, 32, 9) - kJOffset; }

std::uint64_t j_bits(int j) { return static_cast<std::uint64_t>(j + kJOffset) << 32; }

std::vector<ComplexSeries::Entry> merge(const std::vector<ComplexSeries::Entry>& a,
                                        const std::vector<ComplexSeries::Entry>& b, double sb) {
  std::vector<ComplexSeries::Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, k = 0;
  auto push = [&](std::uint64_t key, cplx c) {
    if (c != cplx{}) out.emplace_back(key, c);
  };
  while (i < a.size() || k < b.size()) {
    if (k == b.size() || (i < a.size() && a[i].first < b[k].first)) {
      push(a[i].first, a[i].second);
      ++i;
    } else if (i == a.size() || b[k].first < a[i].first) {
      push(b[k].first, sb * b[k].second);
      ++k;
    } else {
      push(a[i].first, a[i].second + sb * b[k].second);
      ++i;
      ++k;
    }
  }
  return out;
}

struct Dec {
  std::uint32_t low;
  int j;
  int deg;
  int ell;
  cplx c;
};

std::vector<Dec> decode_sorted(const ComplexSeries& s) {
  std::vector<Dec> v;
  v.reserve(s.size());
  for (const auto& [key, c] : s.entries())
    v.push_back({static_cast<std::uint32_t>(key & kLowMask), packed_j(key), packed_degree(key),
                 packed_ell(key), c});
  std::stable_sort(v.begin(), v.end(), [](const Dec& a, const Dec& b) { return a.deg < b.deg; });
  return v;
}

void mul_accumulate(detail::KeyAccumulator<cplx>& acc, const std::vector<Dec>& a,
                    const std::vector<Dec>& b, cplx factor, const CTruncation& t) {
  if (a.empty() || b.empty()) return;
  const int bmin = b.front().deg;
  for (const auto& ta : a) {
    if (ta.deg + bmin > t.max_degree) break;
    const cplx ca = factor * ta.c;
    for (const auto& tb : b) {
      if (ta.deg + tb.deg > t.max_degree) break;
      if (ta.ell + tb.ell > t.max_ell) continue;
      const int j = ta.j + tb.j;
      if (std::abs(j) > t.max_abs_j) continue;
      acc.add((static_cast<std::uint64_t>(ta.low) + tb.low) | j_bits(j), ca * tb.c);
    }
  }
}

}  // namespace

std::uint64_t CKey::pack() const {
  for (int v : e)
    if (v < 0 || v > 63) throw std::invalid_argument("CKey exponent out of range");
  for (int v : ell)
    if (v < 0 || v > 7) throw std::invalid_argument("CKey ell exponent out of range");
  if (std::abs(j) > 200) throw std::invalid_argument("CKey harmonic out of range");
  return static_cast<std::uint64_t>(e[0]) | static_cast<std::uint64_t>(e[1]) << 6 |
         static_cast<std::uint64_t>(e[2]) << 12 | static_cast<std::uint64_t>(e[3]) << 18 |
         static_cast<std::uint64_t>(ell[0]) << 24 | static_cast<std::uint64_t>(ell[1]) << 27 |
         j_bits(j);
}

CKey CKey::unpack(std::uint64_t v) {
  CKey k;
  k.e = {field(v, 0, 6), field(v, 6, 6), field(v, 12, 6), field(v, 18, 6)};
  k.ell = {field(v, 24, 3), field(v, 27, 3)};
  k.j = packed_j(v);
  return k;
}

ComplexSeries ComplexSeries::constant(cplx c) { return harmonic(0, c); }

ComplexSeries ComplexSeries::variable(int index) {
  CKey k;
  k.e.at(index) = 1;
  return from_entries({{k.pack(), 1.0}});
}

ComplexSeries ComplexSeries::ell(int index) {
  CKey k;
  k.ell.at(index) = 1;
  return from_entries({{k.pack(), 1.0}});
}

ComplexSeries ComplexSeries::harmonic(int j, cplx c) {
  CKey k;
  k.j = j;
  return from_entries({{k.pack(), c}});
}

ComplexSeries ComplexSeries::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  ComplexSeries s;
  for (const auto& [key, c] : entries) {
    if (!s.terms_.empty() && s.terms_.back().first == key)
      s.terms_.back().second += c;
    else
      s.terms_.emplace_back(key, c);
  }
  std::erase_if(s.terms_, [](const Entry& e) { return e.second == cplx{}; });
  return s;
}

cplx ComplexSeries::coefficient(const CKey& key) const {
  const std::uint64_t packed = key.pack();
  auto it = std::lower_bound(terms_.begin(), terms_.end(), packed,
                             [](const Entry& e, std::uint64_t v) { return e.first < v; });
  if (it == terms_.end() || it->first != packed) return {};
  return it->second;
}

ComplexSeries ComplexSeries::scaled(cplx c) const {
  ComplexSeries s;
  if (c == cplx{}) return s;
  s.terms_ = terms_;
  for (auto& e : s.terms_) e.second *= c;
  return s;
}

ComplexSeries ComplexSeries::conj() const {
  std::vector<Entry> out;
  out.reserve(terms_.size());
  for (const auto& [packed, c] : terms_) {
    CKey k = CKey::unpack(packed);
    std::swap(k.e[0], k.e[1]);
    std::swap(k.e[2], k.e[3]);
    k.j = -k.j;
    out.emplace_back(k.pack(), std::conj(c));
  }
  return from_entries(std::move(out));
}

ComplexSeries ComplexSeries::truncated(const CTruncation& t) const {
  ComplexSeries s;
  for (const auto& e : terms_)
    if (packed_degree(e.first) <= t.max_degree && packed_ell(e.first) <= t.max_ell &&
        std::abs(packed_j(e.first)) <= t.max_abs_j)
      s.terms_.push_back(e);
  return s;
}

ComplexSeries ComplexSeries::derivative(int index) const {
  std::vector<Entry> out;
  out.reserve(terms_.size());
  for (const auto& [packed, c] : terms_) {
    CKey k = CKey::unpack(packed);
    const int n = k.e.at(index);
    if (n == 0) continue;
    k.e[index] = n - 1;
    out.emplace_back(k.pack(), c * static_cast<double>(n));
  }
  return from_entries(std::move(out));
}

ComplexSeries ComplexSeries::degree_part(int degree) const {
  ComplexSeries s;
  for (const auto& e : terms_)
    if (packed_degree(e.first) == degree) s.terms_.push_back(e);
  return s;
}

ComplexSeries operator+(const ComplexSeries& a, const ComplexSeries& b) {
  ComplexSeries s;
  s.terms_ = merge(a.terms_, b.terms_, 1.0);
  return s;
}

ComplexSeries operator-(const ComplexSeries& a, const ComplexSeries& b) {
  ComplexSeries s;
  s.terms_ = merge(a.terms_, b.terms_, -1.0);
  return s;
}

ComplexSeries mul(const ComplexSeries& a, const ComplexSeries& b, const CTruncation& t) {
  detail::KeyAccumulator<cplx> acc(a.size() + b.size());
  mul_accumulate(acc, decode_sorted(a), decode_sorted(b), 1.0, t);
  return ComplexSeries::from_entries(acc.drain());
}

ComplexSeries bracket(const ComplexSeries& f, const ComplexSeries& g, const CTruncation& t,
                      double sigma) {
  detail::KeyAccumulator<cplx> acc(f.size() + g.size());
  const cplx unit = cplx(0.0, -sigma);  // {z, conj z}
  for (int p = 0; p < 2; ++p) {
    const int z = 2 * p, zb = 2 * p + 1;
    const auto fz = decode_sorted(f.derivative(z));
    const auto fzb = decode_sorted(f.derivative(zb));
    const auto gz = decode_sorted(g.derivative(z));
    const auto gzb = decode_sorted(g.derivative(zb));
    mul_accumulate(acc, fz, gzb, unit, t);
    mul_accumulate(acc, fzb, gz, -unit, t);
  }
  return ComplexSeries::from_entries(acc.drain());
}

cplx evaluate(const ComplexSeries& f, std::array<cplx, 2> z, std::array<double, 2> ell,
              double psi) {
  constexpr int N = 64;
  std::vector<cplx> pw(4 * N);
  const cplx base[4] = {z[0], std::conj(z[0]), z[1], std::conj(z[1])};
  for (int v = 0; v < 4; ++v) {
    pw[v * N] = 1.0;
    for (int n = 1; n < N; ++n) pw[v * N + n] = pw[v * N + n - 1] * base[v];
  }
  cplx sum{};
  for (const auto& [packed, c] : f.entries()) {
    const CKey k = CKey::unpack(packed);
    cplx t = c * pw[k.e[0]] * pw[N + k.e[1]] * pw[2 * N + k.e[2]] * pw[3 * N + k.e[3]];
    t *= std::pow(ell[0], k.ell[0]) * std::pow(ell[1], k.ell[1]);
    if (k.j != 0) t *= std::polar(1.0, k.j * psi);
    sum += t;
  }
  return sum;
}

double max_abs_coefficient(const ComplexSeries& f) {
  double m = 0.0;
  for (const auto& e : f.entries()) m = std::max(m, std::abs(e.second));
  return m;
}

}  // namespace secres
