#include "secres/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "secres/detail/accumulator.hpp"

namespace secres {

namespace {

constexpr int kKOffset = 128;
constexpr std::uint64_t kExpMask = 0xffffffffULL;

std::uint64_t pack_exps(const std::array<int, 2>& l, const std::array<int, 2>& p,
                        const std::array<int, 2>& q) {
  return static_cast<std::uint64_t>(p[0]) | static_cast<std::uint64_t>(p[1]) << 6 |
         static_cast<std::uint64_t>(q[0]) << 12 | static_cast<std::uint64_t>(q[1]) << 18 |
         static_cast<std::uint64_t>(l[0]) << 24 | static_cast<std::uint64_t>(l[1]) << 28;
}

std::uint64_t pack_trig(int k1, int k2, Parity parity) {
  return static_cast<std::uint64_t>(parity == Parity::sin) << 32 |
         static_cast<std::uint64_t>(k2 + kKOffset) << 33 |
         static_cast<std::uint64_t>(k1 + kKOffset) << 41;
}

int exp_field(std::uint64_t packed, int shift, int bits) {
  return static_cast<int>((packed >> shift) & ((1ULL << bits) - 1));
}

int packed_sec_degree(std::uint64_t e) {
  return exp_field(e, 0, 6) + exp_field(e, 6, 6) + exp_field(e, 12, 6) + exp_field(e, 18, 6);
}

int packed_l_degree(std::uint64_t e) { return exp_field(e, 24, 4) + exp_field(e, 28, 4); }

int packed_k1(std::uint64_t e) { return exp_field(e, 41, 8) - kKOffset; }
int packed_k2(std::uint64_t e) { return exp_field(e, 33, 8) - kKOffset; }
bool packed_sin(std::uint64_t e) { return (e >> 32) & 1ULL; }

void check_policy(const TruncationPolicy& p) {
  if (p.max_L_degree < 0 || p.max_sec_degree < 0 || p.max_trig_degree < 0)
    throw std::invalid_argument("truncation bounds must be non-negative");
  if (p.max_L_degree > kMaxPackedL || p.max_sec_degree > kMaxPackedSec ||
      p.max_trig_degree > kMaxPackedTrig)
    throw std::invalid_argument("truncation bounds exceed the packed key range");
}

bool admits(const TruncationPolicy& policy, std::uint64_t packed) {
  return packed_l_degree(packed) <= policy.max_L_degree &&
         packed_sec_degree(packed) <= policy.max_sec_degree &&
         std::abs(packed_k1(packed)) + std::abs(packed_k2(packed)) <= policy.max_trig_degree;
}

// Canonical form of a harmonic: returns sign applied to the coefficient, or 0.
int canonical_harmonic(int& k1, int& k2, Parity parity) {
  if (k1 < 0 || (k1 == 0 && k2 < 0)) {
    k1 = -k1;
    k2 = -k2;
    return parity == Parity::sin ? -1 : 1;
  }
  if (k1 == 0 && k2 == 0 && parity == Parity::sin) return 0;
  return 1;
}

struct Decoded {
  std::uint32_t exps;
  int sdeg;
  int ldeg;
  double c;
};

struct HarmonicGroup {
  int k1 = 0;
  int k2 = 0;
  std::vector<Decoded> by_parity[2];
  int min_sdeg[2] = {1 << 20, 1 << 20};
};

std::vector<HarmonicGroup> group_by_harmonic(const PoissonSeries& s) {
  std::vector<HarmonicGroup> groups;
  for (const auto& [key, c] : s.entries()) {
    const int k1 = packed_k1(key);
    const int k2 = packed_k2(key);
    if (groups.empty() || groups.back().k1 != k1 || groups.back().k2 != k2) {
      groups.emplace_back();
      groups.back().k1 = k1;
      groups.back().k2 = k2;
    }
    const std::uint64_t e = key & kExpMask;
    const int par = packed_sin(key) ? 1 : 0;
    auto& g = groups.back();
    g.by_parity[par].push_back(
        {static_cast<std::uint32_t>(e), packed_sec_degree(e), packed_l_degree(e), c});
  }
  for (auto& g : groups)
    for (int par = 0; par < 2; ++par) {
      auto& v = g.by_parity[par];
      std::stable_sort(v.begin(), v.end(),
                       [](const Decoded& a, const Decoded& b) { return a.sdeg < b.sdeg; });
      if (!v.empty()) g.min_sdeg[par] = v.front().sdeg;
    }
  return groups;
}

// Output harmonic of one product branch: packed trig bits and coefficient factor.
struct Branch {
  std::uint64_t bits = 0;
  double factor = 0.0;
};

Branch make_branch(int k1, int k2, Parity parity, double half_sign, int max_trig) {
  if (std::abs(k1) + std::abs(k2) > max_trig) return {};
  const int sign = canonical_harmonic(k1, k2, parity);
  if (sign == 0) return {};
  return {pack_trig(k1, k2, parity), half_sign * sign};
}

// acc += factor * a * b under policy.
void mul_accumulate(detail::KeyAccumulator<double>& acc, const std::vector<HarmonicGroup>& ga,
                    const std::vector<HarmonicGroup>& gb, double factor,
                    const TruncationPolicy& policy) {
  const int S = policy.max_sec_degree;
  const int Lmax = policy.max_L_degree;
  const int T = policy.max_trig_degree;
  for (const auto& A : ga) {
    for (const auto& B : gb) {
      const int s1 = A.k1 + B.k1, s2 = A.k2 + B.k2;
      const int d1 = A.k1 - B.k1, d2 = A.k2 - B.k2;
      if (std::abs(s1) + std::abs(s2) > T && std::abs(d1) + std::abs(d2) > T) continue;
      for (int pa = 0; pa < 2; ++pa) {
        const auto& la = A.by_parity[pa];
        if (la.empty()) continue;
        for (int pb = 0; pb < 2; ++pb) {
          const auto& lb = B.by_parity[pb];
          if (lb.empty()) continue;
          if (A.min_sdeg[pa] + B.min_sdeg[pb] > S) continue;
          Branch bs, bd;
          if (pa == 0 && pb == 0) {
            bs = make_branch(s1, s2, Parity::cos, 0.5, T);
            bd = make_branch(d1, d2, Parity::cos, 0.5, T);
          } else if (pa == 1 && pb == 1) {
            bs = make_branch(s1, s2, Parity::cos, -0.5, T);
            bd = make_branch(d1, d2, Parity::cos, 0.5, T);
          } else if (pa == 1 && pb == 0) {
            bs = make_branch(s1, s2, Parity::sin, 0.5, T);
            bd = make_branch(d1, d2, Parity::sin, 0.5, T);
          } else {
            bs = make_branch(s1, s2, Parity::sin, 0.5, T);
            bd = make_branch(d1, d2, Parity::sin, -0.5, T);
          }
          if (bs.factor == 0.0 && bd.factor == 0.0) continue;
          // Merge identical output keys (zero harmonic on one side).
          if (bs.factor != 0.0 && bd.factor != 0.0 && bs.bits == bd.bits) {
            bs.factor += bd.factor;
            bd.factor = 0.0;
            if (bs.factor == 0.0) continue;
          }
          const int bmin = B.min_sdeg[pb];
          for (const auto& ta : la) {
            if (ta.sdeg + bmin > S) break;
            const double ca = factor * ta.c;
            for (const auto& tb : lb) {
              if (ta.sdeg + tb.sdeg > S) break;
              if (ta.ldeg + tb.ldeg > Lmax) continue;
              const std::uint64_t e = static_cast<std::uint64_t>(ta.exps) + tb.exps;
              const double v = ca * tb.c;
              if (bs.factor != 0.0) acc.add(bs.bits | e, v * bs.factor);
              if (bd.factor != 0.0) acc.add(bd.bits | e, v * bd.factor);
            }
          }
        }
      }
    }
  }
}

std::vector<PoissonSeries::Entry> merge(const std::vector<PoissonSeries::Entry>& a,
                                        const std::vector<PoissonSeries::Entry>& b, double sb,
                                        const TruncationPolicy& policy) {
  std::vector<PoissonSeries::Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  auto push = [&](std::uint64_t key, double c) {
    if (c != 0.0 && admits(policy, key)) out.emplace_back(key, c);
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      push(a[i].first, a[i].second);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      push(b[j].first, sb * b[j].second);
      ++j;
    } else {
      push(a[i].first, a[i].second + sb * b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

// Entries of a * b, with operands put in a fixed order so that the result is
// bitwise independent of argument order.
std::vector<PoissonSeries::Entry> product_entries(const PoissonSeries& a, const PoissonSeries& b,
                                                  const TruncationPolicy& policy) {
  if (a.empty() || b.empty()) return {};
  const bool swap = b.entries() < a.entries();
  const PoissonSeries& x = swap ? b : a;
  const PoissonSeries& y = swap ? a : b;
  detail::KeyAccumulator<double> acc(x.size() + y.size());
  mul_accumulate(acc, group_by_harmonic(x), group_by_harmonic(y), 1.0, policy);
  return acc.drain();
}

}  // namespace


TruncationPolicy coarser(const TruncationPolicy& a, const TruncationPolicy& b) {
  return {std::min(a.max_L_degree, b.max_L_degree), std::min(a.max_sec_degree, b.max_sec_degree),
          std::min(a.max_trig_degree, b.max_trig_degree)};
}

int MonomialKey::trig_degree() const { return std::abs(k[0]) + std::abs(k[1]); }

bool MonomialKey::admitted_by(const TruncationPolicy& policy) const {
  return l_degree() <= policy.max_L_degree && sec_degree() <= policy.max_sec_degree &&
         trig_degree() <= policy.max_trig_degree;
}

int MonomialKey::canonicalize() { return canonical_harmonic(k[0], k[1], parity); }

bool MonomialKey::is_canonical() const {
  if (k[0] == 0 && k[1] == 0) return parity == Parity::cos;
  return k[0] > 0 || (k[0] == 0 && k[1] > 0);
}

std::uint64_t MonomialKey::pack() const {
  for (int j = 0; j < 2; ++j) {
    if (l[j] < 0 || p[j] < 0 || q[j] < 0) throw std::invalid_argument("negative exponent");
    if (l[j] > 15 || p[j] > 63 || q[j] > 63 || std::abs(k[j]) > kMaxPackedTrig)
      throw std::invalid_argument("exponent exceeds packed range");
  }
  return pack_exps(l, p, q) | pack_trig(k[0], k[1], parity);
}

MonomialKey MonomialKey::unpack(std::uint64_t e) {
  MonomialKey key;
  key.p = {exp_field(e, 0, 6), exp_field(e, 6, 6)};
  key.q = {exp_field(e, 12, 6), exp_field(e, 18, 6)};
  key.l = {exp_field(e, 24, 4), exp_field(e, 28, 4)};
  key.k = {packed_k1(e), packed_k2(e)};
  key.parity = packed_sin(e) ? Parity::sin : Parity::cos;
  return key;
}

MonomialKey key_L(int l1, int l2) {
  MonomialKey k;
  k.l = {l1, l2};
  return k;
}

MonomialKey key_sec(int p1, int p2, int q1, int q2) {
  MonomialKey k;
  k.p = {p1, p2};
  k.q = {q1, q2};
  return k;
}

MonomialKey key_trig(int k1, int k2, Parity parity) {
  MonomialKey k;
  k.k = {k1, k2};
  k.parity = parity;
  return k;
}

PoissonSeries::PoissonSeries(const TruncationPolicy& policy) : policy_(policy) {
  check_policy(policy);
}

PoissonSeries PoissonSeries::constant(double c, const TruncationPolicy& policy) {
  return term(MonomialKey{}, c, policy);
}

PoissonSeries PoissonSeries::term(const MonomialKey& key, double c, const TruncationPolicy& policy) {
  return from_terms({{key, c}}, policy);
}

PoissonSeries PoissonSeries::coordinate(Var v, const TruncationPolicy& policy) {
  MonomialKey key;
  switch (v) {
    case Var::L1: key.l[0] = 1; break;
    case Var::L2: key.l[1] = 1; break;
    case Var::xi1: key.p[0] = 1; break;
    case Var::xi2: key.p[1] = 1; break;
    case Var::eta1: key.q[0] = 1; break;
    case Var::eta2: key.q[1] = 1; break;
    default: throw std::invalid_argument("angles are not polynomial coordinates");
  }
  return term(key, 1.0, policy);
}

PoissonSeries PoissonSeries::from_terms(const std::vector<std::pair<MonomialKey, double>>& terms,
                                        const TruncationPolicy& policy) {
  std::vector<Entry> entries;
  entries.reserve(terms.size());
  for (auto [key, c] : terms) {
    const int sign = key.canonicalize();
    if (sign == 0 || c == 0.0) continue;
    entries.emplace_back(key.pack(), sign * c);
  }
  return from_packed(std::move(entries), policy);
}

PoissonSeries PoissonSeries::from_packed(std::vector<Entry> entries, const TruncationPolicy& policy) {
  PoissonSeries s(policy);
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (const auto& [key, c] : entries) {
    if (!admits(policy, key)) continue;
    if (!s.terms_.empty() && s.terms_.back().first == key)
      s.terms_.back().second += c;
    else
      s.terms_.emplace_back(key, c);
  }
  std::erase_if(s.terms_, [](const Entry& e) { return e.second == 0.0; });
  return s;
}

std::vector<std::pair<MonomialKey, double>> PoissonSeries::terms() const {
  std::vector<std::pair<MonomialKey, double>> out;
  out.reserve(terms_.size());
  for (const auto& [key, c] : terms_) out.emplace_back(MonomialKey::unpack(key), c);
  return out;
}

double PoissonSeries::coefficient(const MonomialKey& key) const {
  MonomialKey k = key;
  const int sign = k.canonicalize();
  if (sign == 0) return 0.0;
  const std::uint64_t packed = k.pack();
  auto it = std::lower_bound(terms_.begin(), terms_.end(), packed,
                             [](const Entry& e, std::uint64_t v) { return e.first < v; });
  if (it == terms_.end() || it->first != packed) return 0.0;
  return sign * it->second;
}

PoissonSeries PoissonSeries::truncated(const TruncationPolicy& policy) const {
  PoissonSeries s(policy);
  for (const auto& e : terms_)
    if (admits(policy, e.first)) s.terms_.push_back(e);
  return s;
}

PoissonSeries PoissonSeries::filtered(const std::function<bool(const MonomialKey&)>& keep) const {
  PoissonSeries s(policy_);
  for (const auto& e : terms_)
    if (keep(MonomialKey::unpack(e.first))) s.terms_.push_back(e);
  return s;
}

PoissonSeries PoissonSeries::scaled(double c) const {
  PoissonSeries s(policy_);
  if (c == 0.0) return s;
  s.terms_ = terms_;
  for (auto& e : s.terms_) e.second *= c;
  return s;
}

PoissonSeries PoissonSeries::cleaned(double eps) const {
  PoissonSeries s(policy_);
  for (const auto& e : terms_)
    if (std::abs(e.second) > eps) s.terms_.push_back(e);
  return s;
}

PoissonSeries series_add(const PoissonSeries& a, const PoissonSeries& b) {
  const TruncationPolicy policy = coarser(a.policy(), b.policy());
  return PoissonSeries::from_packed(merge(a.entries(), b.entries(), 1.0, policy), policy);
}

PoissonSeries operator+(const PoissonSeries& a, const PoissonSeries& b) { return series_add(a, b); }

PoissonSeries operator-(const PoissonSeries& a, const PoissonSeries& b) {
  const TruncationPolicy policy = coarser(a.policy(), b.policy());
  return PoissonSeries::from_packed(merge(a.entries(), b.entries(), -1.0, policy), policy);
}

PoissonSeries operator-(const PoissonSeries& a) { return a.scaled(-1.0); }

PoissonSeries operator*(double c, const PoissonSeries& a) { return a.scaled(c); }

PoissonSeries series_mul(const PoissonSeries& a, const PoissonSeries& b,
                         const TruncationPolicy& policy) {
  check_policy(policy);
  return PoissonSeries::from_packed(product_entries(a, b, policy), policy);
}

PoissonSeries partial_derivative(const PoissonSeries& f, Var v) {
  std::vector<PoissonSeries::Entry> out;
  out.reserve(f.size());
  for (const auto& [packed, c] : f.entries()) {
    MonomialKey key = MonomialKey::unpack(packed);
    double factor = 0.0;
    switch (v) {
      case Var::L1:
      case Var::L2: {
        int& e = key.l[v == Var::L1 ? 0 : 1];
        factor = e;
        if (e > 0) --e;
        break;
      }
      case Var::xi1:
      case Var::xi2: {
        int& e = key.p[v == Var::xi1 ? 0 : 1];
        factor = e;
        if (e > 0) --e;
        break;
      }
      case Var::eta1:
      case Var::eta2: {
        int& e = key.q[v == Var::eta1 ? 0 : 1];
        factor = e;
        if (e > 0) --e;
        break;
      }
      case Var::lambda1:
      case Var::lambda2: {
        const int kj = key.k[v == Var::lambda1 ? 0 : 1];
        if (key.parity == Parity::cos) {
          factor = -kj;
          key.parity = Parity::sin;
        } else {
          factor = kj;
          key.parity = Parity::cos;
        }
        break;
      }
    }
    if (factor == 0.0) continue;
    const int sign = key.canonicalize();
    if (sign == 0) continue;
    out.emplace_back(key.pack(), sign * factor * c);
  }
  return PoissonSeries::from_packed(std::move(out), f.policy());
}

PoissonSeries poisson_bracket(const PoissonSeries& f, const PoissonSeries& g,
                              const TruncationPolicy& policy) {
  check_policy(policy);
  struct Pair {
    Var a, b;
    double sign;
  };
  const Pair pairs[] = {{Var::lambda1, Var::L1, 1.0},
                        {Var::lambda2, Var::L2, 1.0},
                        {Var::xi1, Var::eta1, kXiEtaBracket},
                        {Var::xi2, Var::eta2, kXiEtaBracket}};
  // Each pair contributes fl(X - Y) with X, Y exact mirrors under f <-> g, so
  // {f, g} = -{g, f} holds bit for bit.
  std::vector<PoissonSeries::Entry> total;
  for (const auto& pr : pairs) {
    const auto x = product_entries(partial_derivative(f, pr.a), partial_derivative(g, pr.b), policy);
    const auto y = product_entries(partial_derivative(f, pr.b), partial_derivative(g, pr.a), policy);
    auto d = merge(x, y, -1.0, policy);
    if (pr.sign != 1.0)
      for (auto& e : d) e.second *= pr.sign;
    total = merge(total, d, 1.0, policy);
  }
  return PoissonSeries::from_packed(std::move(total), policy);
}

LieSeriesResult lie_exp(const PoissonSeries& chi, const PoissonSeries& f, int order_cap,
                        const TruncationPolicy& policy) {
  if (order_cap < 1) throw std::invalid_argument("lie_exp: order_cap must be >= 1");
  LieSeriesResult r;
  r.value = f.truncated(coarser(f.policy(), policy));
  if (chi.empty()) return r;
  PoissonSeries term = r.value;
  double prev = unit_norm(term);
  int growth = 0;
  for (int n = 1; n <= order_cap; ++n) {
    term = poisson_bracket(chi, term, policy).scaled(1.0 / n);
    if (term.empty()) break;
    r.value = PoissonSeries::from_packed(merge(r.value.entries(), term.entries(), 1.0, policy),
                                         r.value.policy());
    r.orders = n;
    const double norm = unit_norm(term);
    growth = norm > prev ? growth + 1 : 0;
    prev = norm;
    if (growth >= 3) {
      r.diverging = true;
      break;
    }
  }
  return r;
}

PoissonSeries angle_average(const PoissonSeries& f) {
  std::vector<PoissonSeries::Entry> out;
  for (const auto& e : f.entries())
    if (packed_k1(e.first) == 0 && packed_k2(e.first) == 0) out.push_back(e);
  return PoissonSeries::from_packed(std::move(out), f.policy());
}

PoissonSeries fourier_slice(const PoissonSeries& f, int K_F) {
  std::vector<PoissonSeries::Entry> out;
  for (const auto& e : f.entries()) {
    const int t = std::abs(packed_k1(e.first)) + std::abs(packed_k2(e.first));
    if (t > 0 && t <= K_F) out.push_back(e);
  }
  return PoissonSeries::from_packed(std::move(out), f.policy());
}

PoissonSeries restrict_L_degree(const PoissonSeries& f, int degree) {
  std::vector<PoissonSeries::Entry> out;
  for (const auto& e : f.entries())
    if (packed_l_degree(e.first) == degree) out.push_back(e);
  return PoissonSeries::from_packed(std::move(out), f.policy());
}

PoissonSeries restrict_sec_degree(const PoissonSeries& f, int max_degree) {
  std::vector<PoissonSeries::Entry> out;
  for (const auto& e : f.entries())
    if (packed_sec_degree(e.first) <= max_degree) out.push_back(e);
  return PoissonSeries::from_packed(std::move(out), f.policy());
}

double polydisk_norm(const PoissonSeries& f, std::array<int, 2> k, std::array<double, 2> rho) {
  int k1 = k[0], k2 = k[1];
  canonical_harmonic(k1, k2, Parity::cos);
  double sum = 0.0;
  for (const auto& [packed, c] : f.entries()) {
    if (packed_k1(packed) != k1 || packed_k2(packed) != k2) continue;
    const MonomialKey key = MonomialKey::unpack(packed);
    if (key.l_degree() != 0) continue;
    sum += std::abs(c) * std::pow(rho[0], key.p[0] + key.q[0]) * std::pow(rho[1], key.p[1] + key.q[1]);
  }
  return sum;
}

double unit_norm(const PoissonSeries& f) {
  double sum = 0.0;
  for (const auto& e : f.entries()) sum += std::abs(e.second);
  return sum;
}

double evaluate(const PoissonSeries& f, const PhaseState& s) {
  if (f.empty()) return 0.0;
  constexpr int N = 64;
  double pw[6][N];
  const double base[6] = {s.L[0], s.L[1], s.xi[0], s.xi[1], s.eta[0], s.eta[1]};
  for (int v = 0; v < 6; ++v) {
    pw[v][0] = 1.0;
    for (int n = 1; n < N; ++n) pw[v][n] = pw[v][n - 1] * base[v];
  }
  double sum = 0.0;
  for (const auto& [packed, c] : f.entries()) {
    const MonomialKey key = MonomialKey::unpack(packed);
    const double arg = key.k[0] * s.lambda[0] + key.k[1] * s.lambda[1];
    const double trig = key.parity == Parity::cos ? std::cos(arg) : std::sin(arg);
    sum += c * pw[0][key.l[0]] * pw[1][key.l[1]] * pw[2][key.p[0]] * pw[3][key.p[1]] *
           pw[4][key.q[0]] * pw[5][key.q[1]] * trig;
  }
  return sum;
}

PoissonSeries swap_planets(const PoissonSeries& f) {
  std::vector<PoissonSeries::Entry> out;
  out.reserve(f.size());
  for (const auto& [packed, c] : f.entries()) {
    MonomialKey key = MonomialKey::unpack(packed);
    std::swap(key.l[0], key.l[1]);
    std::swap(key.p[0], key.p[1]);
    std::swap(key.q[0], key.q[1]);
    std::swap(key.k[0], key.k[1]);
    const int sign = key.canonicalize();
    out.emplace_back(key.pack(), sign * c);
  }
  return PoissonSeries::from_packed(std::move(out), f.policy());
}

std::string format_key(const MonomialKey& key) {
  std::ostringstream os;
  os << key.l[0] << ' ' << key.l[1] << ' ' << key.p[0] << ' ' << key.p[1] << ' ' << key.q[0] << ' '
     << key.q[1] << ' ' << key.k[0] << ' ' << key.k[1] << ' '
     << (key.parity == Parity::cos ? "cos" : "sin");
  return os.str();
}

void write_series(std::ostream& os, const PoissonSeries& f) {
  const auto& p = f.policy();
  os << "# poisson-series L=" << p.max_L_degree << " sec=" << p.max_sec_degree
     << " trig=" << p.max_trig_degree << " terms=" << f.size() << '\n';
  char buf[64];
  for (const auto& [key, c] : f.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g", c);
    os << format_key(key) << ' ' << buf << '\n';
  }
}

PoissonSeries read_series(std::istream& is) {
  std::string line;
  TruncationPolicy policy;
  bool have_header = false;
  std::vector<std::pair<MonomialKey, double>> terms;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!have_header && std::sscanf(line.c_str(), "# poisson-series L=%d sec=%d trig=%d",
                                      &policy.max_L_degree, &policy.max_sec_degree,
                                      &policy.max_trig_degree) == 3)
        have_header = true;
      continue;
    }
    std::istringstream ls(line);
    MonomialKey key;
    std::string parity;
    double c;
    if (!(ls >> key.l[0] >> key.l[1] >> key.p[0] >> key.p[1] >> key.q[0] >> key.q[1] >> key.k[0] >>
          key.k[1] >> parity >> c) ||
        (parity != "cos" && parity != "sin"))
      throw std::runtime_error("series file: malformed term at line " + std::to_string(lineno));
    key.parity = parity == "cos" ? Parity::cos : Parity::sin;
    terms.emplace_back(key, c);
  }
  if (!have_header) throw std::runtime_error("series file: missing policy header");
  return PoissonSeries::from_terms(terms, policy);
}

}  // namespace secres
