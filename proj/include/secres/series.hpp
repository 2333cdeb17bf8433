#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace secres {

// Bounds applied to every stored term. Exponents of L are limited by the total
// L-degree, (xi, eta) by the total secular degree, harmonics by |k1| + |k2|.
struct TruncationPolicy {
  int max_L_degree = 1;
  int max_sec_degree = 12;
  int max_trig_degree = 12;

  friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

// Componentwise minimum of two policies.
TruncationPolicy coarser(const TruncationPolicy& a, const TruncationPolicy& b);

// Largest bounds that the packed key layout can hold without overflow in sums.
inline constexpr int kMaxPackedL = 7;
inline constexpr int kMaxPackedSec = 31;
inline constexpr int kMaxPackedTrig = 100;

enum class Parity : std::uint8_t { cos = 0, sin = 1 };

struct MonomialKey {
  std::array<int, 2> l{};
  std::array<int, 2> p{};
  std::array<int, 2> q{};
  std::array<int, 2> k{};
  Parity parity = Parity::cos;

  int l_degree() const { return l[0] + l[1]; }
  int sec_degree() const { return p[0] + p[1] + q[0] + q[1]; }
  int trig_degree() const;
  bool admitted_by(const TruncationPolicy& policy) const;

  // Brings k to its canonical representative and returns the factor (+1, -1,
  // or 0 for sin of the zero harmonic) by which the coefficient must be scaled.
  int canonicalize();
  bool is_canonical() const;

  std::uint64_t pack() const;
  static MonomialKey unpack(std::uint64_t packed);

  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
};

// Convenience constructors for keys.
MonomialKey key_L(int l1, int l2);
MonomialKey key_sec(int p1, int p2, int q1, int q2);
MonomialKey key_trig(int k1, int k2, Parity parity);

enum class Var { L1, L2, lambda1, lambda2, xi1, xi2, eta1, eta2 };

struct PhaseState {
  std::array<double, 2> L{};
  std::array<double, 2> lambda{};
  std::array<double, 2> xi{};
  std::array<double, 2> eta{};
};

class PoissonSeries {
 public:
  using Entry = std::pair<std::uint64_t, double>;

  PoissonSeries() = default;
  explicit PoissonSeries(const TruncationPolicy& policy);

  static PoissonSeries constant(double c, const TruncationPolicy& policy = {});
  static PoissonSeries term(const MonomialKey& key, double c, const TruncationPolicy& policy = {});
  // L_j, xi_j or eta_j as a degree-one series.
  static PoissonSeries coordinate(Var v, const TruncationPolicy& policy = {});
  // Builds a series from (key, coefficient) pairs; duplicate keys are summed,
  // keys are canonicalized, terms outside the policy are dropped.
  static PoissonSeries from_terms(const std::vector<std::pair<MonomialKey, double>>& terms,
                                  const TruncationPolicy& policy);
  // Takes already canonical packed entries; sorts and sums duplicates.
  static PoissonSeries from_packed(std::vector<Entry> entries, const TruncationPolicy& policy);

  const TruncationPolicy& policy() const { return policy_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::vector<Entry>& entries() const { return terms_; }
  std::vector<std::pair<MonomialKey, double>> terms() const;

  double coefficient(const MonomialKey& key) const;

  // Same terms under a different (usually tighter) policy.
  PoissonSeries truncated(const TruncationPolicy& policy) const;
  PoissonSeries filtered(const std::function<bool(const MonomialKey&)>& keep) const;
  PoissonSeries scaled(double c) const;
  PoissonSeries cleaned(double eps) const;

  friend bool operator==(const PoissonSeries&, const PoissonSeries&) = default;

 private:
  std::vector<Entry> terms_;
  TruncationPolicy policy_{};
};

PoissonSeries operator+(const PoissonSeries& a, const PoissonSeries& b);
PoissonSeries operator-(const PoissonSeries& a, const PoissonSeries& b);
PoissonSeries operator-(const PoissonSeries& a);
PoissonSeries operator*(double c, const PoissonSeries& a);

PoissonSeries series_add(const PoissonSeries& a, const PoissonSeries& b);
PoissonSeries series_mul(const PoissonSeries& a, const PoissonSeries& b,
                         const TruncationPolicy& policy);
PoissonSeries partial_derivative(const PoissonSeries& f, Var v);

// Sign of the secular pair in the Poisson structure: {xi_j, eta_j} = kXiEtaBracket.
// The fast pair is fixed by {lambda_j, L_j} = 1.
inline constexpr double kXiEtaBracket = -1.0;

PoissonSeries poisson_bracket(const PoissonSeries& f, const PoissonSeries& g,
                              const TruncationPolicy& policy);

struct LieSeriesResult {
  PoissonSeries value;
  int orders = 0;        // brackets actually added
  bool diverging = false;
};

// f + {chi, f} + 1/2 {chi, {chi, f}} + ... up to order_cap brackets.
LieSeriesResult lie_exp(const PoissonSeries& chi, const PoissonSeries& f, int order_cap,
                        const TruncationPolicy& policy);

PoissonSeries angle_average(const PoissonSeries& f);
PoissonSeries fourier_slice(const PoissonSeries& f, int K_F);
PoissonSeries restrict_L_degree(const PoissonSeries& f, int degree);
PoissonSeries restrict_sec_degree(const PoissonSeries& f, int max_degree);

// Weighted norm of the k-harmonic (both parities); L-dependent terms ignored.
double polydisk_norm(const PoissonSeries& f, std::array<int, 2> k, std::array<double, 2> rho);
// Sum of |c| over all terms (unit radii, every harmonic).
double unit_norm(const PoissonSeries& f);

double evaluate(const PoissonSeries& f, const PhaseState& s);

// Exchanges planet labels 1 <-> 2 in every key.
PoissonSeries swap_planets(const PoissonSeries& f);

void write_series(std::ostream& os, const PoissonSeries& f);
PoissonSeries read_series(std::istream& is);
std::string format_key(const MonomialKey& key);

}  // namespace secres
