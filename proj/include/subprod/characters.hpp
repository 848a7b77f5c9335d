#pragma once

// Dirichlet characters modulo a prime, held as exact rotations.
//
// chi_k(g^a) is the rotation by k*a/(p-1) of a turn. Every decision that can
// be made exactly (zero factors, antipodal values, the near-one test) is made
// on the integer numerator; doubles appear only in reported magnitudes.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "subprod/error.hpp"
#include "subprod/friable.hpp"
#include "subprod/modcore.hpp"

namespace subprod {

/// Value of a character at one integer: either 0 (p | n) or the rotation
/// num/den of a turn, with 0 <= num < den.
struct CharValue {
  bool zero = false;
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static CharValue zero_value() { return {true, 0, 1}; }
  static CharValue turns(std::uint64_t num, std::uint64_t den) { return {false, num % den, den}; }

  bool is_one() const noexcept { return !zero && num == 0; }
  bool is_minus_one() const noexcept { return !zero && 2 * num == den; }

  /// Numerator folded into [0, den/2], the distance to 0 turns.
  std::uint64_t folded() const noexcept { return std::min(num, den - num); }

  std::complex<double> value() const {
    if (zero) return {0.0, 0.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
    return {std::cos(angle), std::sin(angle)};
  }

  /// |chi - 1| = 2 sin(pi m / den) with m the folded numerator.
  double distance_from_one() const {
    if (zero) return 1.0;
    return 2.0 * std::sin(std::numbers::pi * static_cast<double>(folded()) / static_cast<double>(den));
  }

  /// |1 + chi| = 2 sin(pi (den - 2m) / (2 den)); exact zero at -1.
  double distance_from_minus_one() const {
    if (zero) return 1.0;
    const std::uint64_t gap = den - 2 * folded();
    return 2.0 * std::sin(std::numbers::pi * static_cast<double>(gap) / (2.0 * static_cast<double>(den)));
  }

  friend bool operator==(const CharValue&, const CharValue&) = default;
};

inline void require_character(const PrimeContext& ctx, std::uint64_t k) {
  if (k >= ctx.order())
    throw Error(Errc::BadRange, "character index " + std::to_string(k) + " outside [0, p-2]");
}

inline CharValue char_angle(const PrimeContext& ctx, std::uint64_t k, std::int64_t n) {
  require_character(ctx, k);
  const std::uint64_t r = ctx.reduce(n);
  if (r == 0) return CharValue::zero_value();
  return CharValue::turns(mul_mod(k, ctx.ind_unchecked(r), ctx.order()), ctx.order());
}

/// chi_k is real exactly when 2k = 0 mod (p-1).
inline bool is_real_character(const PrimeContext& ctx, std::uint64_t k) {
  require_character(ctx, k);
  return (2 * k) % ctx.order() == 0;
}

/// Compares 2 sin(pi m/den) with delta, for m/den in [0, 1/2] and
/// 0 < delta < 2. sin(pi q) is rational for rational q only at 0, +-1/2, +-1,
/// so the two sides are equal only at (m/den, delta) = (1/6, 1); elsewhere a
/// 50-digit evaluation settles whatever a double cannot.
inline std::strong_ordering chord_compare(std::uint64_t m, std::uint64_t den, double delta) {
  if (delta == 1.0 && 6 * m == den) return std::strong_ordering::equal;
  const double lhs = static_cast<double>(m) / static_cast<double>(den);
  const double rhs = std::asin(delta / 2.0) / std::numbers::pi;
  if (std::fabs(lhs - rhs) > 1e-12) return lhs < rhs ? std::strong_ordering::less : std::strong_ordering::greater;

  using Float = boost::multiprecision::cpp_bin_float_50;
  const Float exact_lhs = Float(m) / Float(den);
  const Float exact_rhs = boost::multiprecision::asin(Float(delta) / 2) / boost::math::constants::pi<Float>();
  return exact_lhs < exact_rhs ? std::strong_ordering::less : std::strong_ordering::greater;
}

/// |chi - 1| <= delta, decided exactly. The zero value is never near one.
inline bool is_near_one(const CharValue& v, double delta) {
  if (v.zero) return false;
  return chord_compare(v.folded(), v.den, delta) != std::strong_ordering::greater;
}

inline void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 2.0))
    throw Error(Errc::InvalidDelta, "delta = " + std::to_string(delta) + " outside (0, 2)");
}

/// Prefix sums sum_{n <= s} chi_k(n) for s = 1..t, accumulated in ascending n.
inline std::vector<std::complex<double>> char_prefix_sums(const PrimeContext& ctx, std::uint64_t k, std::uint64_t t) {
  require_character(ctx, k);
  std::vector<std::complex<double>> out;
  out.reserve(t);
  std::complex<double> acc{0.0, 0.0};
  for (std::uint64_t n = 1; n <= t; ++n) {
    acc += char_angle(ctx, k, static_cast<std::int64_t>(n)).value();
    out.push_back(acc);
  }
  return out;
}

inline std::complex<double> char_sum(const PrimeContext& ctx, std::uint64_t k, std::uint64_t t) {
  if (t == 0) throw Error(Errc::BadRange, "t must be positive");
  return char_prefix_sums(ctx, k, t).back();
}

/// Exact orthogonality over a full period: with d = gcd(k, p-1), the values
/// chi_k(1..p-1) must be every (p-1)/d-th root of unity exactly d times, and
/// those sum to zero whenever (p-1)/d > 1.
inline bool full_period_sum_vanishes(const PrimeContext& ctx, std::uint64_t k) {
  require_character(ctx, k);
  const std::uint64_t order = ctx.order();
  std::vector<std::uint64_t> hist(order, 0);
  for (std::uint64_t n = 1; n < ctx.p(); ++n) ++hist[char_angle(ctx, k, static_cast<std::int64_t>(n)).num];
  const std::uint64_t d = std::gcd(k, order);
  if (order / d <= 1) return false;
  for (std::uint64_t j = 0; j < order; ++j) {
    if (hist[j] != (j % d == 0 ? d : 0)) return false;
  }
  return true;
}

struct ExtremalSum {
  std::uint64_t k = 0;
  double magnitude = 0.0;
};

/// Largest |sum_{n <= t} chi_k(n)| over nonprincipal k (first k on ties).
/// nullopt for p = 2, which has no nonprincipal character.
inline std::optional<ExtremalSum> max_nonprincipal_sum(const PrimeContext& ctx, std::uint64_t t) {
  if (ctx.order() < 2) return std::nullopt;
  ExtremalSum best{1, -1.0};
  for (std::uint64_t k = 1; k < ctx.order(); ++k) {
    const double m = std::abs(char_sum(ctx, k, t));
    if (m > best.magnitude) best = {k, m};
  }
  return best;
}

/// sum_{n <= y} log|1 + chi_k(n)|; -infinity as soon as some chi_k(n) = -1.
inline double log_product_one_plus_chi(const PrimeContext& ctx, std::uint64_t k, std::uint64_t y) {
  require_character(ctx, k);
  if (y == 0 || y >= ctx.p()) throw Error(Errc::BadRange, "need 1 <= y < p");
  if (k == 0) return static_cast<double>(y) * std::numbers::ln2;
  double total = 0.0;
  for (std::uint64_t n = 1; n <= y; ++n) {
    const CharValue v = char_angle(ctx, k, static_cast<std::int64_t>(n));
    if (v.is_minus_one()) return -std::numeric_limits<double>::infinity();
    total += std::log(v.distance_from_minus_one());
  }
  return total;
}

struct NearOneExceptions {
  std::uint64_t count = 0;
  std::vector<std::uint64_t> members;
};

/// The n <= y with |chi_k(n) - 1| > delta; multiples of p always count.
inline NearOneExceptions near_one_exceptions(const PrimeContext& ctx, std::uint64_t k, std::uint64_t y, double delta) {
  require_delta(delta);
  require_character(ctx, k);
  NearOneExceptions out;
  for (std::uint64_t n = 1; n <= y; ++n) {
    if (!is_near_one(char_angle(ctx, k, static_cast<std::int64_t>(n)), delta)) out.members.push_back(n);
  }
  out.count = out.members.size();
  return out;
}

/// Near-one threshold used throughout: 1 / log p.
inline double default_delta(const PrimeContext& ctx) { return 1.0 / std::log(static_cast<double>(ctx.p())); }

struct AChiSet {
  std::uint64_t p = 0;
  std::uint64_t k = 0;
  std::uint64_t y = 0;
  std::uint64_t t = 0;
  double x = 0.0;
  double z = 0.0;
  std::vector<std::uint64_t> members;
  /// t - |A_chi|: the integers in [1, t] outside the set.
  std::uint64_t complement_size = 0;
  /// t log(log t / log y), the leading term for complement_size (y <= t <= y^2).
  std::optional<double> predicted_complement;
};

/// Integers n in (x, t] with P(n) <= y such that every divisor c > z of n has
/// |chi_k(c) - 1| <= 1/log p.
inline AChiSet build_A_chi(const PrimeContext& ctx, std::uint64_t k, std::uint64_t y, std::uint64_t t, double x,
                           double z) {
  require_character(ctx, k);
  if (!(z > 1.0) || z > x) throw Error(Errc::BadRange, "need 1 < z <= x");
  AChiSet out{ctx.p(), k, y, t, x, z, {}, t, std::nullopt};
  if (y >= 2 && t >= y && BigInt(t) <= BigInt(y) * y) {
    const double tt = static_cast<double>(t);
    out.predicted_complement = tt * std::log(std::log(tt) / std::log(static_cast<double>(y)));
  }
  if (static_cast<double>(t) <= x) return out;

  // Near-one verdicts depend only on the residue class.
  const double delta = default_delta(ctx);
  std::vector<char> near(ctx.p(), 0);
  for (std::uint64_t r = 1; r < ctx.p(); ++r)
    near[r] = is_near_one(char_angle(ctx, k, static_cast<std::int64_t>(r)), delta) ? 1 : 0;

  const LargestPrimeFactorSieve sieve(t);
  const auto first = static_cast<std::uint64_t>(std::floor(x)) + 1;
  for (std::uint64_t n = first; n <= t; ++n) {
    if (sieve(n) > y) continue;
    bool ok = true;
    for (std::uint64_t d = 1; d * d <= n && ok; ++d) {
      if (n % d != 0) continue;
      for (std::uint64_t c : {d, n / d}) {
        if (static_cast<double>(c) > z && !near[c % ctx.p()]) {
          ok = false;
          break;
        }
      }
    }
    if (ok) out.members.push_back(n);
  }
  out.complement_size = t - out.members.size();
  return out;
}

/// cos(k * 2 arcsin(delta/2)): the least possible Re chi(c_1 ... c_k) when
/// every |chi(c_j) - 1| <= delta. OutOfDomain once the angle could pass pi.
inline double circle_lemma_bound(unsigned k_count, double delta) {
  require_delta(delta);
  if (k_count == 0) throw Error(Errc::BadRange, "need at least one factor");
  const double angle = static_cast<double>(k_count) * 2.0 * std::asin(delta / 2.0);
  if (angle > std::numbers::pi) throw Error(Errc::OutOfDomain, "angle sum can wrap past pi; the bound is -1");
  return std::cos(angle);
}

/// Checks one instance of: z = 0 or |z| = 1, |z - 1| >= delta implies
/// |1 + z| <= 2 exp(-delta^2 / 8).
inline bool z_lemma_check(const CharValue& z, double delta) {
  require_delta(delta);
  const double bound = 2.0 * std::exp(-delta * delta / 8.0);
  if (z.zero) return !(1.0 >= delta) || 1.0 <= bound;
  const bool hypothesis = chord_compare(z.folded(), z.den, delta) != std::strong_ordering::less;
  return !hypothesis || z.distance_from_minus_one() <= bound;
}

}  // namespace subprod
