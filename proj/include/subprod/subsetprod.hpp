#pragma once

// Subset products modulo a prime: coverage thresholds y(p), y'(p), the
// arithmetic-progression variant, and exact counts S_y(b) with their
// deviation from the equidistributed value 2^y/(p-1).
//
// The empty subset is always counted; its product is 1.

#include <boost/dynamic_bitset.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "subprod/characters.hpp"
#include "subprod/error.hpp"
#include "subprod/exact.hpp"
#include "subprod/modcore.hpp"

namespace subprod {

/// Residues reachable as subset products of the elements consumed so far.
///
/// Stored in index coordinates: bit a stands for g^a. Multiplying the reached
/// set by n is then a cyclic shift by ind(n), done a word at a time.
class CoverageState {
 public:
  explicit CoverageState(PrimeContextPtr ctx) : ctx_(std::move(ctx)), bits_(ctx_->order()) { bits_.set(0); }

  std::uint64_t p() const noexcept { return ctx_->p(); }
  std::uint64_t elements_consumed() const noexcept { return consumed_; }
  std::size_t covered() const { return bits_.count(); }
  bool complete() const { return bits_.all(); }

  bool contains(std::int64_t n) const {
    const std::uint64_t r = ctx_->reduce(n);
    return r != 0 && bits_.test(ctx_->ind_unchecked(r));
  }

  /// reached <- reached U (reached * n). NotCoprime if p | n.
  void consume(std::int64_t n) {
    const std::uint64_t shift = ctx_->ind(n);
    const std::size_t len = bits_.size();
    if (shift != 0) bits_ |= (bits_ << shift) | (bits_ >> (len - shift));
    ++consumed_;
  }

  /// Reached residues in ascending order.
  std::vector<std::uint64_t> residues() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t r = 1; r < ctx_->p(); ++r)
      if (bits_.test(ctx_->ind_unchecked(r))) out.push_back(r);
    return out;
  }

 private:
  PrimeContextPtr ctx_;
  boost::dynamic_bitset<std::uint64_t> bits_;
  std::uint64_t consumed_ = 0;
};

inline CoverageState coverage_consume(CoverageState state, std::int64_t n) {
  state.consume(n);
  return state;
}

/// y(p): least y >= 1 such that subset products of {1, ..., y} reach every
/// reduced residue.
inline std::uint64_t y_of_p(const PrimeContextPtr& ctx) {
  CoverageState state(ctx);
  if (state.complete()) return 1;
  for (std::uint64_t n = 1; n < ctx->p(); ++n) {
    state.consume(static_cast<std::int64_t>(n));
    if (state.complete()) return n;
  }
  throw Error(Errc::InternalContradiction, "{1..p-1} failed to cover");
}

inline std::uint64_t y_of_p(std::uint64_t p) { return y_of_p(make_context(p)); }

/// y'(p): least y' such that products of distinct primes <= y' (other than p)
/// reach every reduced residue; nullopt when even all primes below p fail.
inline std::optional<std::uint64_t> y_prime_of_p(const PrimeContextPtr& ctx) {
  CoverageState state(ctx);
  if (state.complete()) return 1;
  for (std::uint64_t q = 2; q < ctx->p(); ++q) {
    if (!is_prime(q)) continue;
    state.consume(static_cast<std::int64_t>(q));
    if (state.complete()) return q;
  }
  return std::nullopt;
}

inline std::optional<std::uint64_t> y_prime_of_p(std::uint64_t p) { return y_prime_of_p(make_context(p)); }

/// Least y <= y_max such that subset products of a, a+d, ..., a+(y-1)d,
/// skipping terms divisible by p, reach every reduced residue; nullopt if
/// y_max terms do not suffice. A progression lying entirely in 0 mod p is
/// never covering; any other p | d is BadDifference.
inline std::optional<std::uint64_t> y_of_progression(const PrimeContextPtr& ctx, std::int64_t a, std::int64_t d,
                                                     std::uint64_t y_max) {
  const std::uint64_t p = ctx->p();
  const std::uint64_t ar = ctx->reduce(a);
  const std::uint64_t dr = ctx->reduce(d);
  if (dr == 0) {
    if (ar == 0) return std::nullopt;
    throw Error(Errc::BadDifference, "common difference is a multiple of p");
  }
  CoverageState state(ctx);
  if (state.complete()) return y_max >= 1 ? std::optional<std::uint64_t>(1) : std::nullopt;
  std::uint64_t term = ar;
  for (std::uint64_t i = 0; i < y_max; ++i, term = (term + dr) % p) {
    if (term == 0) continue;
    state.consume(static_cast<std::int64_t>(term));
    if (state.complete()) return i + 1;
  }
  return std::nullopt;
}

inline std::optional<std::uint64_t> y_of_progression(std::uint64_t p, std::int64_t a, std::int64_t d,
                                                     std::uint64_t y_max) {
  return y_of_progression(make_context(p), a, d, y_max);
}

/// Exact S(b) for every residue b, including b = 0 (subsets whose product is
/// divisible by p, zero unless some element is). `universe` is the number of
/// elements coprime to p, so the reduced classes sum to 2^universe and all
/// classes to 2^y. For {1, ..., y} with y < p, universe = y. A progression
/// with one multiple of p has universe = y - 1, which is where a 2^(y-1)
/// main term comes from.
struct SubsetProductCounts {
  std::uint64_t p = 0;
  std::uint64_t y = 0;
  std::uint64_t universe = 0;
  std::vector<BigInt> counts;

  const BigInt& at(std::uint64_t b) const { return counts.at(b % p); }

  BigInt total() const {
    BigInt sum = 0;
    for (const auto& c : counts) sum += c;
    return sum;
  }

  BigInt reduced_total() const { return total() - counts[0]; }
};

namespace detail {

/// Take-or-skip DP over residues on fixed-width limb rows: element e adds
/// old row r into row r*e. Width fits 2^(#elements).
inline std::vector<BigInt> subset_product_dp(std::uint64_t p, const std::vector<std::uint64_t>& elements) {
  const std::size_t width = elements.size() / 64 + 1;
  std::vector<std::uint64_t> cur(p * width, 0);
  std::vector<std::uint64_t> next;
  cur[1 * width] = 1;
  for (std::uint64_t e : elements) {
    next = cur;
    for (std::uint64_t r = 0; r < p; ++r) {
      const std::uint64_t* src = &cur[r * width];
      std::uint64_t* dst = &next[(r * e % p) * width];
      unsigned char carry = 0;
      for (std::size_t w = 0; w < width; ++w) {
        const unsigned __int128 s = static_cast<unsigned __int128>(dst[w]) + src[w] + carry;
        dst[w] = static_cast<std::uint64_t>(s);
        carry = static_cast<unsigned char>(s >> 64);
      }
    }
    cur.swap(next);
  }
  std::vector<BigInt> out(p);
  for (std::uint64_t r = 0; r < p; ++r) {
    const auto* row = &cur[r * width];
    boost::multiprecision::import_bits(out[r], row, row + width, 64, false);
  }
  return out;
}

}  // namespace detail

/// S_y(b) for b in [1, p-1], 1 <= y < p.
inline SubsetProductCounts subset_product_counts(std::uint64_t p, std::uint64_t y) {
  require_prime(p);
  if (y == 0 || y >= p) throw Error(Errc::YOutOfRange, "need 1 <= y < p");
  std::vector<std::uint64_t> elements(y);
  for (std::uint64_t n = 1; n <= y; ++n) elements[n - 1] = n;
  return {p, y, y, detail::subset_product_dp(p, elements)};
}

/// S_y(b) for any y >= 0; once y >= p the multiples of p feed counts[0].
inline SubsetProductCounts subset_product_counts_unbounded(std::uint64_t p, std::uint64_t y) {
  require_prime(p);
  std::vector<std::uint64_t> elements(y);
  std::uint64_t universe = 0;
  for (std::uint64_t n = 1; n <= y; ++n) {
    elements[n - 1] = n % p;
    universe += n % p != 0;
  }
  return {p, y, universe, detail::subset_product_dp(p, elements)};
}

/// Counts for the progression a, a+d, ..., a+(y-1)d.
inline SubsetProductCounts progression_counts(std::uint64_t p, std::int64_t a, std::int64_t d, std::uint64_t y) {
  require_prime(p);
  const auto m = static_cast<std::int64_t>(p);
  const auto ar = static_cast<std::uint64_t>(((a % m) + m) % m);
  const auto dr = static_cast<std::uint64_t>(((d % m) + m) % m);
  if (dr == 0) throw Error(Errc::BadDifference, "common difference is a multiple of p");
  std::vector<std::uint64_t> elements;
  std::uint64_t universe = 0;
  std::uint64_t term = ar;
  for (std::uint64_t i = 0; i < y; ++i, term = (term + dr) % p) {
    elements.push_back(term);
    universe += term != 0;
  }
  return {p, y, universe, detail::subset_product_dp(p, elements)};
}

/// Largest y for which counts_via_characters promises its tolerance.
inline constexpr std::uint64_t kCharacterFormulaMaxY = 60;

/// S_y(b) through character orthogonality:
///   S_y(b) = 1/(p-1) sum_k chi_k(b)^-1 prod_{n <= y} (1 + chi_k(n)).
/// Index 0 of the result is unused.
inline std::vector<double> counts_via_characters(const PrimeContext& ctx, std::uint64_t y) {
  if (y == 0 || y >= ctx.p()) throw Error(Errc::YOutOfRange, "need 1 <= y < p");
  if (y > kCharacterFormulaMaxY)
    throw Error(Errc::PrecisionRange, "y > " + std::to_string(kCharacterFormulaMaxY));
  const std::uint64_t order = ctx.order();
  std::vector<std::complex<double>> roots(order);
  for (std::uint64_t j = 0; j < order; ++j) roots[j] = CharValue::turns(j, order).value();

  std::vector<std::complex<double>> acc(ctx.p(), {0.0, 0.0});
  for (std::uint64_t k = 0; k < order; ++k) {
    std::complex<double> prod{1.0, 0.0};
    for (std::uint64_t n = 1; n <= y; ++n) prod *= 1.0 + roots[mul_mod(k, ctx.ind_unchecked(n), order)];
    for (std::uint64_t b = 1; b < ctx.p(); ++b) {
      const std::uint64_t a = mul_mod(k, ctx.ind_unchecked(b), order);
      acc[b] += roots[(order - a) % order] * prod;
    }
  }
  std::vector<double> out(ctx.p(), 0.0);
  for (std::uint64_t b = 1; b < ctx.p(); ++b) out[b] = acc[b].real() / static_cast<double>(order);
  return out;
}

/// Deviation of S_y(b) from 2^y/(p-1), in exact rationals.
struct ErrorReport {
  std::uint64_t p = 0;
  std::uint64_t y = 0;
  BigRational main_term;
  BigRational max_abs_error;
  std::uint64_t argmax_b = 1;
  /// max_abs_error * p^2 / 2^y.
  BigRational normalized_ratio_exact;
  double normalized_ratio = 0.0;
};

inline ErrorReport error_report(const SubsetProductCounts& counts) {
  const BigInt full = BigInt(1) << static_cast<unsigned>(counts.universe);
  const BigInt order = counts.p - 1;
  BigInt worst = -1;
  std::uint64_t argmax = 1;
  for (std::uint64_t b = 1; b < counts.p; ++b) {
    BigInt dev = counts.counts[b] * order - full;
    if (dev < 0) dev = -dev;
    if (dev > worst) {
      worst = dev;
      argmax = b;
    }
  }
  ErrorReport r;
  r.p = counts.p;
  r.y = counts.y;
  r.main_term = BigRational(full, order);
  r.max_abs_error = BigRational(worst, order);
  r.argmax_b = argmax;
  r.normalized_ratio_exact = r.max_abs_error * BigRational(BigInt(counts.p) * counts.p, full);
  r.normalized_ratio = r.normalized_ratio_exact.convert_to<double>();
  return r;
}

inline ErrorReport error_report(std::uint64_t p, std::uint64_t y) { return error_report(subset_product_counts(p, y)); }

}  // namespace subprod
