#pragma once

// Friable (smooth) integers: largest prime factors, exact and asymptotic
// counts Psi(t, y), and bounded-part factorizations of y-friable integers.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subprod/error.hpp"
#include "subprod/exact.hpp"

namespace subprod {

/// Prime factors of n with multiplicity, largest first. Trial division.
inline std::vector<std::uint64_t> prime_factors_descending(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    while (n % q == 0) {
      out.push_back(q);
      n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  std::reverse(out.begin(), out.end());
  return out;
}

/// P(n), with P(1) = 1.
inline std::uint64_t largest_prime_factor(std::uint64_t n) {
  if (n == 0) throw Error(Errc::BadRange, "P(0) is undefined");
  const auto f = prime_factors_descending(n);
  return f.empty() ? 1 : f.front();
}

inline bool is_friable(std::uint64_t n, std::uint64_t y) { return largest_prime_factor(n) <= y; }

/// Table of P(n) for 1 <= n <= limit.
class LargestPrimeFactorSieve {
 public:
  explicit LargestPrimeFactorSieve(std::uint64_t limit) : table_(limit + 1, 0) {
    if (limit >= 1) table_[1] = 1;
    for (std::uint64_t q = 2; q <= limit; ++q) {
      if (table_[q] != 0) continue;
      // Ascending q overwrites, leaving the largest prime factor.
      for (std::uint64_t m = q; m <= limit; m += q) table_[m] = static_cast<std::uint32_t>(q);
    }
  }

  std::uint64_t limit() const noexcept { return table_.size() - 1; }
  std::uint64_t operator()(std::uint64_t n) const { return table_.at(n); }

 private:
  std::vector<std::uint32_t> table_;
};

/// Psi(t, y) = #{n <= t : P(n) <= y}.
inline std::uint64_t psi_exact(std::uint64_t t, std::uint64_t y) {
  if (y >= t) return t;
  const LargestPrimeFactorSieve sieve(t);
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= t; ++n) count += sieve(n) <= y ? 1 : 0;
  return count;
}

/// Main term t(1 - log(log t / log y)), valid for y <= t <= y^2.
inline double psi_asymptotic(std::uint64_t t, std::uint64_t y) {
  if (y < 2) throw Error(Errc::RangeViolation, "y must be at least 2");
  if (t < y || BigInt(t) > BigInt(y) * y)
    throw Error(Errc::RangeViolation, "t = " + std::to_string(t) + " outside [y, y^2] for y = " + std::to_string(y));
  const double td = static_cast<double>(t);
  return td * (1.0 - std::log(std::log(td) / std::log(static_cast<double>(y))));
}

enum class FactorizationMode { KWay, Ranged, ThreeWay };
enum class FactorizationMethod {
  Constructive,     // the greedy / pairing construction
  Search,           // exhaustive divisor search
  BestEffortGreedy  // greedy run outside its guaranteed range
};

inline std::string_view to_string(FactorizationMode m) {
  switch (m) {
    case FactorizationMode::KWay: return "kway";
    case FactorizationMode::Ranged: return "ranged";
    case FactorizationMode::ThreeWay: return "threeway";
  }
  return "?";
}

inline std::string_view to_string(FactorizationMethod m) {
  switch (m) {
    case FactorizationMethod::Constructive: return "constructive";
    case FactorizationMethod::Search: return "search";
    case FactorizationMethod::BestEffortGreedy: return "best-effort-greedy";
  }
  return "?";
}

struct FactorizationParams {
  std::uint64_t y = 0;
  unsigned k = 0;
  Ratio epsilon{0};
};

struct FactorizationResult {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> factors;
  FactorizationParams params;
  FactorizationMode mode = FactorizationMode::KWay;
  FactorizationMethod method = FactorizationMethod::Constructive;

  BigInt product() const {
    BigInt prod = 1;
    for (auto f : factors) prod *= f;
    return prod;
  }
};

/// First-fit placement of primes (largest first) into `buckets` slots, each
/// capped at `cap`: a prime q goes to the lowest-indexed slot b with b*q <= cap.
/// Returns nullopt if some prime fits nowhere.
inline std::optional<std::vector<std::uint64_t>> greedy_buckets(const std::vector<std::uint64_t>& primes_desc,
                                                                unsigned buckets, std::uint64_t cap) {
  std::vector<std::uint64_t> b(buckets, 1);
  for (std::uint64_t q : primes_desc) {
    auto slot = std::find_if(b.begin(), b.end(), [&](std::uint64_t v) { return q <= cap / v; });
    if (slot == b.end()) return std::nullopt;
    *slot *= q;
  }
  return b;
}

/// All divisors of n, ascending.
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out{1};
  auto primes = prime_factors_descending(n);
  std::reverse(primes.begin(), primes.end());
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    const std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (std::size_t e = i; e < j; ++e) {
      pk *= primes[i];
      for (std::size_t m = 0; m < base; ++m) out.push_back(out[m] * pk);
    }
    i = j;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Exhaustive search for n = c_1 ... c_l with l <= max_parts and every
/// c_i in (lower, upper]. Factors come back in nonincreasing order; the
/// search prefers large leading factors. n = 1 yields the empty product.
inline std::optional<std::vector<std::uint64_t>> search_factorization(std::uint64_t n, std::uint64_t lower,
                                                                      std::uint64_t upper, unsigned max_parts) {
  std::vector<std::uint64_t> candidates;
  for (auto d : divisors(n))
    if (d > lower && d <= upper && d > 1) candidates.push_back(d);

  std::vector<std::uint64_t> chosen;
  std::function<bool(std::uint64_t, std::size_t, unsigned)> go = [&](std::uint64_t m, std::size_t hi,
                                                                     unsigned parts_left) -> bool {
    if (m == 1) return true;
    if (parts_left == 0) return false;
    for (std::size_t i = hi; i-- > 0;) {
      const std::uint64_t d = candidates[i];
      if (m % d != 0) continue;
      chosen.push_back(d);
      if (go(m / d, i + 1, parts_left - 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (go(n, candidates.size(), max_parts)) return chosen;
  return std::nullopt;
}

enum class GreedyMode { Strict, BestEffort };

/// n = b_1 ... b_k with every b_j <= y, for y-friable n <= y^((k+1)/2).
/// Primes are assigned largest first to the lowest-indexed factor that stays
/// within y. BestEffort skips the size hypothesis and reports BoundViolated
/// only if the greedy actually gets stuck.
inline FactorizationResult greedy_k_factorization(std::uint64_t n, std::uint64_t y, unsigned k,
                                                  GreedyMode mode = GreedyMode::Strict) {
  if (n == 0 || k == 0 || y == 0) throw Error(Errc::BadRange, "n, y and k must be positive");
  if (largest_prime_factor(n) > y)
    throw Error(Errc::NotFriable, std::to_string(n) + " is not " + std::to_string(y) + "-friable");
  const bool in_range = compare_power(n, y, Ratio(k + 1, 2)) != std::strong_ordering::greater;
  if (!in_range && mode == GreedyMode::Strict)
    throw Error(Errc::BoundViolated, std::to_string(n) + "^2 > " + std::to_string(y) + "^" + std::to_string(k + 1));

  auto buckets = greedy_buckets(prime_factors_descending(n), k, y);
  if (!buckets) {
    if (in_range) throw Error(Errc::InternalContradiction, "greedy stuck inside its guaranteed range");
    throw Error(Errc::BoundViolated, "best-effort greedy could not place every prime");
  }
  return FactorizationResult{n, std::move(*buckets), {y, k, Ratio(0)}, FactorizationMode::KWay,
                             in_range ? FactorizationMethod::Constructive : FactorizationMethod::BestEffortGreedy};
}

namespace detail {

inline void check_ranged_result(const FactorizationResult& r, std::uint64_t small_cap) {
  const unsigned k = r.params.k;
  const std::size_t l = r.factors.size();
  if (2 * l <= k || l > k)
    throw Error(Errc::InternalContradiction, "part count " + std::to_string(l) + " outside (k/2, k]");
  for (auto c : r.factors)
    if (c <= small_cap || c > r.params.y)
      throw Error(Errc::InternalContradiction, "factor " + std::to_string(c) + " outside (y^eps, y]");
  if (r.product() != r.n) throw Error(Errc::InternalContradiction, "factors do not multiply to n");
}

}  // namespace detail

/// n = c_1 ... c_l with k/2 < l <= k and every c_j in (y^eps, y], for
/// y-friable n with y^(k/2+eps) < n < y^((k+1)/2) and 0 < eps < 1/(k+2).
///
/// When n is also y^(1-eps)-friable the factorization is built directly:
/// a (k+1)-way greedy split under the cap y^(1-eps), the two smallest parts
/// merged, and each part <= y^eps paired with a distinct larger part. A
/// prime of n above y^(1-eps) defeats that construction, and then the
/// hypothesis alone does not guarantee a factorization (2 * 53^2 with
/// y = 100, eps = 19/100 has none), so an exhaustive search decides: the
/// result is flagged Search, or Infeasible is thrown.
inline FactorizationResult ranged_factorization(std::uint64_t n, std::uint64_t y, unsigned k, const Ratio& eps) {
  if (k == 0 || y < 2) throw Error(Errc::HypothesisViolated, "need k >= 1 and y >= 2");
  if (eps <= Ratio(0) || eps >= Ratio(1, k + 2))
    throw Error(Errc::HypothesisViolated, "eps = " + eps.str() + " outside (0, 1/(k+2))");
  if (largest_prime_factor(n) > y)
    throw Error(Errc::NotFriable, std::to_string(n) + " is not " + std::to_string(y) + "-friable");
  if (compare_power(n, y, Ratio(k, 2) + eps) != std::strong_ordering::greater ||
      compare_power(n, y, Ratio(k + 1, 2)) != std::strong_ordering::less)
    throw Error(Errc::HypothesisViolated, std::to_string(n) + " outside (y^(k/2+eps), y^((k+1)/2))");

  const std::uint64_t small_cap = floor_power(y, eps);              // c admissible iff c > small_cap
  const std::uint64_t inner_cap = floor_power(y, Ratio(1) - eps);   // y^(1-eps), rounded down

  FactorizationResult result{n, {}, {y, k, eps}, FactorizationMode::Ranged, FactorizationMethod::Constructive};
  const auto primes = prime_factors_descending(n);

  if (!primes.empty() && primes.front() > inner_cap) {
    auto found = search_factorization(n, small_cap, y, k);
    if (!found)
      throw Error(Errc::Infeasible, std::to_string(n) + " has no factorization into at most " + std::to_string(k) +
                                        " parts in (y^eps, y] although it meets the size hypothesis");
    result.factors = std::move(*found);
    result.method = FactorizationMethod::Search;
    detail::check_ranged_result(result, small_cap);
    return result;
  }

  auto b = greedy_buckets(primes, k + 1, inner_cap);
  if (!b) throw Error(Errc::InternalContradiction, "(k+1)-way greedy failed under y^(1-eps)");
  std::sort(b->begin(), b->end());

  const std::uint64_t merged = (*b)[0] * (*b)[1];
  if (merged > y) throw Error(Errc::InternalContradiction, "two smallest parts exceed y");
  std::vector<std::uint64_t> rest(b->begin() + 2, b->end());  // ascending, each <= y^(1-eps)

  std::vector<std::uint64_t> small;
  std::vector<std::uint64_t> large;
  for (auto c : rest) (c <= small_cap ? small : large).push_back(c);
  const bool merged_small = merged <= small_cap;
  if (merged_small) small.push_back(merged);
  if (small.size() > large.size())
    throw Error(Errc::InternalContradiction, "more small parts than partners");

  // The i-th small part (ascending) pairs with the i-th large part; each
  // product is at most y^eps * y^(1-eps) = y.
  for (std::size_t i = 0; i < small.size(); ++i) result.factors.push_back(small[i] * large[i]);
  for (std::size_t i = small.size(); i < large.size(); ++i) result.factors.push_back(large[i]);
  if (!merged_small) result.factors.push_back(merged);
  // Unit parts only arise from empty greedy slots; drop them.
  std::erase(result.factors, std::uint64_t{1});

  detail::check_ranged_result(result, small_cap);
  return result;
}

/// n = c_1 c_2 c_3 with each c_i = 1 or in (y^eps, y], for y-friable n with
/// y^(3/2+eps) < n < y^2 and 0 < eps < 1/5.
inline FactorizationResult three_way_factorization(std::uint64_t n, std::uint64_t y, const Ratio& eps) {
  auto r = ranged_factorization(n, y, 3, eps);
  r.mode = FactorizationMode::ThreeWay;
  r.factors.resize(3, 1);
  return r;
}

}  // namespace subprod
