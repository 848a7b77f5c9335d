#pragma once

// Prime moduli and the multiplicative group (Z/pZ)^x: primality, primitive
// roots, index (discrete log) tables, Legendre symbols, and the classical
// spectrum n_2(p), g(p), G(p).

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "subprod/error.hpp"

namespace subprod {

/// Largest prime accepted by PrimeContext. The index table costs 4 bytes per
/// residue, so this caps a context at 256 MiB.
inline constexpr std::uint64_t kMaxContextPrime = std::uint64_t{1} << 26;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for all
/// 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t q : bases) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : bases) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Distinct prime factors in ascending order, by trial division.
inline std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
}

inline void require_odd_prime(std::uint64_t p) {
  require_prime(p);
  if (p == 2) throw Error(Errc::NotPrime, "an odd prime is required");
}

/// Least positive integer of multiplicative order p-1. For p = 2 this is 1.
inline std::uint64_t least_primitive_root(std::uint64_t p) {
  require_prime(p);
  if (p == 2) return 1;
  const auto factors = distinct_prime_factors(p - 1);
  for (std::uint64_t g = 2;; ++g) {
    bool primitive = true;
    for (std::uint64_t q : factors) {
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return g;
  }
}

/// Legendre symbol (a/p) by Euler's criterion.
inline int legendre(std::int64_t a, std::uint64_t p) {
  require_odd_prime(p);
  const auto m = static_cast<std::int64_t>(p);
  const auto r = static_cast<std::uint64_t>(((a % m) + m) % m);
  if (r == 0) return 0;
  return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// n_2(p): the least quadratic nonresidue.
inline std::uint64_t least_nonresidue(std::uint64_t p) {
  require_odd_prime(p);
  for (std::uint64_t n = 2;; ++n) {
    if (legendre(static_cast<std::int64_t>(n), p) == -1) return n;
  }
}

/// A prime p together with its least primitive root g and the full index
/// table n -> a with g^a = n (mod p). Immutable once built.
class PrimeContext {
 public:
  explicit PrimeContext(std::uint64_t p) : p_(p) {
    require_prime(p);
    if (p > kMaxContextPrime)
      throw Error(Errc::TooLarge, "p = " + std::to_string(p) + " exceeds the index table limit " +
                                      std::to_string(kMaxContextPrime));
    g_ = least_primitive_root(p);
    ind_.assign(p, 0);
    std::uint64_t x = 1;
    for (std::uint64_t a = 0; a < p - 1; ++a) {
      ind_[x] = static_cast<std::uint32_t>(a);
      x = x * g_ % p;
    }
  }

  std::uint64_t p() const noexcept { return p_; }
  std::uint64_t generator() const noexcept { return g_; }
  std::uint64_t order() const noexcept { return p_ - 1; }

  /// Index of n (any integer coprime to p).
  std::uint64_t ind(std::int64_t n) const {
    const std::uint64_t r = reduce(n);
    if (r == 0) throw Error(Errc::NotCoprime, std::to_string(n) + " is divisible by p");
    return ind_[r];
  }

  /// Index of an already-reduced nonzero residue; no checks.
  std::uint64_t ind_unchecked(std::uint64_t residue) const noexcept { return ind_[residue]; }

  std::uint64_t reduce(std::int64_t n) const noexcept {
    const auto m = static_cast<std::int64_t>(p_);
    return static_cast<std::uint64_t>(((n % m) + m) % m);
  }

  /// Legendre symbol read off the index parity.
  int legendre(std::int64_t n) const {
    if (reduce(n) == 0) return 0;
    if (p_ == 2) return 1;
    return ind(n) % 2 == 0 ? 1 : -1;
  }

 private:
  std::uint64_t p_;
  std::uint64_t g_ = 1;
  std::vector<std::uint32_t> ind_;
};

using PrimeContextPtr = std::shared_ptr<const PrimeContext>;

inline PrimeContext build_context(std::uint64_t p) { return PrimeContext(p); }
inline PrimeContextPtr make_context(std::uint64_t p) { return std::make_shared<const PrimeContext>(p); }

/// G(p): least G such that {1, ..., G} generates (Z/pZ)^x, i.e. the first G
/// with gcd(p-1, ind 2, ..., ind G) = 1.
inline std::uint64_t group_generation_bound(const PrimeContext& ctx) {
  std::uint64_t g = ctx.order();
  if (g == 1) return 1;
  for (std::uint64_t n = 2; n < ctx.p(); ++n) {
    g = std::gcd(g, ctx.ind_unchecked(n));
    if (g == 1) return n;
  }
  // The primitive root lies below p, so the loop always returns.
  throw Error(Errc::InternalContradiction, "no generating prefix found");
}

}  // namespace subprod
