#pragma once

// Brute-force reference implementations. Deliberately naive and independent
// of the library code paths they check.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= limit; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

inline std::uint64_t order_mod(std::uint64_t a, std::uint64_t p) {
  std::uint64_t x = a % p;
  for (std::uint64_t k = 1; k < p; ++k) {
    if (x == 1) return k;
    x = x * a % p;
  }
  return 0;
}

inline std::uint64_t least_primitive_root(std::uint64_t p) {
  for (std::uint64_t g = 1; g < p; ++g)
    if (order_mod(g, p) == p - 1) return g;
  return 0;
}

/// Discrete log by walking powers of g.
inline std::uint64_t dlog(std::uint64_t n, std::uint64_t g, std::uint64_t p) {
  std::uint64_t x = 1;
  for (std::uint64_t a = 0; a < p - 1; ++a) {
    if (x == n % p) return a;
    x = x * g % p;
  }
  return ~std::uint64_t{0};
}

inline std::set<std::uint64_t> squares_mod(std::uint64_t p) {
  std::set<std::uint64_t> s;
  for (std::uint64_t x = 1; x < p; ++x) s.insert(x * x % p);
  return s;
}

inline int legendre(std::int64_t a, std::uint64_t p) {
  const auto r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(p)) + p) % p);
  if (r == 0) return 0;
  return squares_mod(p).count(r) ? 1 : -1;
}

/// Subgroup generated by {1..G} as an explicit closure.
inline bool generates(std::uint64_t G, std::uint64_t p) {
  std::set<std::uint64_t> seen{1};
  std::vector<std::uint64_t> frontier{1};
  while (!frontier.empty()) {
    const std::uint64_t x = frontier.back();
    frontier.pop_back();
    for (std::uint64_t g = 1; g <= G; ++g) {
      const std::uint64_t y = x * g % p;
      if (seen.insert(y).second) frontier.push_back(y);
    }
  }
  return seen.size() == p - 1;
}

/// S_y(b) by enumerating all 2^y subsets of {1..y}.
inline std::vector<std::uint64_t> subset_counts(std::uint64_t p, std::uint64_t y) {
  std::vector<std::uint64_t> out(p, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << y); ++mask) {
    std::uint64_t prod = 1;
    for (std::uint64_t i = 0; i < y; ++i)
      if (mask >> i & 1) prod = prod * ((i + 1) % p) % p;
    ++out[prod];
  }
  return out;
}

/// Residues reachable as subset products of `elems`, by enumeration.
inline std::set<std::uint64_t> subset_products(std::uint64_t p, const std::vector<std::uint64_t>& elems) {
  std::set<std::uint64_t> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << elems.size()); ++mask) {
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (mask >> i & 1) prod = prod * (elems[i] % p) % p;
    out.insert(prod);
  }
  return out;
}

inline std::uint64_t largest_prime_factor(std::uint64_t n) {
  std::uint64_t best = 1;
  for (std::uint64_t d = 2; d <= n; ++d) {
    if (n % d == 0 && is_prime(d)) best = d;
  }
  return best;
}

inline std::uint64_t psi(std::uint64_t t, std::uint64_t y) {
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= t; ++n) {
    std::uint64_t m = n;
    for (std::uint64_t d = 2; d <= y && m > 1; ++d)
      while (m % d == 0) m /= d;
    count += m == 1;
  }
  return count;
}

/// Whether n splits into at most `parts` factors, each in (lower, upper].
/// Plain recursion over every candidate first factor.
inline bool splits(std::uint64_t n, std::uint64_t lower, std::uint64_t upper, unsigned parts,
                   std::uint64_t max_factor = ~std::uint64_t{0}) {
  if (n == 1) return true;
  if (parts == 0) return false;
  for (std::uint64_t c = 2; c <= upper && c <= n && c <= max_factor; ++c) {
    if (c <= lower || n % c != 0) continue;
    if (splits(n / c, lower, upper, parts - 1, c)) return true;
  }
  return false;
}

}  // namespace oracle
