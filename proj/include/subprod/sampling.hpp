#pragma once

// Random in-hypothesis instances for the factorization property suites.
//
// n is drawn uniformly from the admissible integer interval and rejected
// until it is y-friable, so every friable n in range is equally likely.

#include <cstdint>
#include <random>
#include <vector>

#include "subprod/exact.hpp"
#include "subprod/friable.hpp"
#include "subprod/modcore.hpp"

namespace subprod {

using Rng = std::mt19937_64;

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q <= limit; ++q)
    if (is_prime(q)) out.push_back(q);
  return out;
}

/// Friability test by dividing out the primes <= y.
inline bool friable_by(std::uint64_t n, const std::vector<std::uint64_t>& primes) {
  for (std::uint64_t q : primes) {
    while (n % q == 0) n /= q;
    if (n == 1) return true;
  }
  return n == 1;
}

inline std::uint64_t uniform_between(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

struct KWayInstance {
  std::uint64_t n = 1;
  std::uint64_t y = 0;
  unsigned k = 0;
};

/// y in [y_lo, y_hi], k in [1, k_max], n y-friable with n <= y^((k+1)/2).
inline KWayInstance sample_kway(Rng& rng, std::uint64_t y_lo = 4, std::uint64_t y_hi = 200, unsigned k_max = 6) {
  KWayInstance inst;
  inst.y = uniform_between(rng, y_lo, y_hi);
  inst.k = static_cast<unsigned>(uniform_between(rng, 1, k_max));
  const auto primes = primes_up_to(inst.y);
  const std::uint64_t limit = floor_power(inst.y, Ratio(inst.k + 1, 2));
  do {
    inst.n = uniform_between(rng, 1, limit);
  } while (!friable_by(inst.n, primes));
  return inst;
}

struct RangedInstance {
  std::uint64_t n = 1;
  std::uint64_t y = 0;
  unsigned k = 0;
  Ratio eps{0};
};

/// eps = j/1000 uniform in (0, 1/(k+2)); n y-friable with
/// y^(k/2+eps) < n < y^((k+1)/2). Parameter draws whose interval holds no
/// friable integer after a bounded number of tries are redrawn.
inline RangedInstance sample_ranged(Rng& rng, std::uint64_t y_lo = 4, std::uint64_t y_hi = 200, unsigned k_max = 6) {
  for (;;) {
    RangedInstance inst;
    inst.y = uniform_between(rng, y_lo, y_hi);
    inst.k = static_cast<unsigned>(uniform_between(rng, 1, k_max));
    const std::uint64_t j_max = 999 / (inst.k + 2);  // largest j with j/1000 < 1/(k+2)
    inst.eps = Ratio(static_cast<std::int64_t>(uniform_between(rng, 1, j_max)), 1000);
    const std::uint64_t lo = floor_power(inst.y, Ratio(inst.k, 2) + inst.eps) + 1;
    const std::uint64_t hi = ceil_power(inst.y, Ratio(inst.k + 1, 2)) - 1;
    if (lo > hi) continue;
    const auto primes = primes_up_to(inst.y);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      inst.n = uniform_between(rng, lo, hi);
      if (friable_by(inst.n, primes)) return inst;
    }
  }
}

/// Fixed k and eps; y redrawn until (y^(k/2+eps), y^((k+1)/2)) holds a
/// y-friable integer.
inline RangedInstance sample_ranged_fixed(Rng& rng, unsigned k, const Ratio& eps, std::uint64_t y_lo = 4,
                                          std::uint64_t y_hi = 200) {
  for (;;) {
    RangedInstance inst;
    inst.y = uniform_between(rng, y_lo, y_hi);
    inst.k = k;
    inst.eps = eps;
    const std::uint64_t lo = floor_power(inst.y, Ratio(k, 2) + eps) + 1;
    const std::uint64_t hi = ceil_power(inst.y, Ratio(k + 1, 2)) - 1;
    if (lo > hi) continue;
    const auto primes = primes_up_to(inst.y);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      inst.n = uniform_between(rng, lo, hi);
      if (friable_by(inst.n, primes)) return inst;
    }
  }
}

}  // namespace subprod
