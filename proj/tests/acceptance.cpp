// Acceptance run: one PASS/FAIL line per criterion, with measured values.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "subprod/characters.hpp"
#include "subprod/friable.hpp"
#include "subprod/sampling.hpp"
#include "subprod/subsetprod.hpp"
#include "subprod/sweep.hpp"
#include "subprod/verify.hpp"

using namespace subprod;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit_seconds <= 0 || secs < limit_seconds;
  const bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("%s %2d %s | %s | %.2f s%s\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
              in_time ? "" : " (over time limit)");
  std::fflush(stdout);
}

template <class... Args>
std::string cat(const Args&... args) {
  std::ostringstream out;
  (out << ... << args);
  return out.str();
}

/// Index table by walking powers of the least primitive root.
std::vector<std::uint64_t> index_table(std::uint64_t p) {
  const std::uint64_t g = oracle::least_primitive_root(p);
  std::vector<std::uint64_t> ind(p, 0);
  std::uint64_t x = 1;
  for (std::uint64_t a = 0; a < p - 1; ++a, x = x * g % p) ind[x] = a;
  return ind;
}

using Real = long double;
constexpr Real kPi = std::numbers::pi_v<Real>;

}  // namespace

int main() {
  criterion(1, "DP equals subset enumeration, p in {3,5,7,11,13}, y <= 16", 30, [] {
    std::uint64_t mismatches = 0, pairs = 0;
    for (std::uint64_t p : {3, 5, 7, 11, 13})
      for (std::uint64_t y = 1; y <= 16; ++y, ++pairs) {
        const auto dp = subset_product_counts_unbounded(p, y);
        const auto brute = oracle::subset_counts(p, y);
        for (std::uint64_t b = 0; b < p; ++b) mismatches += dp.counts[b] != brute[b];
      }
    return Outcome{mismatches == 0, cat("pairs=", pairs, " mismatches=", mismatches)};
  });

  criterion(2, "DP vs character formula, p <= 31, y <= 30", 60, [] {
    std::uint64_t violations = 0, pairs = 0;
    Real worst = 0;
    for (std::uint64_t p : oracle::primes_up_to(31)) {
      const auto ctx = build_context(p);
      for (std::uint64_t y = 1; y < p && y <= 30; ++y, ++pairs) {
        const auto dp = subset_product_counts(p, y);
        const auto formula = counts_via_characters(ctx, y);
        const double tol = 1e-6 * std::ldexp(1.0, static_cast<int>(y)) / static_cast<double>(p - 1) + 1e-6;
        for (std::uint64_t b = 1; b < p; ++b) {
          const double diff = std::fabs(dp.counts[b].convert_to<double>() - formula[b]);
          worst = std::max<Real>(worst, diff / tol);
          violations += diff > tol;
        }
      }
    }
    return Outcome{violations == 0,
                   cat("pairs=", pairs, " violations=", violations, " max_err/tol=", static_cast<double>(worst))};
  });

  criterion(3, "mass conservation on 1000 random (p <= 1009, y < p)", 0, [] {
    Rng rng(1);
    const auto primes = oracle::primes_up_to(1009);
    std::uint64_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
      std::uint64_t p = 2;
      while (p < 3) p = primes[uniform_between(rng, 0, primes.size() - 1)];
      const std::uint64_t y = uniform_between(rng, 1, p - 1);
      bad += subset_product_counts(p, y).total() != (BigInt(1) << static_cast<unsigned>(y));
    }
    return Outcome{bad == 0, cat("failures=", bad)};
  });

  criterion(4, "chain n2 <= G <= g and G <= y for primes 3..10^4, one worker", 300, [] {
    SweepConfig c;
    c.p_min = 3;
    c.p_max = 10000;
    std::uint64_t violations = 0, rows = 0;
    for (std::uint64_t p : primes_between(c.p_min, c.p_max)) {
      const auto r = spectrum_row(p);
      std::uint64_t n2 = 2;
      while (oracle::legendre(static_cast<std::int64_t>(n2), p) != -1) ++n2;
      violations += !(n2 == r.n2 && r.n2 <= r.G && r.G <= r.g && r.G <= r.y);
      ++rows;
    }
    return Outcome{violations == 0 && rows == 1228, cat("primes=", rows, " violations=", violations)};
  });

  criterion(5, "error ratio at ceil(p^0.6) below ratio at ceil(p^0.25), p in {101,211,401,1009}", 300, [] {
    bool ok = true;
    std::string detail;
    for (std::uint64_t p : {101, 211, 401, 1009}) {
      const std::uint64_t y = ceil_power(p, Ratio(3, 5));
      const std::uint64_t y_small = ceil_power(p, Ratio(1, 4));
      const auto r = error_report(p, y);
      const auto again = error_report(p, y);
      const auto small = error_report(p, y_small);
      const bool finite = std::isfinite(r.normalized_ratio);
      const bool same = r.normalized_ratio_exact == again.normalized_ratio_exact;
      const bool shrinks = r.normalized_ratio_exact < small.normalized_ratio_exact;
      ok = ok && finite && same && shrinks;
      detail += cat(detail.empty() ? "" : "; ", "p=", p, " y=", y, " ratio=", r.normalized_ratio, " (y=", y_small,
                    ": ", small.normalized_ratio, ")");
    }
    return Outcome{ok, detail};
  });

  criterion(6, "k-way factorization on 10^4 instances; sharpness witnesses infeasible", 120, [] {
    Rng rng(1);
    std::uint64_t failed = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto inst = sample_kway(rng);
      try {
        const auto r = greedy_k_factorization(inst.n, inst.y, inst.k);
        BigInt prod = 1;
        bool bounded = r.factors.size() == inst.k;
        for (auto b : r.factors) {
          prod *= b;
          bounded = bounded && b <= inst.y;
        }
        failed += !(bounded && prod == BigInt(inst.n));
      } catch (const Error&) {
        ++failed;
      }
    }
    std::uint64_t witnesses = 0, infeasible = 0;
    for (std::uint64_t y = 4; y <= 100; ++y)
      for (unsigned k = 1; k <= 3; ++k) {
        std::uint64_t q = 2, n = 1;
        while (q * q <= y) ++q;
        bool fits = true;
        for (unsigned j = 0; j <= k; ++j, ++q) {
          while (!oracle::is_prime(q)) ++q;
          fits = fits && q <= y;
          n *= q;
        }
        if (!fits) continue;
        ++witnesses;
        infeasible += !oracle::splits(n, 0, y, k);
      }
    return Outcome{failed == 0 && witnesses > 0 && infeasible == witnesses,
                   cat("failures=", failed, " witnesses=", witnesses, " confirmed_infeasible=", infeasible)};
  });

  criterion(7, "ranged factorization on 10^4 instances; three-way; lower-exponent witnesses", 120, [] {
    auto valid = [](const FactorizationResult& r, const RangedInstance& s) {
      std::size_t l = 0;
      BigInt prod = 1;
      for (auto c : r.factors) {
        prod *= c;
        if (c == 1 && r.mode == FactorizationMode::ThreeWay) continue;
        ++l;
        if (compare_power(c, s.y, s.eps) != std::strong_ordering::greater || c > s.y) return false;
      }
      return 2 * l > s.k && l <= s.k && prod == BigInt(s.n);
    };
    struct Tally {
      std::uint64_t ok = 0, infeasible = 0, contradictions = 0, other = 0;
      std::string first;
    };
    auto run = [&](const RangedInstance& s, Tally& t, bool three) {
      try {
        const auto r = three ? three_way_factorization(s.n, s.y, s.eps) : ranged_factorization(s.n, s.y, s.k, s.eps);
        (valid(r, s) ? t.ok : t.other) += 1;
      } catch (const Error& e) {
        if (e.kind() == Errc::InternalContradiction) {
          ++t.contradictions;
        } else if (e.kind() == Errc::Infeasible && !oracle::splits(s.n, floor_power(s.y, s.eps), s.y, s.k)) {
          ++t.infeasible;
          if (t.first.empty()) t.first = cat("n=", s.n, " y=", s.y, " k=", s.k, " eps=", s.eps.str());
        } else {
          ++t.other;
        }
      }
    };
    Rng rng(1);
    Tally ranged;
    for (int i = 0; i < 10000; ++i) run(sample_ranged(rng), ranged, false);
    Tally three;
    for (int i = 0; i < 2000; ++i) run(sample_ranged_fixed(rng, 3, Ratio(19, 100)), three, true);

    std::uint64_t witnesses = 0, confirmed = 0;
    auto witness = [&](std::uint64_t y, unsigned k, const Ratio& eps) {
      std::uint64_t q = 2;
      while (!(static_cast<double>(q * q) > std::pow(2.0, k) && oracle::is_prime(q))) ++q;
      if (compare_power(q, y, eps) != std::strong_ordering::less) return;
      std::uint64_t n = q, big = y / 2 + 1;
      for (unsigned j = 0; j < k / 2; ++j, ++big) {
        while (!oracle::is_prime(big)) ++big;
        if (big >= y) return;
        n *= big;
      }
      ++witnesses;
      confirmed += !oracle::splits(n, floor_power(y, eps), y, k);
    };
    for (std::uint64_t y = 100; y <= 400; y += 25) witness(y, 2, Ratio(24, 100));
    witness(25000, 4, Ratio(16, 100));

    const bool pass = ranged.infeasible + three.infeasible == 0 && ranged.contradictions + three.contradictions == 0 &&
                      ranged.other + three.other == 0 && witnesses > 0 && confirmed == witnesses;
    return Outcome{pass, cat("ranged ok=", ranged.ok, " infeasible=", ranged.infeasible,
                             " contradictions=", ranged.contradictions, " other=", ranged.other,
                             (ranged.first.empty() ? "" : " first=[" + ranged.first + "]"), "; three-way ok=", three.ok,
                             " infeasible=", three.infeasible, " contradictions=", three.contradictions,
                             (three.first.empty() ? "" : " first=[" + three.first + "]"), "; witnesses=", witnesses,
                             " confirmed_infeasible=", confirmed)};
  });

  criterion(8, "|1+z| <= 2exp(-delta^2/8) when |z-1| >= delta, 10^5 grid pairs", 10, [] {
    std::uint64_t violations = 0, hypothesis = 0, pairs = 0;
    for (int j = 1; j <= 100; ++j) {
      const Real delta = static_cast<Real>(j) / 50.5L;  // 100 values in (0, 2)
      const Real bound = 2.0L * std::exp(-delta * delta / 8.0L);
      for (int m = 0; m < 1000; ++m, ++pairs) {
        const Real theta = 2.0L * kPi * m / 1000.0L;
        const Real to_one = 2.0L * std::fabs(std::sin(theta / 2.0L));
        const Real to_minus_one = 2.0L * std::fabs(std::cos(theta / 2.0L));
        if (to_one < delta) continue;
        ++hypothesis;
        violations += to_minus_one > bound;
        violations += !z_lemma_check(CharValue::turns(m, 1000), static_cast<double>(delta));
      }
    }
    return Outcome{violations == 0, cat("pairs=", pairs, " under_hypothesis=", hypothesis, " violations=", violations)};
  });

  criterion(9, "exception count < 16 log^3 p when the product is large, p <= 311, y = floor(p^0.7)", 120, [] {
    std::uint64_t violations = 0, triggered = 0, characters = 0;
    for (std::uint64_t p : oracle::primes_up_to(311)) {
      if (p < 3) continue;
      const auto ind = index_table(p);
      const std::uint64_t y = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<Real>(p), 0.7L)));
      const Real lp = std::log(static_cast<Real>(p));
      const Real delta = 1.0L / lp;
      for (std::uint64_t k = 1; k < p - 1; ++k, ++characters) {
        Real sum = 0;
        std::uint64_t exceptions = 0;
        for (std::uint64_t n = 1; n <= y; ++n) {
          const Real theta = 2.0L * kPi * static_cast<Real>(k * ind[n] % (p - 1)) / static_cast<Real>(p - 1);
          sum += std::log(2.0L * std::fabs(std::cos(theta / 2.0L)));
          exceptions += 2.0L * std::fabs(std::sin(theta / 2.0L)) > delta;
        }
        if (!(sum > static_cast<Real>(y) * std::log(2.0L) - 2.0L * lp)) continue;
        ++triggered;
        violations += !(static_cast<Real>(exceptions) < 16.0L * lp * lp * lp);
      }
    }
    return Outcome{violations == 0,
                   cat("characters=", characters, " hypothesis_met=", triggered, " violations=", violations)};
  });

  criterion(10, "|sum_{n<=t} chi(n)| <= sqrt(p) log p for p <= 311, all k != 0, t <= p", 120, [] {
    std::uint64_t violations = 0;
    Real worst = 0;
    for (std::uint64_t p : oracle::primes_up_to(311)) {
      if (p < 3) continue;
      const auto ind = index_table(p);
      const Real bound = std::sqrt(static_cast<Real>(p)) * std::log(static_cast<Real>(p));
      for (std::uint64_t k = 1; k < p - 1; ++k) {
        Real re = 0, im = 0;
        for (std::uint64_t t = 1; t <= p; ++t) {
          if (t % p != 0) {
            const Real theta = 2.0L * kPi * static_cast<Real>(k * ind[t] % (p - 1)) / static_cast<Real>(p - 1);
            re += std::cos(theta);
            im += std::sin(theta);
          }
          const Real mag = std::hypot(re, im);
          worst = std::max(worst, mag / bound);
          violations += mag > bound;
        }
      }
    }
    return Outcome{violations == 0, cat("violations=", violations, " max |S|/(sqrt(p) log p)=", static_cast<double>(worst))};
  });

  criterion(11, "friable count discrepancy below the recorded constant", 60, [] {
    Real worst = 0;
    std::uint64_t points = 0;
    for (std::uint64_t y : {50, 100, 200})
      for (int i = 0; i < 20; ++i, ++points) {
        const auto t = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<Real>(y), 1.0L + i / 19.0L)));
        const Real tt = static_cast<Real>(t);
        const Real main = tt * (1.0L - std::log(std::log(tt) / std::log(static_cast<Real>(y))));
        const Real d = std::fabs(static_cast<Real>(oracle::psi(t, y)) - main) / (tt / std::log(tt));
        worst = std::max(worst, d);
      }
    return Outcome{worst < kPsiDiscrepancyBound, cat("points=", points, " max=", static_cast<double>(worst),
                                                     " recorded_constant=", kPsiDiscrepancyBound)};
  });

  criterion(12, "verify report byte-identical across runs and worker counts", 0, [] {
    SweepConfig c;
    const auto first = report_json(c, run_verification_suite(c)).dump(2);
    const auto second = report_json(c, run_verification_suite(c)).dump(2);
    c.workers = 4;
    const auto parallel = report_json(c, run_verification_suite(c)).dump(2);
    return Outcome{first == second && first == parallel, cat("bytes=", first.size())};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
