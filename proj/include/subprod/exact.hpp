#pragma once

// Exact rational exponents and integer power comparisons.
//
// Thresholds such as y^(k/2 + eps) are never evaluated in floating point when a
// verdict depends on them: n < y^(a/b) is decided as n^b < y^a over big
// integers.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

#include "subprod/error.hpp"

namespace subprod {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// A small exact rational, always stored reduced with a positive denominator.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw Error(Errc::InvalidConfig, "zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Ratio operator+(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Ratio operator-(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Ratio operator*(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend bool operator==(const Ratio& a, const Ratio& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
    // Operands are small (CLI-sized), so the cross products fit in 128 bits.
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Accepts "a/b", an integer, or a plain decimal such as "0.19".
  static Ratio parse(std::string_view text) {
    auto parse_int = [&](std::string_view s) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw Error(Errc::InvalidConfig, "cannot parse rational '" + std::string(text) + "'");
      return v;
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos)
      return Ratio(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      std::string_view whole = text.substr(0, dot);
      std::string_view frac = text.substr(dot + 1);
      if (frac.size() > 15) throw Error(Errc::InvalidConfig, "too many decimals in '" + std::string(text) + "'");
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      const bool negative = !whole.empty() && whole.front() == '-';
      if (negative) whole.remove_prefix(1);
      const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
      const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
      const std::int64_t num = w * scale + f;
      return Ratio(negative ? -num : num, scale);
    }
    return Ratio(parse_int(text));
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline BigInt big_pow(std::uint64_t base, std::uint64_t exponent) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

/// Exact comparison of value against base^exponent (exponent >= 0).
inline std::strong_ordering compare_power(std::uint64_t value, std::uint64_t base, const Ratio& exponent) {
  if (exponent.num() < 0) throw Error(Errc::OutOfDomain, "negative exponent");
  const BigInt lhs = big_pow(value, static_cast<std::uint64_t>(exponent.den()));
  const BigInt rhs = big_pow(base, static_cast<std::uint64_t>(exponent.num()));
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

/// Logarithmic comparison; returns nullopt when |log value - e*log base| is
/// inside the guard band and the floating verdict cannot be trusted.
inline std::optional<std::strong_ordering> compare_power_log(std::uint64_t value, std::uint64_t base,
                                                             const Ratio& exponent, double guard = 1e-9) {
  const double lhs = std::log(static_cast<double>(value));
  const double rhs = exponent.to_double() * std::log(static_cast<double>(base));
  const double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
  if (std::fabs(lhs - rhs) <= guard * scale) return std::nullopt;
  return lhs < rhs ? std::strong_ordering::less : std::strong_ordering::greater;
}

/// Least integer m >= 0 with m >= base^exponent.
inline std::uint64_t ceil_power(std::uint64_t base, const Ratio& exponent) {
  const double approx = std::pow(static_cast<double>(base), exponent.to_double());
  auto m = static_cast<std::uint64_t>(std::max(0.0, std::floor(approx)));
  while (m > 0 && compare_power(m - 1, base, exponent) != std::strong_ordering::less) --m;
  while (compare_power(m, base, exponent) == std::strong_ordering::less) ++m;
  return m;
}

/// Greatest integer m with m <= base^exponent.
inline std::uint64_t floor_power(std::uint64_t base, const Ratio& exponent) {
  const std::uint64_t c = ceil_power(base, exponent);
  return compare_power(c, base, exponent) == std::strong_ordering::equal ? c : c - 1;
}

}  // namespace subprod
