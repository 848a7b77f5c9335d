#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subprod {

enum class Errc {
  NotPrime,
  TooLarge,
  InvalidDelta,
  BadRange,
  OutOfDomain,
  NotCoprime,
  BadDifference,
  YOutOfRange,
  PrecisionRange,
  RangeViolation,
  NotFriable,
  BoundViolated,
  HypothesisViolated,
  Infeasible,
  InternalContradiction,
  InvalidConfig,
  InvalidRange,
  ChainViolation,
  IoFailure,
};

constexpr std::string_view to_string(Errc e) noexcept {
  switch (e) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InvalidDelta: return "InvalidDelta";
    case Errc::BadRange: return "BadRange";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::BadDifference: return "BadDifference";
    case Errc::YOutOfRange: return "YOutOfRange";
    case Errc::PrecisionRange: return "PrecisionRange";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::NotFriable: return "NotFriable";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::Infeasible: return "Infeasible";
    case Errc::InternalContradiction: return "InternalContradiction";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::ChainViolation: return "ChainViolation";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(Errc kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  Errc kind() const noexcept { return kind_; }

 private:
  Errc kind_;
};

}  // namespace subprod
