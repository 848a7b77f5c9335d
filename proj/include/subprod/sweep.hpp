#pragma once

// Prime-range sweeps: configuration, the spectrum table
// (p, n_2, g, G, y, y') and its CSV/JSON serialization.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "subprod/error.hpp"
#include "subprod/exact.hpp"
#include "subprod/modcore.hpp"
#include "subprod/parallel.hpp"
#include "subprod/subsetprod.hpp"

namespace subprod {

inline constexpr int kSchemaVersion = 1;

enum class CheckGroup { Spectrum, Theorem, Lemmas, Factorization, Friable, Burgess };

inline constexpr CheckGroup kAllGroups[] = {CheckGroup::Spectrum,      CheckGroup::Theorem, CheckGroup::Lemmas,
                                            CheckGroup::Factorization, CheckGroup::Friable, CheckGroup::Burgess};

inline std::string_view to_string(CheckGroup g) {
  switch (g) {
    case CheckGroup::Spectrum: return "spectrum";
    case CheckGroup::Theorem: return "theorem";
    case CheckGroup::Lemmas: return "lemmas";
    case CheckGroup::Factorization: return "factorization";
    case CheckGroup::Friable: return "friable";
    case CheckGroup::Burgess: return "burgess";
  }
  return "?";
}

inline CheckGroup parse_check_group(std::string_view s) {
  for (auto g : kAllGroups)
    if (to_string(g) == s) return g;
  throw Error(Errc::InvalidConfig, "unknown check group '" + std::string(s) + "'");
}

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw Error(Errc::InvalidConfig, "unknown format '" + std::string(s) + "'");
}

/// How y is chosen for a prime p: ceil(p^e) ("p^3/5", "p^0.6") or a fixed
/// value ("fixed:40"), in both cases clamped to [1, p-1].
class YRule {
 public:
  YRule() = default;

  static YRule power(const Ratio& e) {
    if (e <= Ratio(0)) throw Error(Errc::InvalidConfig, "y-rule exponent must be positive");
    YRule r;
    r.exponent_ = e;
    return r;
  }

  static YRule fixed(std::uint64_t y) {
    if (y == 0) throw Error(Errc::InvalidConfig, "fixed y must be positive");
    YRule r;
    r.fixed_ = y;
    return r;
  }

  static YRule parse(std::string_view text) {
    if (text.starts_with("fixed:")) {
      const Ratio v = Ratio::parse(text.substr(6));
      if (v.den() != 1 || v.num() <= 0) throw Error(Errc::InvalidConfig, "bad fixed y '" + std::string(text) + "'");
      return fixed(static_cast<std::uint64_t>(v.num()));
    }
    if (text.starts_with("p^")) return power(Ratio::parse(text.substr(2)));
    throw Error(Errc::InvalidConfig, "y-rule must look like p^3/5 or fixed:N, got '" + std::string(text) + "'");
  }

  std::uint64_t apply(std::uint64_t p) const {
    const std::uint64_t raw = fixed_ ? *fixed_ : ceil_power(p, exponent_);
    return std::clamp<std::uint64_t>(raw, 1, p > 2 ? p - 1 : 1);
  }

  std::string str() const { return fixed_ ? "fixed:" + std::to_string(*fixed_) : "p^" + exponent_.str(); }

 private:
  Ratio exponent_{3, 5};
  std::optional<std::uint64_t> fixed_;
};

struct SweepConfig {
  std::uint64_t p_min = 3;
  std::uint64_t p_max = 1000;
  std::set<CheckGroup> checks{std::begin(kAllGroups), std::end(kAllGroups)};
  YRule y_rule;
  Ratio epsilon{19, 100};
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;  // empty: standard output
  unsigned workers = 1;
  std::uint64_t seed = 1;
  /// Primes for the error-term reports.
  std::vector<std::uint64_t> theorem_primes{101, 211, 401, 1009};

  void validate() const {
    if (p_min < 3 || p_min > p_max) throw Error(Errc::InvalidRange, "need 3 <= pmin <= pmax");
    if (p_max > kMaxContextPrime) throw Error(Errc::InvalidRange, "pmax exceeds the index table limit");
    if (epsilon <= Ratio(0) || epsilon >= Ratio(1, 5)) throw Error(Errc::InvalidConfig, "epsilon must lie in (0, 1/5)");
    if (workers == 0) throw Error(Errc::InvalidConfig, "need at least one worker");
    for (auto p : theorem_primes) {
      if (!is_prime(p) || p < 3) throw Error(Errc::InvalidConfig, std::to_string(p) + " is not an odd prime");
      if (p > 5000) throw Error(Errc::InvalidConfig, "theorem primes are limited to 5000");
    }
  }

  bool wants(CheckGroup g) const { return checks.contains(g); }
};

inline std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = lo; q <= hi; ++q)
    if (is_prime(q)) out.push_back(q);
  return out;
}

struct SpectrumRow {
  std::uint64_t p = 0;
  std::uint64_t n2 = 0;
  std::uint64_t g = 0;
  std::uint64_t G = 0;
  std::uint64_t y = 0;
  std::optional<std::uint64_t> yprime;

  /// n_2 <= G <= g and G <= y (and y <= y' when y' exists).
  bool chain_holds() const { return n2 <= G && G <= g && G <= y && (!yprime || y <= *yprime); }

  friend bool operator==(const SpectrumRow&, const SpectrumRow&) = default;
};

inline SpectrumRow spectrum_row(std::uint64_t p) {
  const auto ctx = make_context(p);
  return {p, least_nonresidue(p), ctx->generator(), group_generation_bound(*ctx), y_of_p(ctx), y_prime_of_p(ctx)};
}

/// Rows for every prime in [p_min, p_max], ascending. ChainViolation names
/// the first prime whose row breaks the chain.
inline std::vector<SpectrumRow> run_spectrum_sweep(const SweepConfig& config) {
  config.validate();
  const auto primes = primes_between(config.p_min, config.p_max);
  auto rows = parallel_map(primes.size(), config.workers, [&](std::size_t i) { return spectrum_row(primes[i]); });
  for (const auto& r : rows)
    if (!r.chain_holds()) throw Error(Errc::ChainViolation, "chain inequality fails at p = " + std::to_string(r.p));
  return rows;
}

inline std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
  std::ostringstream out;
  out << "p,n2,g,G,y,yprime\n";
  for (const auto& r : rows) {
    out << r.p << ',' << r.n2 << ',' << r.g << ',' << r.G << ',' << r.y << ',';
    if (r.yprime) out << *r.yprime;
    out << '\n';
  }
  return out.str();
}

inline nlohmann::ordered_json spectrum_json(const std::vector<SpectrumRow>& rows) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "spectrum";
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["p"] = r.p;
    row["n2"] = r.n2;
    row["g"] = r.g;
    row["G"] = r.G;
    row["y"] = r.y;
    row["yprime"] = r.yprime ? nlohmann::ordered_json(*r.yprime) : nlohmann::ordered_json(nullptr);
    doc["rows"].push_back(std::move(row));
  }
  return doc;
}

inline std::string spectrum_text(const std::vector<SpectrumRow>& rows, OutputFormat format) {
  return format == OutputFormat::Csv ? spectrum_csv(rows) : spectrum_json(rows).dump(2) + "\n";
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file. An empty path means standard output.
inline void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content << std::flush;
    if (!std::cout) throw Error(Errc::IoFailure, "write to standard output failed");
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(Errc::IoFailure, "cannot open " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw Error(Errc::IoFailure, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::IoFailure, "cannot rename onto " + target.string());
  }
}

}  // namespace subprod
