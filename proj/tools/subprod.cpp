// subprod: command-line front end for sweeps, counts, factorizations and the
// verification suite. Exit status 0 when everything passes, 1 on any FAIL,
// 2 on usage or I/O errors.

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "subprod/characters.hpp"
#include "subprod/friable.hpp"
#include "subprod/subsetprod.hpp"
#include "subprod/sweep.hpp"
#include "subprod/verify.hpp"

using namespace subprod;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::uint64_t p_min = 3;
  std::uint64_t p_max = 1000;
  std::string y_rule = "p^3/5";
  std::string epsilon = "19/100";
  std::string format = "csv";
  std::string out;
  unsigned workers = 1;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--pmin", p_min, "Smallest prime of the range")->capture_default_str();
    cmd->add_option("--pmax", p_max, "Largest prime of the range")->capture_default_str();
    cmd->add_option("--y-rule", y_rule, "y per prime: p^E or fixed:N")->capture_default_str();
    cmd->add_option("--epsilon", epsilon, "Rational epsilon, e.g. 19/100")->capture_default_str();
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd->add_option("--out", out, "Output path (default: standard output)");
    cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", seed, "Seed for randomized harnesses")->capture_default_str();
  }

  SweepConfig config() const {
    SweepConfig c;
    c.p_min = p_min;
    c.p_max = p_max;
    c.y_rule = YRule::parse(y_rule);
    c.epsilon = Ratio::parse(epsilon);
    c.format = parse_format(format);
    c.out_path = out;
    c.workers = workers;
    c.seed = seed;
    return c;
  }
};

std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string rational_str(const BigRational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case Errc::ChainViolation:
    case Errc::Infeasible:
    case Errc::InternalContradiction:
      return kExitFail;
    default:
      return kExitUsage;
  }
}

int run_spectrum(const CommonFlags& flags) {
  const auto config = flags.config();
  write_output(config.out_path, spectrum_text(run_spectrum_sweep(config), config.format));
  return 0;
}

int run_counts(const CommonFlags& flags, std::uint64_t p, std::uint64_t y) {
  const auto config = flags.config();
  const auto counts = subset_product_counts(p, y);
  std::string text;
  if (config.format == OutputFormat::Csv) {
    std::ostringstream out;
    out << "b,count\n";
    for (std::uint64_t b = 1; b < p; ++b) out << b << ',' << counts.counts[b].str() << '\n';
    text = out.str();
  } else {
    const auto report = error_report(counts);
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "counts";
    doc["p"] = p;
    doc["y"] = y;
    doc["counts"] = Json::array();
    for (std::uint64_t b = 1; b < p; ++b) doc["counts"].push_back(counts.counts[b].str());
    doc["main_term"] = rational_str(report.main_term);
    doc["max_abs_error"] = rational_str(report.max_abs_error);
    doc["argmax_b"] = report.argmax_b;
    doc["normalized_ratio"] = report.normalized_ratio;
    text = doc.dump(2) + "\n";
  }
  write_output(config.out_path, text);
  return 0;
}

int run_coverage(const CommonFlags& flags, std::uint64_t p, std::int64_t a, std::int64_t d, std::uint64_t y_max) {
  const auto config = flags.config();
  const auto y = y_of_progression(p, a, d, y_max);
  std::string text;
  if (config.format == OutputFormat::Csv) {
    std::ostringstream out;
    out << "p,a,d,ymax,y\n" << p << ',' << a << ',' << d << ',' << y_max << ',';
    if (y) out << *y;
    out << '\n';
    text = out.str();
  } else {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "coverage";
    doc["p"] = p;
    doc["a"] = a;
    doc["d"] = d;
    doc["ymax"] = y_max;
    doc["y"] = y ? Json(*y) : Json(nullptr);
    text = doc.dump(2) + "\n";
  }
  write_output(config.out_path, text);
  return 0;
}

int run_factorize(const CommonFlags& flags, std::uint64_t n, std::uint64_t y, unsigned k, const std::string& mode) {
  const auto config = flags.config();
  FactorizationResult r;
  if (mode == "kway") {
    r = greedy_k_factorization(n, y, k);
  } else if (mode == "ranged") {
    r = ranged_factorization(n, y, k, config.epsilon);
  } else {
    r = three_way_factorization(n, y, config.epsilon);
  }
  std::string text;
  if (config.format == OutputFormat::Csv) {
    std::ostringstream out;
    out << "n,y,k,epsilon,mode,method,factors\n"
        << n << ',' << y << ',' << r.params.k << ',' << r.params.epsilon.str() << ',' << to_string(r.mode) << ','
        << to_string(r.method) << ',';
    for (std::size_t i = 0; i < r.factors.size(); ++i) out << (i ? "*" : "") << r.factors[i];
    out << '\n';
    text = out.str();
  } else {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "factorization";
    doc["n"] = n;
    doc["y"] = y;
    doc["k"] = r.params.k;
    doc["epsilon"] = r.params.epsilon.str();
    doc["mode"] = to_string(r.mode);
    doc["method"] = to_string(r.method);
    doc["factors"] = r.factors;
    text = doc.dump(2) + "\n";
  }
  write_output(config.out_path, text);
  return 0;
}

int run_charsum(const CommonFlags& flags, std::uint64_t p, std::uint64_t k, std::uint64_t t) {
  const auto config = flags.config();
  const auto s = char_sum(build_context(p), k, t);
  std::string text;
  if (config.format == OutputFormat::Csv) {
    text = "p,k,t,re,im,abs\n" + std::to_string(p) + "," + std::to_string(k) + "," + std::to_string(t) + "," +
           fmt_double(s.real()) + "," + fmt_double(s.imag()) + "," + fmt_double(std::abs(s)) + "\n";
  } else {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "charsum";
    doc["p"] = p;
    doc["k"] = k;
    doc["t"] = t;
    doc["re"] = s.real();
    doc["im"] = s.imag();
    doc["abs"] = std::abs(s);
    text = doc.dump(2) + "\n";
  }
  write_output(config.out_path, text);
  return 0;
}

int run_verify(const CommonFlags& flags, const std::vector<std::string>& groups,
               const std::vector<std::uint64_t>& theorem_primes) {
  auto config = flags.config();
  if (!groups.empty()) {
    config.checks.clear();
    for (const auto& g : groups) config.checks.insert(parse_check_group(g));
  }
  if (!theorem_primes.empty()) config.theorem_primes = theorem_primes;
  const auto records = run_verification_suite(config);
  for (const auto& r : records)
    std::cerr << to_string(r.status) << ' ' << r.name << ' ' << r.params.dump() << " (" << fmt_double(r.elapsed_seconds)
              << " s)\n";
  write_output(config.out_path, report_text(config, records));
  return any_failed(records) ? kExitFail : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subset products modulo primes: sweeps, counts, factorizations, verification"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* spectrum = app.add_subcommand("spectrum", "Table of n2, g, G, y, y' over a prime range");
  flags.attach(spectrum);

  std::uint64_t p = 0, y = 0, y_max = 0, n = 0, t = 0, k_char = 0;
  std::int64_t a = 0, d = 1;
  unsigned k = 3;
  std::string mode = "kway";

  auto* counts = app.add_subcommand("counts", "Exact subset-product counts S_y(b) for one (p, y)");
  flags.attach(counts);
  counts->add_option("--p", p, "Prime modulus")->required();
  counts->add_option("--y", y, "Length of the initial segment")->required();

  auto* coverage = app.add_subcommand("coverage", "Covering length of the progression a, a+d, ...");
  flags.attach(coverage);
  coverage->add_option("--p", p, "Prime modulus")->required();
  coverage->add_option("--a", a, "First term")->required();
  coverage->add_option("--d", d, "Common difference")->required();
  coverage->add_option("--ymax", y_max, "Largest number of terms to try")->required();

  auto* factorize = app.add_subcommand("factorize", "Friable factorization with bounded parts");
  flags.attach(factorize);
  factorize->add_option("--n", n, "Integer to factor")->required();
  factorize->add_option("--y", y, "Friability and part bound")->required();
  factorize->add_option("--k", k, "Number of parts")->capture_default_str();
  factorize->add_option("--mode", mode, "kway, ranged or threeway")
      ->check(CLI::IsMember({"kway", "ranged", "threeway"}))
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  flags.attach(verify);
  std::vector<std::string> groups;
  std::vector<std::uint64_t> theorem_primes;
  verify->add_option("--checks", groups, "Groups: spectrum theorem lemmas factorization friable burgess")
      ->delimiter(',');
  verify->add_option("--theorem-primes", theorem_primes, "Primes for the error-term reports")->delimiter(',');

  auto* charsum = app.add_subcommand("charsum", "Character sum over n <= t");
  flags.attach(charsum);
  charsum->add_option("--p", p, "Prime modulus")->required();
  charsum->add_option("--k", k_char, "Character index in [0, p-2]")->required();
  charsum->add_option("--t", t, "Upper end of the sum")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(flags);
    if (counts->parsed()) return run_counts(flags, p, y);
    if (coverage->parsed()) return run_coverage(flags, p, a, d, y_max);
    if (factorize->parsed()) return run_factorize(flags, n, y, k, mode);
    if (verify->parsed()) return run_verify(flags, groups, theorem_primes);
    if (charsum->parsed()) return run_charsum(flags, p, k_char, t);
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    std::cerr << (code == kExitFail ? "FAIL: " : "error: ") << e.what() << '\n';
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
