#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "subprod/sweep.hpp"
#include "subprod/verify.hpp"

using namespace subprod;

namespace {

SweepConfig range(std::uint64_t lo, std::uint64_t hi) {
  SweepConfig c;
  c.p_min = lo;
  c.p_max = hi;
  return c;
}

std::uint64_t oracle_G(std::uint64_t p) {
  for (std::uint64_t G = 1;; ++G)
    if (oracle::generates(G, p)) return G;
}

}  // namespace

TEST(Spectrum, ExampleRows) {
  const auto rows = run_spectrum_sweep(range(5, 7));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].p, 5u);
  EXPECT_EQ(rows[0].n2, 2u);
  EXPECT_EQ(rows[0].g, 2u);
  EXPECT_EQ(rows[0].G, 2u);
  EXPECT_EQ(rows[0].y, 4u);
  EXPECT_EQ(rows[1].p, 7u);
  EXPECT_EQ(rows[1].n2, 3u);
  EXPECT_EQ(rows[1].g, 3u);
  EXPECT_EQ(rows[1].G, 3u);
  EXPECT_EQ(rows[1].y, 4u);
  EXPECT_FALSE(rows[1].yprime.has_value());

  const auto csv = spectrum_csv(rows);
  std::istringstream lines(csv);
  std::string header, r5, r7;
  std::getline(lines, header);
  std::getline(lines, r5);
  std::getline(lines, r7);
  EXPECT_EQ(header, "p,n2,g,G,y,yprime");
  EXPECT_TRUE(r5.starts_with("5,2,2,2,4,"));
  EXPECT_EQ(r7, "7,3,3,3,4,");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');
}

TEST(Spectrum, SinglePrimeAndEmptyRange) {
  const auto rows = run_spectrum_sweep(range(3, 3));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].y, 2u);
  EXPECT_EQ(spectrum_csv(run_spectrum_sweep(range(24, 28))), "p,n2,g,G,y,yprime\n");
  const auto doc = spectrum_json({});
  EXPECT_EQ(doc["schema_version"], kSchemaVersion);
  EXPECT_TRUE(doc["rows"].empty());
}

TEST(Spectrum, RowsMatchOracles) {
  for (const auto& r : run_spectrum_sweep(range(3, 200))) {
    ASSERT_EQ(r.g, oracle::least_primitive_root(r.p));
    ASSERT_EQ(r.G, oracle_G(r.p));
    std::uint64_t n2 = 2;
    while (oracle::legendre(n2, r.p) != -1) ++n2;
    ASSERT_EQ(r.n2, n2);
    ASSERT_TRUE(r.chain_holds());
  }
}

TEST(Spectrum, WorkerCountDoesNotChangeRows) {
  auto c = range(3, 3000);
  const auto one = run_spectrum_sweep(c);
  c.workers = 4;
  const auto four = run_spectrum_sweep(c);
  EXPECT_EQ(one, four);
  for (std::size_t i = 1; i < one.size(); ++i) ASSERT_LT(one[i - 1].p, one[i].p);
}

TEST(Config, Validation) {
  EXPECT_THROW(range(2, 10).validate(), Error);
  EXPECT_THROW(range(11, 10).validate(), Error);
  auto c = range(3, 10);
  c.epsilon = Ratio(1, 5);
  EXPECT_THROW(c.validate(), Error);
  c.epsilon = Ratio(0);
  EXPECT_THROW(c.validate(), Error);
  c.epsilon = Ratio(19, 100);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, YRule) {
  const YRule def;
  EXPECT_EQ(def.str(), "p^3/5");
  EXPECT_EQ(def.apply(101), 16u);  // 101^(3/5) = 15.9...
  EXPECT_EQ(def.apply(3), 2u);
  EXPECT_EQ(YRule::parse("p^0.25").apply(101), 4u);
  EXPECT_EQ(YRule::parse("fixed:40").apply(101), 40u);
  EXPECT_EQ(YRule::parse("fixed:40").apply(11), 10u);
  EXPECT_THROW(YRule::parse("q^2"), Error);
  EXPECT_THROW(YRule::parse("fixed:0"), Error);
}

TEST(Output, AtomicWriteReplacesTarget) {
  const auto dir = std::filesystem::temp_directory_path() / "subprod_sweep_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.csv").string();
  write_output(path, "old\n");
  write_output(path, "new\n");
  std::ifstream f(path);
  std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "new\n");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_THROW(write_output((dir / "missing" / "x.csv").string(), "x"), Error);
  std::filesystem::remove_all(dir);
}

TEST(Verify, FilteringRunsOnlyChosenGroups) {
  auto c = range(3, 50);
  c.checks = {CheckGroup::Lemmas};
  const auto records = run_verification_suite(c);
  ASSERT_FALSE(records.empty());
  for (const auto& r : records) EXPECT_EQ(r.group, CheckGroup::Lemmas) << r.name;
  for (const auto& r : records) EXPECT_EQ(r.status, CheckStatus::Pass) << r.name;
}

TEST(Verify, ReportIsDeterministicAcrossWorkers) {
  auto c = range(3, 300);
  c.checks = {CheckGroup::Spectrum, CheckGroup::Theorem, CheckGroup::Friable};
  c.theorem_primes = {101};
  const auto a = report_json(c, run_verification_suite(c)).dump(2);
  c.workers = 3;
  const auto b = report_json(c, run_verification_suite(c)).dump(2);
  EXPECT_EQ(a, b);
  const auto doc = Json::parse(a);
  EXPECT_EQ(doc["schema_version"], kSchemaVersion);
  EXPECT_FALSE(doc["config"].contains("workers"));
  for (const auto& check : doc["checks"]) EXPECT_FALSE(check.contains("elapsed_seconds"));
}

TEST(Verify, ErrorTermRecordsAreReports) {
  auto c = range(3, 10);
  c.checks = {CheckGroup::Theorem};
  c.theorem_primes = {101};
  for (const auto& r : run_verification_suite(c)) {
    if (r.name == "theorem_error") {
      EXPECT_EQ(r.status, CheckStatus::Report);
      EXPECT_EQ(r.params["y"], 16);
    } else {
      EXPECT_EQ(r.status, CheckStatus::Pass) << r.name;
    }
  }
}

TEST(Verify, CsvReportShape) {
  CheckRecord r{"x", CheckGroup::Friable, Json{{"a", "b\"c"}}, CheckStatus::Pass, Json{{"v", 1}}};
  EXPECT_EQ(report_csv({r}), "check,group,status,params,metrics\nx,friable,PASS,\"{\"\"a\"\":\"\"b\\\"\"c\"\"}\",\"{\"\"v\"\":1}\"\n");
}
