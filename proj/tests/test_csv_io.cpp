#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "prodnet/csv.hpp"
#include "prodnet/table_io.hpp"
#include "prodnet/toy.hpp"
#include "support.hpp"

using namespace prodnet;

namespace {

std::string data_path(const std::string& rel) {
  return std::string(PRODNET_DATA_DIR) + "/" + rel;
}

/// Writes `content` to a scratch file and returns its path.
std::string scratch(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "prodnet_tests";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / name).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("csv reader enforces its format") {
  SECTION("well-formed file with CRLF endings") {
    const auto p = scratch("ok.csv", "a,b,c\r\n1,2,3\r\n4,5,6\r\n");
    const CsvTable t = read_csv(p);
    REQUIRE(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    REQUIRE(t.rows[1][2] == "6");
    REQUIRE(t.col("b") == 1);
    REQUIRE(t.has_col("c"));
    REQUIRE_FALSE(t.has_col("d"));
    REQUIRE_THROWS_AS(t.col("d"), MissingColumn);
  }
  SECTION("missing file") {
    REQUIRE_THROWS_AS(read_csv("/nonexistent/nowhere.csv"), CsvFormat);
  }
  SECTION("empty file") {
    REQUIRE_THROWS_AS(read_csv(scratch("empty.csv", "")), CsvFormat);
  }
  SECTION("ragged row") {
    REQUIRE_THROWS_AS(read_csv(scratch("ragged.csv", "a,b\n1,2,3\n")),
                      CsvFormat);
  }
  SECTION("interior blank line") {
    REQUIRE_THROWS_AS(read_csv(scratch("blank.csv", "a,b\n\n1,2\n")),
                      CsvFormat);
  }
  SECTION("trailing newline is fine") {
    const CsvTable t = read_csv(scratch("trail.csv", "a\n1\n"));
    REQUIRE(t.rows.size() == 1);
  }
}

TEST_CASE("number parsing is strict") {
  SECTION("doubles") {
    REQUIRE(parse_double("1.5", "p", 1) == 1.5);
    REQUIRE(parse_double("-2e-3", "p", 1) == -2e-3);
    REQUIRE(parse_double("+0.25", "p", 1) == 0.25);
    REQUIRE_THROWS_AS(parse_double("1.5x", "p", 1), CsvFormat);
    REQUIRE_THROWS_AS(parse_double("", "p", 1), CsvFormat);
    REQUIRE_THROWS_AS(parse_double("NA", "p", 1), CsvFormat);
  }
  SECTION("integers") {
    REQUIRE(parse_long("2018", "p", 1) == 2018);
    REQUIRE_THROWS_AS(parse_long("20.5", "p", 1), CsvFormat);
  }
  SECTION("NA detection") {
    REQUIRE(is_na("NA"));
    REQUIRE(is_na(""));
    REQUIRE_FALSE(is_na("0"));
  }
}

TEST_CASE("format_double round-trips every double it prints") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1e6, 1e6);
  for (int k = 0; k < 2000; ++k) {
    double v = unif(rng);
    if (k % 3 == 0) v /= 1e9;  // mix in small magnitudes
    const std::string s = format_double(v);
    REQUIRE(parse_double(s, "roundtrip", 0) == v);
  }
  REQUIRE(format_double(0.0) == "0");
  REQUIRE(format_double(1.0) == "1");
  REQUIRE(format_double(0.5) == "0.5");
}

TEST_CASE("io table ingestion") {
  SECTION("bundled toy table equals the built-in economy") {
    const Economy file = read_io_table(data_path("toy/io_table.csv"));
    const Economy mem = make_toy_economy();
    REQUIRE(file.codes == mem.codes);
    REQUIRE((file.z0 - mem.z0).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((file.c0 - mem.c0).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((file.f0 - mem.f0).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((file.l0 - mem.l0).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((file.x0 - mem.x0).cwiseAbs().maxCoeff() == 0.0);
    // Table defaults, deliberately different from the built-in fixture.
    REQUIRE(file.n_days.minCoeff() == 10.0);
    REQUIRE(file.criticality.minCoeff() == 1.0);
  }

  const std::string base =
      "industry_code,A,B,c,npish,government,investment,export,"
      "inventory_change,l,x\n";

  SECTION("x column must agree with row totals") {
    const auto p = scratch("bad_x.csv",
                           base +
                               "A,10,20,50,0,0,0,20,0,40,100\n"
                               "B,5,5,60,0,0,0,10,0,50,95\n");
    REQUIRE_THROWS_AS(read_io_table(p), MarketClearingViolation);
  }
  SECTION("x is canonicalized to the row totals") {
    // 100 + 5e-7 relative slack: passes the tolerance, then gets pinned.
    const auto p = scratch("near_x.csv",
                           base +
                               "A,10,20,50,0,0,0,20,0,40,100.00005\n"
                               "B,5,5,60,0,0,0,10,0,50,80\n");
    const Economy e = read_io_table(p);
    REQUIRE(e.x0(0) == 100.0);
    REQUIRE(e.x0(1) == 80.0);
  }
  SECTION("x column is optional") {
    const auto p = scratch("no_x.csv",
                           "industry_code,A,B,c,npish,government,investment,"
                           "export,inventory_change,l\n"
                           "A,10,20,50,0,0,0,20,0,40\n"
                           "B,5,5,60,0,0,0,10,0,50\n");
    const Economy e = read_io_table(p);
    REQUIRE(e.x0(0) == 100.0);
    REQUIRE(e.x0(1) == 80.0);
  }
  SECTION("annual units are converted to daily") {
    const auto p = scratch("annual.csv",
                           base +
                               "A,365,730,1825,0,0,0,730,0,1460,3650\n"
                               "B,365,365,2190,0,0,0,730,0,1825,3650\n");
    const Economy e = read_io_table(p, /*annual=*/true);
    REQUIRE(e.z0(0, 0) == Catch::Approx(1.0));
    REQUIRE(e.x0(0) == Catch::Approx(10.0));
  }
  SECTION("duplicate codes are rejected") {
    const auto p = scratch("dup.csv",
                           "industry_code,A,c,npish,government,investment,"
                           "export,inventory_change,l\n"
                           "A,1,10,0,0,0,0,0,9\n"
                           "A,1,10,0,0,0,0,0,9\n");
    REQUIRE_THROWS_AS(read_io_table(p), DuplicateCode);
  }
  SECTION("missing category column") {
    const auto p = scratch("nocat.csv",
                           "industry_code,A,c,npish,government,investment,"
                           "export,l\n"
                           "A,1,10,0,0,0,0,9\n");
    REQUIRE_THROWS_AS(read_io_table(p), MissingColumn);
  }
}

TEST_CASE("trajectory csv round-trips") {
  const Economy e = make_toy_economy();
  const ShockSchedule sched = baseline_schedule(40, e.n());
  const Trajectory traj = run_simulation(e, ProductionFunctionKind::Ihs2,
                                         sched, Params{});
  const auto dir = std::filesystem::temp_directory_path() / "prodnet_tests";
  std::filesystem::create_directories(dir);
  const std::string p = (dir / "traj.csv").string();
  write_trajectory_csv(p, e, traj);

  const auto rows = read_trajectory_csv(p);
  // One row per (day, industry) plus a TOTAL row per day.
  REQUIRE(rows.size() == traj.days.size() * (e.codes.size() + 1));
  // Spot-check an interior day against the in-memory record.
  const auto& rec = traj.days[17];
  bool saw_total = false;
  for (const auto& row : rows) {
    if (row.day != 17) continue;
    if (row.code == "TOTAL") {
      saw_total = true;
      REQUIRE(row.x == Catch::Approx(rec.x.sum()).epsilon(1e-15));
      continue;
    }
    const auto i = static_cast<Eigen::Index>(
        std::find(e.codes.begin(), e.codes.end(), row.code) -
        e.codes.begin());
    REQUIRE(i < e.n());
    // Byte-exact: the writer prints shortest round-trip representations.
    REQUIRE(row.x == rec.x(i));
    REQUIRE(row.d == rec.d(i));
    REQUIRE(row.c == rec.c(i));
    REQUIRE(row.l == rec.l(i));
  }
  REQUIRE(saw_total);
}

TEST_CASE("panel csv round-trips") {
  MonthlyPanel p;
  p.codes = {"A", "B"};
  p.months = {"2020-02", "2020-03"};
  p.values = Mat(2, 2);
  p.values << 100.0, 83.25, 100.0, 91.5;
  p.weights = Vec(2);
  p.weights << 0.3, 0.7;

  const auto dir = std::filesystem::temp_directory_path() / "prodnet_tests";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "panel.csv").string();
  write_panel_csv(path, p);
  const MonthlyPanel q = read_panel_csv(path);
  REQUIRE(q.codes == p.codes);
  REQUIRE(q.months == p.months);
  REQUIRE((q.values - p.values).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((q.weights - p.weights).cwiseAbs().maxCoeff() == 0.0);

  SECTION("bundled empirical fixture loads") {
    const MonthlyPanel emp = read_panel_csv(data_path("toy/empirical.csv"));
    REQUIRE(emp.codes.size() == 5);
    REQUIRE(emp.months.front() == "2020-02");
  }
}

TEST_CASE("attribute and survey readers") {
  SECTION("toy attributes") {
    const RawAttributes raw = read_attributes(data_path("toy/attributes.csv"));
    const Economy e = make_toy_economy();
    const IndustryAttributes at = align_attributes(raw, e.codes);
    REQUIRE(at.rli(0) == 0.30);
    REQUIRE(at.ess(3) == 0.30);
    REQUIRE(at.ppi(3) == 1.0);
    REQUIRE(at.eps_d(2) == 0.05);
  }
  SECTION("alignment rejects unknown industries") {
    const RawAttributes raw = read_attributes(data_path("toy/attributes.csv"));
    REQUIRE_THROWS_AS(align_attributes(raw, {"AGR", "MFG", "XXX", "SRV", "TRD"}),
                      MissingAttribute);
  }
  SECTION("survey reader drops rows with NA fields") {
    const auto recs = read_survey(data_path("toy/inventory_survey.csv"));
    // One ENE row carries NA begin stock and must be skipped.
    int ene_rows = 0;
    for (const auto& r : recs)
      if (r.code == "ENE") ++ene_rows;
    REQUIRE(ene_rows == 1);
  }
  SECTION("keyed values") {
    const KeyedValues kv = read_keyed_values(
        data_path("toy/supply_fixed.csv"), "industry_code", "s5");
    const Economy e = make_toy_economy();
    const Vec v = align_values(kv, e.codes);
    REQUIRE(v(1) == 0.30);
    REQUIRE_THROWS_AS(align_values(kv, {"AGR", "NOPE", "ENE", "SRV", "TRD"}),
                      UnknownIndustry);
  }
}
