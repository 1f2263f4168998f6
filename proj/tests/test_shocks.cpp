#include <catch2/catch_amalgamated.hpp>

#include "prodnet/shocks.hpp"
#include "prodnet/table_io.hpp"
#include "prodnet/toy.hpp"
#include "support.hpp"

using namespace prodnet;

namespace {

std::string data_path(const std::string& rel) {
  return std::string(PRODNET_DATA_DIR) + "/" + rel;
}

IndustryAttributes toy_attributes() {
  const RawAttributes raw = read_attributes(data_path("toy/attributes.csv"));
  return align_attributes(raw, make_toy_economy().codes);
}

}  // namespace

TEST_CASE("dates and the calendar") {
  SECTION("parsing") {
    const auto d = parse_date("2020-03-23");
    REQUIRE(date_string(d) == "2020-03-23");
    REQUIRE(month_string(d) == "2020-03");
    REQUIRE_THROWS_AS(parse_date("2020-13-01"), ConfigError);
    REQUIRE_THROWS_AS(parse_date("2020-02-30"), ConfigError);
    REQUIRE_THROWS_AS(parse_date("not a date"), ConfigError);
  }
  SECTION("day indices in the default year, which is a leap year") {
    const Calendar cal;
    REQUIRE(cal.day_index(cal.sim_start) == 0);
    REQUIRE(cal.day_index(cal.lockdown_start) == 82);
    REQUIRE(cal.day_index(cal.lockdown_end) == 133);
    REQUIRE(cal.day_index(cal.trade_reopen) == 166);
    REQUIRE(cal.day_index(cal.demand_end) == 223);
    REQUIRE(date_string(cal.date_of(82)) == "2020-03-23");
  }
  SECTION("ordering is enforced") {
    Calendar cal;
    cal.lockdown_end = parse_date("2020-03-01");
    REQUIRE_THROWS_AS(cal.validate(), CalendarOrder);
    cal = Calendar{};
    cal.demand_end = parse_date("2020-04-01");
    REQUIRE_THROWS_AS(cal.validate(), CalendarOrder);
    cal = Calendar{};
    cal.trade_reopen = parse_date("2020-05-01");
    REQUIRE_THROWS_AS(cal.validate(), CalendarOrder);
    REQUIRE_NOTHROW(Calendar{}.validate());
  }
}

TEST_CASE("scenario names") {
  for (auto id : {ScenarioId::None, ScenarioId::S1, ScenarioId::S2,
                  ScenarioId::S3, ScenarioId::S4, ScenarioId::S5,
                  ScenarioId::S6})
    REQUIRE(scenario_from_string(to_string(id)) == id);
  REQUIRE_THROWS_AS(scenario_from_string("s9"), UnknownScenario);
  REQUIRE(scenario_default_iota(ScenarioId::S2) == 0.1);
  REQUIRE(scenario_default_iota(ScenarioId::S3) == 0.4);
  REQUIRE(scenario_default_iota(ScenarioId::S4) == 0.7);
}

TEST_CASE("proximity shock formula") {
  // Fully on-site essential industry at peak proximity, one tenth relief.
  REQUIRE(proximity_shock_value(0.0, 1.0, 1.0, 0.4, 0.0) ==
          Catch::Approx(0.4).margin(1e-15));
  // As the lockdown progresses the relief fades to the baseline value.
  const double end = proximity_shock_value(0.3, 0.6, 0.8, 0.4, 1.0);
  REQUIRE(end == Catch::Approx((1.0 - 0.3) * (1.0 - 0.6)).margin(1e-15));
  // No proximity at all reduces to the same baseline immediately.
  REQUIRE(proximity_shock_value(0.3, 0.6, 0.0, 0.4, 0.0) ==
          Catch::Approx((1.0 - 0.3) * (1.0 - 0.6)).margin(1e-15));
}

TEST_CASE("baseline schedule is inert") {
  const ShockSchedule s = baseline_schedule(10, 3);
  REQUIRE(s.eps_s.maxCoeff() == 0.0);
  REQUIRE(s.eps_d.maxCoeff() == 0.0);
  REQUIRE(s.f_factor.minCoeff() == 1.0);
  REQUIRE(s.row_factor.minCoeff() == 1.0);
  REQUIRE(s.lockdown_start_day == -1);
  for (auto p : s.phase) REQUIRE(p == Phase::Pre);
  REQUIRE_NOTHROW(s.validate());
}

TEST_CASE("schedule validation") {
  ShockSchedule s = baseline_schedule(5, 2);
  s.eps_s(3, 1) = 1.5;
  REQUIRE_THROWS_AS(s.validate(), DimensionMismatch);
  s = baseline_schedule(5, 2);
  s.row_factor(2, 0) = -0.1;
  REQUIRE_THROWS_AS(s.validate(), DimensionMismatch);
  s = baseline_schedule(5, 2);
  s.phase.pop_back();
  REQUIRE_THROWS_AS(s.validate(), DimensionMismatch);
}

TEST_CASE("compiled scenarios on the toy economy") {
  const Economy e = make_toy_economy();
  const IndustryAttributes at = toy_attributes();
  const Calendar cal;
  ScenarioOptions opt;
  const int h = 230;

  SECTION("phases and the demand side are scenario independent") {
    opt.fixed_supply = Vec::Constant(5, 0.2);
    const ShockSchedule s =
        compile_scenario(ScenarioId::S5, opt, e.codes, at, cal, h);
    REQUIRE(s.lockdown_start_day == 82);
    REQUIRE(s.phase[81] == Phase::Pre);
    REQUIRE(s.phase[82] == Phase::Lockdown);
    REQUIRE(s.phase[132] == Phase::Lockdown);
    REQUIRE(s.phase[133] == Phase::Post);

    // Consumption shock: flat during lockdown, halfway gone at the midpoint
    // of the recovery window, zero from its end.
    const Eigen::Index srv = 3;
    REQUIRE(s.eps_d(81, srv) == 0.0);
    REQUIRE(s.eps_d(100, srv) == 0.60);
    REQUIRE(s.eps_d(132, srv) == 0.60);
    REQUIRE(s.eps_d(178, srv) == Catch::Approx(0.30).margin(1e-15));
    REQUIRE(s.eps_d(223, srv) == 0.0);
    REQUIRE(s.eps_d(229, srv) == 0.0);

    // Investment and exports drop at the lockdown start for good.
    REQUIRE(s.f_factor(81, int(FdCategory::Investment)) == 1.0);
    REQUIRE(s.f_factor(100, int(FdCategory::Investment)) == 0.85);
    REQUIRE(s.f_factor(229, int(FdCategory::Investment)) == 0.85);
    REQUIRE(s.f_factor(100, int(FdCategory::Export)) == 0.85);
    REQUIRE(s.f_factor(100, int(FdCategory::Government)) == 1.0);
    REQUIRE(s.f_factor(100, int(FdCategory::InventoryChange)) == 1.0);
    REQUIRE(s.f_factor(100, int(FdCategory::Npish)) == 1.0);
    REQUIRE(s.row_factor.minCoeff() == 1.0);
  }

  SECTION("s1 holds shocks until the staggered reopening dates") {
    opt.s1_trade_codes = {"TRD"};
    const ShockSchedule s =
        compile_scenario(ScenarioId::S1, opt, e.codes, at, cal, h);
    const double mfg = (1.0 - 0.45) * (1.0 - 0.60);
    const double trd = (1.0 - 0.50) * (1.0 - 0.64);
    REQUIRE(s.eps_s(81, 1) == 0.0);
    REQUIRE(s.eps_s(82, 1) == mfg);
    REQUIRE(s.eps_s(140, 1) == mfg);   // past the lockdown end, still shut
    REQUIRE(s.eps_s(181, 1) == mfg);
    REQUIRE(s.eps_s(182, 1) == 0.0);   // full reopening
    REQUIRE(s.eps_s(140, 4) == trd);
    REQUIRE(s.eps_s(165, 4) == trd);
    REQUIRE(s.eps_s(166, 4) == 0.0);   // trade reopens earlier
    // Fully essential, fully remote industries are never shocked.
    REQUIRE(s.eps_s.col(0).maxCoeff() == 0.0);  // ess = 1
  }

  SECTION("proximity scenarios fade their relief over the lockdown") {
    for (auto id : {ScenarioId::S2, ScenarioId::S3, ScenarioId::S4}) {
      const ShockSchedule s =
          compile_scenario(id, opt, e.codes, at, cal, h);
      const double iota = scenario_default_iota(id);
      // The bundled proximity values already peak at exactly one.
      for (int t : {82, 99, 132}) {
        const double progress = double(t - 82) / 51.0;
        for (Eigen::Index i = 0; i < 5; ++i) {
          const double want =
              (1.0 - at.rli(i)) *
              (1.0 - at.ess(i) * (1.0 - iota * at.ppi(i) * (1.0 - progress)));
          REQUIRE(s.eps_s(t, i) == Catch::Approx(want).margin(1e-15));
        }
      }
      // Labor shocks vanish at the lockdown end in these scenarios.
      REQUIRE(s.eps_s.row(133).maxCoeff() == 0.0);
    }
  }

  SECTION("iota can be pinned explicitly") {
    opt.iota = 0.25;
    const ShockSchedule s =
        compile_scenario(ScenarioId::S2, opt, e.codes, at, cal, h);
    const double want =
        (1.0 - at.rli(4)) * (1.0 - at.ess(4) * (1.0 - 0.25 * at.ppi(4)));
    REQUIRE(s.eps_s(82, 4) == Catch::Approx(want).margin(1e-15));
  }

  SECTION("proximity needs a positive scale") {
    IndustryAttributes flat = at;
    flat.ppi = Vec::Zero(5);
    REQUIRE_THROWS_AS(
        compile_scenario(ScenarioId::S3, opt, e.codes, flat, cal, h), ZeroPPI);
  }

  SECTION("fixed vectors apply only inside the lockdown window") {
    const KeyedValues kv = read_keyed_values(
        data_path("toy/supply_fixed.csv"), "industry_code", "s5");
    opt.fixed_supply = align_values(kv, e.codes);
    const ShockSchedule s =
        compile_scenario(ScenarioId::S5, opt, e.codes, at, cal, h);
    REQUIRE(s.eps_s(81, 1) == 0.0);
    REQUIRE(s.eps_s(82, 1) == 0.30);
    REQUIRE(s.eps_s(132, 3) == 0.50);
    REQUIRE(s.eps_s(133, 3) == 0.0);
  }

  SECTION("fixed vector must match the economy") {
    opt.fixed_supply = Vec::Constant(4, 0.2);
    REQUIRE_THROWS_AS(
        compile_scenario(ScenarioId::S6, opt, e.codes, at, cal, h),
        DimensionMismatch);
  }

  SECTION("per-industry overrides replace the compiled value") {
    opt.fixed_supply = Vec::Constant(5, 0.2);
    opt.eps_s_overrides["MFG"] = 0.77;
    const ShockSchedule s =
        compile_scenario(ScenarioId::S5, opt, e.codes, at, cal, h);
    REQUIRE(s.eps_s(100, 1) == 0.77);
    REQUIRE(s.eps_s(100, 0) == 0.2);
    REQUIRE(s.eps_s(133, 1) == 0.0);  // override honors the window too

    opt.eps_s_overrides.clear();
    opt.eps_s_overrides["XXX"] = 0.5;
    REQUIRE_THROWS_AS(
        compile_scenario(ScenarioId::S5, opt, e.codes, at, cal, h),
        UnknownIndustry);
  }

  SECTION("a horizon that ends before the lockdown stays quiet") {
    opt.fixed_supply = Vec::Constant(5, 0.2);
    const ShockSchedule s =
        compile_scenario(ScenarioId::S5, opt, e.codes, at, cal, 60);
    REQUIRE(s.lockdown_start_day == -1);
    REQUIRE(s.eps_s.maxCoeff() == 0.0);
    REQUIRE(s.eps_d.maxCoeff() == 0.0);
  }

  SECTION("attribute sizes are checked") {
    IndustryAttributes bad = at;
    bad.rli = Vec::Zero(3);
    REQUIRE_THROWS_AS(
        compile_scenario(ScenarioId::S1, opt, e.codes, bad, cal, h),
        DimensionMismatch);
  }
}

TEST_CASE("expectation path") {
  const Eigen::Index n = 1;
  const Vec l0 = Vec::Constant(1, 100.0);
  const int ls = 10, le = 20;

  const auto lockdown_schedule = [&](double eps, int horizon) {
    ShockSchedule s = baseline_schedule(horizon, n);
    s.lockdown_start_day = ls;
    for (int t = ls; t < horizon; ++t) {
      s.phase[static_cast<std::size_t>(t)] =
          t < le ? Phase::Lockdown : Phase::Post;
      if (t < le) s.eps_s(t, 0) = eps;
    }
    return s;
  };

  SECTION("a 16 percent labor drop halves into a 0.92 outlook") {
    const int horizon = le + 5001;
    const ShockSchedule s = lockdown_schedule(0.16, horizon);
    const Vec xi = expectation_path(s, l0, 0.99, 0.5);
    REQUIRE(xi(0) == 1.0);
    REQUIRE(xi(ls) == Catch::Approx(0.92).margin(1e-15));
    REQUIRE(xi(le - 1) == Catch::Approx(0.92).margin(1e-15));
    // First post-lockdown step of the mean reversion.
    const double nu = -(1.0 - 0.99) * (1.0 - 0.92) * 0.5;
    REQUIRE(xi(le) ==
            Catch::Approx(1.0 - 0.99 + 0.99 * xi(le - 1) + nu).margin(1e-15));
    // Monotone recovery toward the scarred long-run level.
    for (int t = le + 1; t < horizon; ++t) REQUIRE(xi(t) >= xi(t - 1));
    REQUIRE(std::abs(xi(horizon - 1) - 0.96) < 1e-6);
    REQUIRE(xi(horizon - 1) < 0.96);  // never overshoots
  }

  SECTION("no labor shock leaves expectations at one") {
    const ShockSchedule s = lockdown_schedule(0.0, 40);
    const Vec xi = expectation_path(s, l0, 0.99, 0.5);
    REQUIRE((xi - Vec::Ones(40)).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("no lockdown leaves expectations at one") {
    const ShockSchedule s = baseline_schedule(40, n);
    const Vec xi = expectation_path(s, l0, 0.99, 0.5);
    REQUIRE((xi - Vec::Ones(40)).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("full recovery share removes the scar") {
    const int horizon = le + 3000;
    const ShockSchedule s = lockdown_schedule(0.16, horizon);
    const Vec xi = expectation_path(s, l0, 0.99, 0.0);
    REQUIRE(std::abs(xi(horizon - 1) - 1.0) < 1e-6);
  }
}
