#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "prodnet/economy.hpp"
#include "prodnet/errors.hpp"
#include "prodnet/types.hpp"

namespace prodnet {

// ---- calendar -----------------------------------------------------------

inline std::chrono::year_month_day parse_date(const std::string& s) {
  int y = 0, m = 0, d = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
    throw ConfigError("bad date: '" + s + "', expected YYYY-MM-DD");
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw ConfigError("invalid calendar date: '" + s + "'");
  return ymd;
}

inline std::string date_string(std::chrono::year_month_day d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(d.year()),
                unsigned(d.month()), unsigned(d.day()));
  return buf;
}

inline std::string month_string(std::chrono::year_month_day d) {
  char buf[12];
  std::snprintf(buf, sizeof(buf), "%04d-%02u", int(d.year()),
                unsigned(d.month()));
  return buf;
}

/// The dates that shape every scenario. Day indices are measured from
/// sim_start; intervals are half open, [start, end).
struct Calendar {
  std::chrono::year_month_day sim_start{std::chrono::year{2020},
                                        std::chrono::month{1},
                                        std::chrono::day{1}};
  std::chrono::year_month_day lockdown_start{std::chrono::year{2020},
                                             std::chrono::month{3},
                                             std::chrono::day{23}};
  std::chrono::year_month_day lockdown_end{std::chrono::year{2020},
                                           std::chrono::month{5},
                                           std::chrono::day{13}};
  std::chrono::year_month_day trade_reopen{std::chrono::year{2020},
                                           std::chrono::month{6},
                                           std::chrono::day{15}};
  std::chrono::year_month_day demand_end{std::chrono::year{2020},
                                         std::chrono::month{8},
                                         std::chrono::day{11}};

  int day_index(std::chrono::year_month_day d) const {
    return int((std::chrono::sys_days{d} - std::chrono::sys_days{sim_start})
                   .count());
  }

  std::chrono::year_month_day date_of(int day) const {
    return std::chrono::year_month_day{std::chrono::sys_days{sim_start} +
                                       std::chrono::days{day}};
  }

  void validate() const {
    if (!(sim_start <= lockdown_start))
      throw CalendarOrder("lockdown starts before the simulation");
    if (!(lockdown_start < lockdown_end))
      throw CalendarOrder("lockdown must end after it starts");
    if (!(lockdown_end <= trade_reopen))
      throw CalendarOrder("trade reopening cannot precede the lockdown end");
    if (!(lockdown_end <= demand_end))
      throw CalendarOrder("demand recovery cannot end before the lockdown");
  }
};

// ---- scenarios -----------------------------------------------------------

enum class ScenarioId : int { None, S1, S2, S3, S4, S5, S6 };

inline const char* to_string(ScenarioId s) {
  switch (s) {
    case ScenarioId::None: return "none";
    case ScenarioId::S1: return "s1";
    case ScenarioId::S2: return "s2";
    case ScenarioId::S3: return "s3";
    case ScenarioId::S4: return "s4";
    case ScenarioId::S5: return "s5";
    case ScenarioId::S6: return "s6";
  }
  return "unknown";
}

inline ScenarioId scenario_from_string(const std::string& s) {
  if (s == "none") return ScenarioId::None;
  if (s == "s1") return ScenarioId::S1;
  if (s == "s2") return ScenarioId::S2;
  if (s == "s3") return ScenarioId::S3;
  if (s == "s4") return ScenarioId::S4;
  if (s == "s5") return ScenarioId::S5;
  if (s == "s6") return ScenarioId::S6;
  throw UnknownScenario(s);
}

/// Proximity-scenario scaling: s2, s3 and s4 differ only in how strongly
/// physical-proximity requirements keep shrinking labor supply.
inline double scenario_default_iota(ScenarioId s) {
  switch (s) {
    case ScenarioId::S2: return 0.1;
    case ScenarioId::S3: return 0.4;
    case ScenarioId::S4: return 0.7;
    default: return 0.0;
  }
}

/// Per-industry inputs of the shock formulas, aligned with Economy::codes.
/// rli: remote labor index. ess: essential score. ppi: physical proximity.
/// eps_d: demand shock during lockdown.
struct IndustryAttributes {
  Vec rli;
  Vec ess;
  Vec ppi;
  Vec eps_d;
};

struct ScenarioOptions {
  double iota = 0.0;  // 0 means: use the scenario default
  std::vector<std::string> s1_trade_codes{"G45", "G47"};
  std::chrono::year_month_day s1_full_reopen{std::chrono::year{2020},
                                             std::chrono::month{7},
                                             std::chrono::day{1}};
  std::map<std::string, double> eps_s_overrides;  // applied over the lockdown
  double investment_shock = 0.15;
  double export_shock = 0.15;
  Vec fixed_supply;  // per-industry lockdown shock, scenarios s5 and s6
};

enum class Phase : int { Pre, Lockdown, Post };

/// Fully materialized day-by-day shocks for one run. Matrices are
/// horizon x n (or horizon x category count); every entry lies in [0, 1].
struct ShockSchedule {
  int horizon = 0;
  Mat eps_s;       // labor supply shock
  Mat eps_d;       // consumption preference shock
  Mat f_factor;    // other-final-demand multiplier per category
  Mat row_factor;  // per-industry multiplier on all other final demand
  std::vector<Phase> phase;
  int lockdown_start_day = -1;  // -1 when the horizon never enters lockdown

  void validate() const {
    if (eps_s.rows() != horizon || eps_d.rows() != horizon ||
        f_factor.rows() != horizon || row_factor.rows() != horizon ||
        static_cast<int>(phase.size()) != horizon)
      throw DimensionMismatch("schedule arrays disagree on horizon");
    const auto in01 = [](const Mat& m) {
      return m.minCoeff() >= 0.0 && m.maxCoeff() <= 1.0;
    };
    if (horizon > 0 && (!in01(eps_s) || !in01(eps_d) || !in01(f_factor) ||
                        !in01(row_factor)))
      throw DimensionMismatch("schedule entries escape [0, 1]");
  }
};

/// Schedule with no shocks at all: the economy sits in its steady state.
inline ShockSchedule baseline_schedule(int horizon, Eigen::Index n) {
  ShockSchedule s;
  s.horizon = horizon;
  s.eps_s = Mat::Zero(horizon, n);
  s.eps_d = Mat::Zero(horizon, n);
  s.f_factor = Mat::Ones(horizon, kFdCategoryCount);
  s.row_factor = Mat::Ones(horizon, n);
  s.phase.assign(static_cast<std::size_t>(horizon), Phase::Pre);
  return s;
}

/// Proximity-scenario formula. `progress` runs from 0 at the lockdown start
/// to 1 at its end; the proximity relief fades linearly, so at progress 1 the
/// expression coincides with the constant scenario-s1 value (1-rli)(1-ess).
inline double proximity_shock_value(double rli, double ess, double ppi_rel,
                                    double iota, double progress) {
  const double ppi_now = ppi_rel * (1.0 - progress);
  return (1.0 - rli) * (1.0 - ess * (1.0 - iota * ppi_now));
}

/// Compiles one scenario into day-by-day shocks.
inline ShockSchedule compile_scenario(ScenarioId id, const ScenarioOptions& opt,
                                      const std::vector<std::string>& codes,
                                      const IndustryAttributes& attrs,
                                      const Calendar& cal, int horizon) {
  cal.validate();
  const auto n = static_cast<Eigen::Index>(codes.size());
  if (id != ScenarioId::None &&
      (attrs.rli.size() != n || attrs.ess.size() != n ||
       attrs.ppi.size() != n || attrs.eps_d.size() != n))
    throw DimensionMismatch("attributes do not match the industry list");

  ShockSchedule s = baseline_schedule(horizon, n);
  if (id == ScenarioId::None) return s;

  const int ls = cal.day_index(cal.lockdown_start);
  const int le = cal.day_index(cal.lockdown_end);
  const int de = cal.day_index(cal.demand_end);
  const int tr = cal.day_index(cal.trade_reopen);
  const int fr = cal.day_index(opt.s1_full_reopen);

  for (int t = 0; t < horizon; ++t) {
    if (t < ls)
      s.phase[static_cast<std::size_t>(t)] = Phase::Pre;
    else if (t < le)
      s.phase[static_cast<std::size_t>(t)] = Phase::Lockdown;
    else
      s.phase[static_cast<std::size_t>(t)] = Phase::Post;
  }
  if (ls < horizon) s.lockdown_start_day = std::max(ls, 0);

  // Demand side, identical in every scenario: constant during lockdown,
  // linear fade until demand_end, gone afterwards.
  for (int t = 0; t < horizon; ++t) {
    double scalefac = 0.0;
    if (t >= ls && t < le)
      scalefac = 1.0;
    else if (t >= le && t < de)
      scalefac = 1.0 - double(t - le) / double(de - le);
    if (scalefac > 0.0)
      for (Eigen::Index i = 0; i < n; ++i)
        s.eps_d(t, i) = scalefac * attrs.eps_d(i);
  }

  // Investment and exports fall at the lockdown start and are not restored
  // within the simulated horizon. Government demand and inventory build-up
  // stay put; the npish column follows eps_d inside the daily step.
  for (int t = std::max(ls, 0); t < horizon; ++t) {
    s.f_factor(t, int(FdCategory::Investment)) = 1.0 - opt.investment_shock;
    s.f_factor(t, int(FdCategory::Export)) = 1.0 - opt.export_shock;
  }

  const auto lockdown_days = [&](int lift) {
    return std::pair<int, int>{std::max(ls, 0), std::min(lift, horizon)};
  };

  switch (id) {
    case ScenarioId::S1: {
      for (Eigen::Index i = 0; i < n; ++i) {
        const bool trade =
            std::find(opt.s1_trade_codes.begin(), opt.s1_trade_codes.end(),
                      codes[static_cast<std::size_t>(i)]) !=
            opt.s1_trade_codes.end();
        const auto [lo, hi] = lockdown_days(trade ? tr : fr);
        const double v = (1.0 - attrs.rli(i)) * (1.0 - attrs.ess(i));
        for (int t = lo; t < hi; ++t) s.eps_s(t, i) = v;
      }
      break;
    }
    case ScenarioId::S2:
    case ScenarioId::S3:
    case ScenarioId::S4: {
      const double iota =
          opt.iota > 0.0 ? opt.iota : scenario_default_iota(id);
      const double ppi_max = attrs.ppi.size() ? attrs.ppi.maxCoeff() : 0.0;
      if (ppi_max <= 0.0)
        throw ZeroPPI("all proximity values are zero, cannot scale");
      const auto [lo, hi] = lockdown_days(le);
      for (int t = lo; t < hi; ++t) {
        const double progress = double(t - ls) / double(le - ls);
        for (Eigen::Index i = 0; i < n; ++i)
          s.eps_s(t, i) =
              proximity_shock_value(attrs.rli(i), attrs.ess(i),
                                    attrs.ppi(i) / ppi_max, iota, progress);
      }
      break;
    }
    case ScenarioId::S5:
    case ScenarioId::S6: {
      if (opt.fixed_supply.size() != n)
        throw DimensionMismatch(
            "fixed supply shock vector does not match the industry list");
      const auto [lo, hi] = lockdown_days(le);
      for (int t = lo; t < hi; ++t)
        for (Eigen::Index i = 0; i < n; ++i)
          s.eps_s(t, i) = opt.fixed_supply(i);
      break;
    }
    case ScenarioId::None:
      break;
  }

  // Per-industry replacement values, e.g. a corrected shock for one sector.
  for (const auto& [code, v] : opt.eps_s_overrides) {
    Eigen::Index idx = -1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (codes[static_cast<std::size_t>(i)] == code) idx = i;
    if (idx < 0) throw UnknownIndustry(code);
    const auto [lo, hi] = lockdown_days(le);
    for (int t = lo; t < hi; ++t) s.eps_s(t, idx) = v;
  }

  s.validate();
  return s;
}

// ---- expectations about permanent income ------------------------------------

/// Consumer expectation multiplier xi for every day of the schedule.
/// Before the lockdown expectations are neutral (1). During it they drop to
/// the half-way estimate xi_L = 1 - (1 - l_start/l0)/2, computed from the
/// first-day labor shock. Afterwards they mean-revert at memory rho toward
/// 1 - (1 - xi_L) * recovery_share.
inline Vec expectation_path(const ShockSchedule& sched, const Vec& l0,
                            double rho, double recovery_share) {
  const int horizon = sched.horizon;
  Vec xi = Vec::Ones(horizon);
  if (sched.lockdown_start_day < 0) return xi;

  const double total_l0 = l0.sum();
  if (total_l0 <= 0.0) return xi;  // no labor income, expectations are moot

  const int ls = sched.lockdown_start_day;
  double l_start = 0.0;
  for (Eigen::Index i = 0; i < l0.size(); ++i)
    l_start += (1.0 - sched.eps_s(ls, i)) * l0(i);
  const double xi_l = 1.0 - 0.5 * (total_l0 - l_start) / total_l0;
  const double nu = -(1.0 - rho) * (1.0 - xi_l) * recovery_share;

  for (int t = 0; t < horizon; ++t) {
    switch (sched.phase[static_cast<std::size_t>(t)]) {
      case Phase::Pre:
        xi(t) = 1.0;
        break;
      case Phase::Lockdown:
        xi(t) = xi_l;
        break;
      case Phase::Post: {
        const double prev = t > 0 ? xi(t - 1) : xi_l;
        xi(t) = 1.0 - rho + rho * prev + nu;
        break;
      }
    }
  }
  return xi;
}

}  // namespace prodnet
