#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "prodnet/analysis.hpp"
#include "prodnet/calibration.hpp"
#include "prodnet/dynamics.hpp"
#include "prodnet/shocks.hpp"
#include "prodnet/table_io.hpp"

namespace prodnet {

using Json = nlohmann::json;

/// Everything a run needs, resolved from a JSON file plus CLI overrides.
/// Paths are kept as written; relative ones are resolved against the config
/// file's directory when loaded through load_config.
struct RunConfig {
  std::string io_table;
  bool annual = false;

  std::string ratings;           // optional; default: all inputs critical
  std::string survey;            // optional; default: targets from io table
  std::string survey_map;        // optional source→model code mapping
  double survey_decay = 0.95;
  std::vector<std::string> service_codes;
  std::string inventory_targets_csv;  // optional: industry_code,target_days

  std::string attributes;        // required for scenarios S1..S6
  std::string supply_fixed;      // required for S5/S6
  std::string empirical;         // optional monthly panel for metrics

  ScenarioId scenario = ScenarioId::None;
  ProductionFunctionKind kind = ProductionFunctionKind::Leontief;
  Params params;
  bool m_computed = true;        // params.m_override set iff false
  Calendar calendar;
  ScenarioOptions scenario_options;
  int horizon = 182;

  std::string out_dir = "out";
  std::uint64_t seed = 1;

  // sweep
  std::vector<SweepAxis> sweep_axes;
  bool sweep_cartesian = true;
  bool link_gamma = false;

  // single shock
  std::vector<double> shock_magnitudes{0.2, 0.4, 0.6, 0.8, 1.0};
  int shock_window_days = 30;
  ShockMode shock_mode = ShockMode::Supply;
  std::vector<ProductionFunctionKind> shock_kinds = all_cli_kinds();
};

namespace detail {

inline std::string resolve_path(const std::filesystem::path& base,
                                const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path fp(p);
  if (fp.is_absolute()) return p;
  return (base / fp).lexically_normal().string();
}

template <typename T>
T get_or(const Json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

inline void parse_params(const Json& j, RunConfig& cfg) {
  Params& p = cfg.params;
  p.tau = get_or(j, "tau", p.tau);
  p.gamma_h = get_or(j, "gamma_h", p.gamma_h);
  p.gamma_f = get_or(j, "gamma_f", p.gamma_f);
  p.delta_s = get_or(j, "delta_s", p.delta_s);
  p.rho = get_or(j, "rho", p.rho);
  p.b = get_or(j, "b", p.b);
  p.l_share_recovery = get_or(j, "l_share_recovery", p.l_share_recovery);
  if (j.contains("m")) {
    const Json& m = j.at("m");
    if (m.is_string()) {
      if (m.get<std::string>() != "computed")
        throw ConfigError("params.m: expected a number or \"computed\"");
      cfg.m_computed = true;
    } else if (m.is_number()) {
      p.m_override = m.get<double>();
      cfg.m_computed = false;
    } else {
      throw ConfigError("params.m: expected a number or \"computed\"");
    }
  }
}

inline void parse_calendar(const Json& j, Calendar& cal) {
  if (j.contains("sim_start")) cal.sim_start = parse_date(j.at("sim_start").get<std::string>());
  if (j.contains("lockdown_start")) cal.lockdown_start = parse_date(j.at("lockdown_start").get<std::string>());
  if (j.contains("lockdown_end")) cal.lockdown_end = parse_date(j.at("lockdown_end").get<std::string>());
  if (j.contains("trade_reopen")) cal.trade_reopen = parse_date(j.at("trade_reopen").get<std::string>());
  if (j.contains("demand_end")) cal.demand_end = parse_date(j.at("demand_end").get<std::string>());
  cal.validate();
}

inline void parse_scenario_options(const Json& j, ScenarioOptions& o) {
  o.iota = get_or(j, "iota", o.iota);
  o.investment_shock = get_or(j, "investment_shock", o.investment_shock);
  o.export_shock = get_or(j, "export_shock", o.export_shock);
  if (j.contains("s1_trade_codes"))
    o.s1_trade_codes = j.at("s1_trade_codes").get<std::vector<std::string>>();
  if (j.contains("s1_full_reopen"))
    o.s1_full_reopen = parse_date(j.at("s1_full_reopen").get<std::string>());
  if (j.contains("eps_s_overrides")) {
    for (const auto& [code, value] : j.at("eps_s_overrides").items())
      o.eps_s_overrides[code] = value.get<double>();
  }
}

inline void parse_sweep(const Json& j, RunConfig& cfg) {
  if (j.contains("axes")) {
    for (const auto& [name, values] : j.at("axes").items()) {
      SweepAxis axis;
      axis.param = name;
      axis.values = values.get<std::vector<double>>();
      if (axis.values.empty()) throw ConfigError("sweep axis " + name + " is empty");
      cfg.sweep_axes.push_back(std::move(axis));
    }
  }
  const std::string mode = get_or<std::string>(j, "mode", "cartesian");
  if (mode == "cartesian") cfg.sweep_cartesian = true;
  else if (mode == "one_at_a_time") cfg.sweep_cartesian = false;
  else throw ConfigError("sweep.mode: expected cartesian or one_at_a_time");
  cfg.link_gamma = get_or(j, "link_gamma", cfg.link_gamma);
}

inline void parse_single_shock(const Json& j, RunConfig& cfg) {
  if (j.contains("magnitudes"))
    cfg.shock_magnitudes = j.at("magnitudes").get<std::vector<double>>();
  cfg.shock_window_days = get_or(j, "window_days", cfg.shock_window_days);
  const std::string mode = get_or<std::string>(j, "mode", "supply");
  if (mode == "supply") cfg.shock_mode = ShockMode::Supply;
  else if (mode == "demand") cfg.shock_mode = ShockMode::Demand;
  else throw ConfigError("single_shock.mode: expected supply or demand");
  if (j.contains("kinds")) {
    cfg.shock_kinds.clear();
    for (const auto& k : j.at("kinds"))
      cfg.shock_kinds.push_back(kind_from_string(k.get<std::string>()));
  }
}

}  // namespace detail

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }

  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  RunConfig cfg;

  cfg.io_table = detail::resolve_path(base, detail::get_or<std::string>(j, "io_table", ""));
  if (cfg.io_table.empty()) throw ConfigError("io_table is required");
  const std::string units = detail::get_or<std::string>(j, "units", "daily");
  if (units == "annual") cfg.annual = true;
  else if (units == "daily") cfg.annual = false;
  else throw ConfigError("units: expected daily or annual");

  cfg.ratings = detail::resolve_path(base, detail::get_or<std::string>(j, "ratings", ""));
  cfg.survey = detail::resolve_path(base, detail::get_or<std::string>(j, "survey", ""));
  cfg.survey_map = detail::resolve_path(base, detail::get_or<std::string>(j, "survey_map", ""));
  cfg.survey_decay = detail::get_or(j, "survey_decay", cfg.survey_decay);
  if (j.contains("service_codes"))
    cfg.service_codes = j.at("service_codes").get<std::vector<std::string>>();
  cfg.inventory_targets_csv = detail::resolve_path(
      base, detail::get_or<std::string>(j, "inventory_targets_csv", ""));
  cfg.attributes = detail::resolve_path(base, detail::get_or<std::string>(j, "attributes", ""));
  cfg.supply_fixed = detail::resolve_path(base, detail::get_or<std::string>(j, "supply_fixed", ""));
  cfg.empirical = detail::resolve_path(base, detail::get_or<std::string>(j, "empirical", ""));

  if (j.contains("scenario"))
    cfg.scenario = scenario_from_string(j.at("scenario").get<std::string>());
  if (j.contains("kind"))
    cfg.kind = kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("params")) detail::parse_params(j.at("params"), cfg);
  if (j.contains("calendar")) detail::parse_calendar(j.at("calendar"), cfg.calendar);
  if (j.contains("scenario_options"))
    detail::parse_scenario_options(j.at("scenario_options"), cfg.scenario_options);
  cfg.horizon = detail::get_or(j, "horizon", cfg.horizon);
  if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");

  cfg.out_dir = detail::get_or<std::string>(j, "out_dir", cfg.out_dir);
  cfg.seed = detail::get_or(j, "seed", cfg.seed);
  if (j.contains("sweep")) detail::parse_sweep(j.at("sweep"), cfg);
  if (j.contains("single_shock")) detail::parse_single_shock(j.at("single_shock"), cfg);
  return cfg;
}

/// Loads the io table and attaches inventory targets and criticality from
/// whichever calibration inputs the config names.
inline Economy load_economy(const RunConfig& cfg) {
  Economy e = read_io_table(cfg.io_table, cfg.annual);

  if (!cfg.inventory_targets_csv.empty()) {
    const KeyedValues kv =
        read_keyed_values(cfg.inventory_targets_csv, "industry_code", "target_days");
    e.n_days = align_values(kv, e.codes);
  } else if (!cfg.survey.empty()) {
    const auto records = read_survey(cfg.survey);
    std::map<std::string, std::string> source_map;
    if (!cfg.survey_map.empty()) source_map = read_survey_map(cfg.survey_map);
    e.n_days = inventory_targets_from_survey(records, e.codes, source_map,
                                             cfg.survey_decay, cfg.service_codes);
  }

  if (!cfg.ratings.empty()) e.criticality = read_ratings_matrix(cfg.ratings, e.codes);

  validate_economy(e);
  return e;
}

/// Builds the shock schedule the config describes. ScenarioId::None yields
/// the all-zero baseline.
inline ShockSchedule load_schedule(const RunConfig& cfg, const Economy& econ) {
  if (cfg.scenario == ScenarioId::None)
    return baseline_schedule(cfg.horizon, econ.n());

  if (cfg.attributes.empty())
    throw ConfigError("attributes is required for scenario runs");
  const RawAttributes raw = read_attributes(cfg.attributes);
  const IndustryAttributes attrs = align_attributes(raw, econ.codes);

  ScenarioOptions opt = cfg.scenario_options;
  if (cfg.scenario == ScenarioId::S5 || cfg.scenario == ScenarioId::S6) {
    if (cfg.supply_fixed.empty())
      throw ConfigError("supply_fixed is required for scenarios S5 and S6");
    const std::string column = cfg.scenario == ScenarioId::S5 ? "s5" : "s6";
    opt.fixed_supply =
        align_values(read_keyed_values(cfg.supply_fixed, "industry_code", column),
                     econ.codes);
  }

  return compile_scenario(cfg.scenario, opt, econ.codes, attrs, cfg.calendar,
                          cfg.horizon);
}

// ---- run manifest ---------------------------------------------------------

namespace detail {

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

/// Writes a small JSON summary describing what produced the outputs in this
/// directory. `config_text` is hashed, not embedded, so manifests stay small
/// and diffable.
inline void write_manifest(const std::string& path, const RunConfig& cfg,
                           const Economy& econ, const std::string& config_text) {
  Json j;
  j["scenario"] = to_string(cfg.scenario);
  j["kind"] = to_string(cfg.kind);
  j["horizon"] = cfg.horizon;
  j["n_industries"] = econ.n();
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(detail::fnv1a(config_text)));
  j["config_fnv1a"] = hash;
  j["params"] = {
      {"tau", cfg.params.tau},
      {"gamma_h", cfg.params.gamma_h},
      {"gamma_f", cfg.params.gamma_f},
      {"delta_s", cfg.params.delta_s},
      {"rho", cfg.params.rho},
      {"b", cfg.params.b},
      {"l_share_recovery", cfg.params.l_share_recovery},
      {"m", cfg.m_computed ? Json("computed") : Json(*cfg.params.m_override)},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace prodnet
