// prodnet: validate, calibrate, and run production-network simulations.
//
// Exit codes: 0 success, 1 unexpected runtime failure, 2 validation or
// configuration failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "prodnet/analysis.hpp"
#include "prodnet/calibration.hpp"
#include "prodnet/coefficients.hpp"
#include "prodnet/config.hpp"
#include "prodnet/csv.hpp"
#include "prodnet/dynamics.hpp"
#include "prodnet/economy.hpp"
#include "prodnet/production.hpp"
#include "prodnet/shocks.hpp"
#include "prodnet/table_io.hpp"

namespace {

using namespace prodnet;

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kValidationFailure = 2;

struct CommonFlags {
  std::string config_path;
  std::string kind;
  std::string scenario;
  std::string out;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_jobs = false) {
  cmd->add_option("--config", flags.config_path, "JSON run configuration")
      ->required();
  cmd->add_option("--kind", flags.kind,
                  "production function (overrides config)");
  cmd->add_option("--scenario", flags.scenario,
                  "scenario id (overrides config)");
  cmd->add_option("--out", flags.out, "output directory (overrides config)");
  if (with_jobs)
    cmd->add_option("--jobs", flags.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
}

RunConfig resolve_config(const CommonFlags& flags) {
  RunConfig cfg = load_config(flags.config_path);
  if (!flags.kind.empty()) cfg.kind = kind_from_string(flags.kind);
  if (!flags.scenario.empty())
    cfg.scenario = scenario_from_string(flags.scenario);
  if (!flags.out.empty()) cfg.out_dir = flags.out;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// ---- validate -------------------------------------------------------------

int cmd_validate(const CommonFlags& flags) {
  RunConfig cfg;
  Economy econ;
  std::vector<std::string> violations;

  try {
    cfg = resolve_config(flags);
  } catch (const Error& e) {
    std::cout << "config: " << e.what() << "\n";
    return kValidationFailure;
  }
  std::cout << "config: ok (" << flags.config_path << ")\n";

  try {
    econ = read_io_table(cfg.io_table, cfg.annual);
    if (!cfg.inventory_targets_csv.empty()) {
      const KeyedValues kv = read_keyed_values(cfg.inventory_targets_csv,
                                               "industry_code", "target_days");
      econ.n_days = align_values(kv, econ.codes);
    } else if (!cfg.survey.empty()) {
      std::map<std::string, std::string> source_map;
      if (!cfg.survey_map.empty()) source_map = read_survey_map(cfg.survey_map);
      econ.n_days =
          inventory_targets_from_survey(read_survey(cfg.survey), econ.codes,
                                        source_map, cfg.survey_decay,
                                        cfg.service_codes);
    }
    if (!cfg.ratings.empty())
      econ.criticality = read_ratings_matrix(cfg.ratings, econ.codes);
  } catch (const Error& e) {
    std::cout << "data: " << e.what() << "\n";
    return kValidationFailure;
  }
  std::cout << "data: ok (" << econ.n() << " industries)\n";

  violations = economy_violations(econ);
  for (const auto& v : violations) std::cout << "violation: " << v << "\n";
  if (!violations.empty()) return kValidationFailure;
  std::cout << "economy: ok\n";

  try {
    technical_coefficients(econ);
    const ShockSchedule sched = load_schedule(cfg, econ);
    std::cout << "schedule: ok (" << to_string(cfg.scenario) << ", "
              << sched.horizon << " days)\n";
  } catch (const Error& e) {
    std::cout << "schedule: " << e.what() << "\n";
    return kValidationFailure;
  }

  std::cout << "ok\n";
  return kOk;
}

// ---- calibrate --------------------------------------------------------------

int cmd_calibrate(const CommonFlags& flags) {
  const RunConfig cfg = resolve_config(flags);
  const Economy econ = load_economy(cfg);
  const auto dir = ensure_out_dir(cfg);

  {
    CsvWriter w((dir / "inventory_targets.csv").string(),
                {"industry_code", "target_days"});
    for (Eigen::Index i = 0; i < econ.n(); ++i)
      w.write_row({econ.codes[static_cast<std::size_t>(i)],
                   format_double(econ.n_days(i))});
  }

  {
    std::vector<std::string> header{"input_code"};
    for (const auto& c : econ.codes) header.push_back(c);
    CsvWriter w((dir / "criticality.csv").string(), header);
    for (Eigen::Index j = 0; j < econ.n(); ++j) {
      std::vector<std::string> row{econ.codes[static_cast<std::size_t>(j)]};
      for (Eigen::Index i = 0; i < econ.n(); ++i)
        row.push_back(format_double(econ.criticality(j, i)));
      w.write_row(row);
    }
  }

  const TechnicalCoefficients tc = technical_coefficients(econ);
  const Vec u = upstreamness(tc);
  const Vec mult = output_multipliers(tc);
  {
    CsvWriter w((dir / "network_stats.csv").string(),
                {"industry_code", "upstreamness", "output_multiplier", "x0",
                 "fd0"});
    for (Eigen::Index i = 0; i < econ.n(); ++i) {
      const double fd = econ.c0(i) + econ.f0.row(i).sum();
      w.write_row({econ.codes[static_cast<std::size_t>(i)], format_double(u(i)),
                   format_double(mult(i)), format_double(econ.x0(i)),
                   format_double(fd)});
    }
  }

  const Propensity m =
      propensity_to_consume(econ.total_consumption(), econ.total_labor());
  {
    Json j;
    j["propensity_to_consume"] = m.value;
    j["propensity_clamped"] = m.clamped;
    j["upstreamness_range"] = {u.minCoeff(), u.maxCoeff()};
    j["multiplier_range"] = {mult.minCoeff(), mult.maxCoeff()};
    std::ofstream out(dir / "calibration.json", std::ios::binary);
    out << j.dump(2) << '\n';
  }

  std::cout << "calibrated " << econ.n() << " industries\n"
            << "propensity_to_consume " << format_double(m.value)
            << (m.clamped ? " (clamped)" : "") << "\n"
            << "upstreamness [" << format_double(u.minCoeff()) << ", "
            << format_double(u.maxCoeff()) << "]\n"
            << "output_multiplier [" << format_double(mult.minCoeff()) << ", "
            << format_double(mult.maxCoeff()) << "]\n"
            << "wrote " << (dir / "inventory_targets.csv").string() << ", "
            << (dir / "criticality.csv").string() << ", "
            << (dir / "network_stats.csv").string() << ", "
            << (dir / "calibration.json").string() << "\n";
  return kOk;
}

// ---- run ------------------------------------------------------------------

int cmd_run(const CommonFlags& flags) {
  const RunConfig cfg = resolve_config(flags);
  const Economy econ = load_economy(cfg);
  const ShockSchedule sched = load_schedule(cfg, econ);
  const auto dir = ensure_out_dir(cfg);

  const Trajectory traj = run_simulation(econ, cfg.kind, sched, cfg.params);
  write_trajectory_csv((dir / "trajectory.csv").string(), econ, traj);

  const MonthlyPanel panel = monthly_panel(traj, econ, cfg.calendar);
  write_panel_csv((dir / "monthly.csv").string(), panel);

  write_manifest((dir / "manifest.json").string(), cfg, econ,
                 slurp(flags.config_path));

  const double base = econ.x0.sum();
  const double last = traj.days.back().x.sum();
  std::cout << "ran " << to_string(cfg.scenario) << " under "
            << to_string(cfg.kind) << " for " << sched.horizon << " days\n"
            << "final aggregate output " << format_double(100.0 * last / base)
            << "% of baseline\n"
            << "wrote " << (dir / "trajectory.csv").string() << ", "
            << (dir / "monthly.csv").string() << ", "
            << (dir / "manifest.json").string() << "\n";
  return kOk;
}

// ---- sweep --------------------------------------------------------------------

int cmd_sweep(const CommonFlags& flags) {
  const RunConfig cfg = resolve_config(flags);
  if (cfg.sweep_axes.empty())
    throw ConfigError("sweep requires sweep.axes in the config");
  const Economy econ = load_economy(cfg);
  const ShockSchedule sched = load_schedule(cfg, econ);
  const auto dir = ensure_out_dir(cfg);

  const std::vector<SweepPoint> points =
      sensitivity_sweep(econ, cfg.kind, sched, cfg.params, cfg.sweep_axes,
                        cfg.sweep_cartesian, cfg.link_gamma, flags.jobs);

  // Column per axis; cells that leave an axis at its base value (the
  // one-at-a-time mode) show that base value.
  const Params base = cfg.params;
  const auto base_value = [&](const std::string& name) {
    if (name == "tau") return base.tau;
    if (name == "gamma_h") return base.gamma_h;
    if (name == "gamma_f") return base.gamma_f;
    if (name == "delta_s") return base.delta_s;
    if (name == "rho") return base.rho;
    if (name == "b") return base.b;
    if (name == "l_share_recovery") return base.l_share_recovery;
    throw ConfigError("unknown sweep parameter: " + name);
  };

  std::vector<std::string> header;
  for (const auto& ax : cfg.sweep_axes) header.push_back(ax.param);
  header.push_back("day");
  header.push_back("aggregate_output");
  header.push_back("aggregate_consumption");
  CsvWriter w((dir / "sweep.csv").string(), header);
  for (const auto& pt : points) {
    std::vector<std::string> prefix;
    for (const auto& ax : cfg.sweep_axes) {
      const auto it = pt.assignment.find(ax.param);
      prefix.push_back(format_double(
          it != pt.assignment.end() ? it->second : base_value(ax.param)));
    }
    for (Eigen::Index t = 0; t < pt.aggregate_output.size(); ++t) {
      std::vector<std::string> row = prefix;
      row.push_back(std::to_string(t));
      row.push_back(format_double(pt.aggregate_output(t)));
      row.push_back(format_double(pt.aggregate_consumption(t)));
      w.write_row(row);
    }
  }

  std::cout << "swept " << points.size() << " cells over " << sched.horizon
            << " days\n"
            << "wrote " << (dir / "sweep.csv").string() << "\n";
  return kOk;
}

// ---- single-shock ---------------------------------------------------------------

int cmd_single_shock(const CommonFlags& flags, bool regress) {
  const RunConfig cfg = resolve_config(flags);
  const Economy econ = load_economy(cfg);
  const auto dir = ensure_out_dir(cfg);

  std::vector<ProductionFunctionKind> kinds = cfg.shock_kinds;
  if (!flags.kind.empty()) kinds = {kind_from_string(flags.kind)};
  const std::vector<ShockMode> modes{cfg.shock_mode};

  const std::vector<SingleShockCell> cells =
      single_shock_sweep(econ, kinds, modes, cfg.shock_magnitudes,
                         cfg.shock_window_days, cfg.params, flags.jobs);

  {
    CsvWriter w((dir / "single_shock.csv").string(),
                {"kind", "mode", "industry_code", "magnitude",
                 "output_fraction"});
    for (const auto& cell : cells)
      w.write_row({to_string(cell.kind), to_string(cell.mode), cell.industry,
                   format_double(cell.magnitude),
                   format_double(cell.output_fraction)});
  }
  std::cout << "ran " << cells.size() << " single-industry shocks (window "
            << cfg.shock_window_days << " days)\n"
            << "wrote " << (dir / "single_shock.csv").string() << "\n";

  if (!regress) return kOk;

  const TechnicalCoefficients tc = technical_coefficients(econ);
  const Vec u = upstreamness(tc);
  const Vec mult = output_multipliers(tc);

  CsvWriter w((dir / "regression.csv").string(),
              {"kind", "mode", "magnitude", "term", "coefficient", "stderr",
               "r2_adj", "n"});
  for (auto kind : kinds) {
    for (auto mode : modes) {
      for (double g : cfg.shock_magnitudes) {
        std::vector<double> ys;
        std::vector<double> us, ms, xs;
        for (const auto& cell : cells) {
          if (cell.kind != kind || cell.mode != mode ||
              cell.magnitude != g)
            continue;
          const Eigen::Index i = econ.index_of(cell.industry);
          if (econ.x0(i) <= 0.0 || u(i) <= 0.0 || mult(i) <= 0.0) continue;
          // A fully collapsed economy saturates the impact measure and has
          // no place on a log scale.
          if (cell.output_fraction <= 0.0) continue;
          ys.push_back(cell.output_fraction);
          us.push_back(u(i));
          ms.push_back(mult(i));
          xs.push_back(econ.x0(i));
        }
        if (ys.size() < 5) continue;
        const auto to_vec = [](const std::vector<double>& v) {
          Vec out(static_cast<Eigen::Index>(v.size()));
          for (std::size_t i = 0; i < v.size(); ++i)
            out(static_cast<Eigen::Index>(i)) = v[i];
          return out;
        };
        const OlsFit fit =
            ols_loglog(to_vec(ys), {to_vec(us), to_vec(ms), to_vec(xs)},
                       {"upstreamness", "output_multiplier", "x0"});
        for (std::size_t t = 0; t < fit.names.size(); ++t)
          w.write_row({to_string(kind), to_string(mode), format_double(g),
                       fit.names[t],
                       format_double(fit.coef(static_cast<Eigen::Index>(t))),
                       format_double(fit.stderr_(static_cast<Eigen::Index>(t))),
                       format_double(fit.r2_adj), std::to_string(fit.n)});
      }
    }
  }
  std::cout << "wrote " << (dir / "regression.csv").string() << "\n";
  return kOk;
}

// ---- metrics ----------------------------------------------------------------------

int cmd_metrics(const std::string& model_path, const std::string& data_path,
                const std::string& out, const std::string& months_csv) {
  MonthlyPanel model = read_panel_csv(model_path);
  MonthlyPanel data = read_panel_csv(data_path);

  if (!months_csv.empty()) {
    std::vector<std::string> months;
    std::stringstream ss(months_csv);
    std::string item;
    while (std::getline(ss, item, ',')) months.push_back(item);
    model = filter_months(model, months);
    data = filter_months(data, months);
  }

  const double sectoral = afe_sectoral(model, data);
  const double aggregate = afe_aggregate(model, data);

  if (!out.empty()) {
    std::filesystem::create_directories(out);
    CsvWriter w((std::filesystem::path(out) / "metrics.csv").string(),
                {"afe_sectoral", "afe_aggregate"});
    w.write_row({format_double(sectoral), format_double(aggregate)});
  }
  std::cout << "afe_sectoral " << format_double(sectoral) << "\n"
            << "afe_aggregate " << format_double(aggregate) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"production-network pandemic shock simulator"};
  app.require_subcommand(1);

  CommonFlags validate_flags, calibrate_flags, run_flags, sweep_flags,
      shock_flags;
  bool regress = false;
  std::string metrics_model, metrics_data, metrics_out, metrics_months;

  CLI::App* validate = app.add_subcommand(
      "validate", "check a configuration and its data files");
  add_common(validate, validate_flags);

  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "derive coefficients, targets, and network statistics");
  add_common(calibrate, calibrate_flags);

  CLI::App* run =
      app.add_subcommand("run", "simulate one scenario and write CSV output");
  add_common(run, run_flags);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "rerun one scenario over a parameter grid");
  add_common(sweep, sweep_flags, /*with_jobs=*/true);

  CLI::App* shock = app.add_subcommand(
      "single-shock", "shock each industry alone and record the impact");
  add_common(shock, shock_flags, /*with_jobs=*/true);
  shock->add_flag("--regress", regress,
                  "regress impact on network statistics");

  CLI::App* metrics = app.add_subcommand(
      "metrics", "compare a model panel against an empirical panel");
  metrics->add_option("--model", metrics_model, "model monthly panel CSV")
      ->required();
  metrics->add_option("--data", metrics_data, "empirical monthly panel CSV")
      ->required();
  metrics->add_option("--out", metrics_out, "output directory");
  metrics->add_option("--months", metrics_months,
                      "comma-separated YYYY-MM list to compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidationFailure;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_flags);
    if (calibrate->parsed()) return cmd_calibrate(calibrate_flags);
    if (run->parsed()) return cmd_run(run_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags);
    if (shock->parsed()) return cmd_single_shock(shock_flags, regress);
    if (metrics->parsed())
      return cmd_metrics(metrics_model, metrics_data, metrics_out,
                         metrics_months);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kRuntimeFailure;
}
