#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "prodnet/coefficients.hpp"
#include "prodnet/dynamics.hpp"
#include "prodnet/economy.hpp"
#include "prodnet/errors.hpp"
#include "prodnet/shocks.hpp"
#include "prodnet/types.hpp"

namespace prodnet {

// ---- monthly panels ---------------------------------------------------------

/// Industry-by-month index values, expressed as percent of the February
/// level. `weights` carry the initial output shares used by the error
/// metrics; an ingested empirical panel may leave them empty.
struct MonthlyPanel {
  std::vector<std::string> codes;
  std::vector<std::string> months;  // "YYYY-MM", ascending
  Mat values;                       // (industry, month), percent
  Vec weights;                      // x0 shares, may be size 0
};

/// Calendar-month means of industry output, rebased so the February mean is
/// 100. Months cut off by the horizon use the days they have. If the horizon
/// never touches February, the steady-state output serves as the base.
inline MonthlyPanel monthly_panel(const Trajectory& traj, const Economy& econ,
                                  const Calendar& cal) {
  if (traj.days.empty()) throw EmptyInput("empty trajectory");
  const Eigen::Index n = econ.n();

  MonthlyPanel p;
  p.codes = econ.codes;
  std::map<std::string, std::pair<Vec, int>> acc;  // month -> (sum, days)
  for (const auto& rec : traj.days) {
    const std::string key = month_string(cal.date_of(rec.day));
    auto it = acc.find(key);
    if (it == acc.end())
      it = acc.emplace(key, std::make_pair(Vec::Zero(n), 0)).first;
    it->second.first += rec.x;
    it->second.second += 1;
  }

  for (const auto& [key, sum_days] : acc) p.months.push_back(key);
  std::sort(p.months.begin(), p.months.end());

  Vec base = econ.x0;
  for (const auto& [key, sum_days] : acc)
    if (key.size() == 7 && key.substr(5) == "02")
      base = sum_days.first / double(sum_days.second);

  p.values = Mat::Zero(n, static_cast<Eigen::Index>(p.months.size()));
  for (std::size_t mth = 0; mth < p.months.size(); ++mth) {
    const auto& [sum, days] = acc.at(p.months[mth]);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mean = sum(i) / double(days);
      p.values(i, static_cast<Eigen::Index>(mth)) =
          base(i) > 0.0 ? 100.0 * mean / base(i) : 0.0;
    }
  }

  const double total = econ.x0.sum();
  p.weights = total > 0.0 ? Vec(econ.x0 / total) : Vec(Vec::Zero(n));
  return p;
}

/// Restricts a panel to the listed months, keeping their relative order.
/// Months the panel does not have are ignored; an empty list keeps all.
inline MonthlyPanel filter_months(const MonthlyPanel& p,
                                  const std::vector<std::string>& months) {
  if (months.empty()) return p;
  MonthlyPanel out;
  out.codes = p.codes;
  out.weights = p.weights;
  std::vector<Eigen::Index> keep;
  for (std::size_t m = 0; m < p.months.size(); ++m)
    if (std::find(months.begin(), months.end(), p.months[m]) != months.end()) {
      keep.push_back(static_cast<Eigen::Index>(m));
      out.months.push_back(p.months[m]);
    }
  if (keep.empty()) throw PanelMismatch("no requested month is in the panel");
  out.values = Mat(p.values.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t m = 0; m < keep.size(); ++m)
    out.values.col(static_cast<Eigen::Index>(m)) = p.values.col(keep[m]);
  return out;
}

namespace detail {

struct PanelAlignment {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> industries;  // (a, b)
  std::vector<std::pair<Eigen::Index, Eigen::Index>> months;
};

inline PanelAlignment align_panels(const MonthlyPanel& a,
                                   const MonthlyPanel& b) {
  PanelAlignment al;
  for (std::size_t i = 0; i < a.codes.size(); ++i) {
    for (std::size_t j = 0; j < b.codes.size(); ++j)
      if (a.codes[i] == b.codes[j]) {
        al.industries.emplace_back(static_cast<Eigen::Index>(i),
                                   static_cast<Eigen::Index>(j));
        break;
      }
  }
  for (std::size_t i = 0; i < a.months.size(); ++i) {
    for (std::size_t j = 0; j < b.months.size(); ++j)
      if (a.months[i] == b.months[j]) {
        al.months.emplace_back(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(j));
        break;
      }
  }
  if (al.industries.empty() || al.months.empty())
    throw PanelMismatch("panels share no industries or no months");
  return al;
}

inline Vec aligned_weights(const MonthlyPanel& model,
                           const PanelAlignment& al) {
  if (model.weights.size() == 0)
    throw PanelMismatch("model panel carries no weights");
  Vec w(static_cast<Eigen::Index>(al.industries.size()));
  for (std::size_t k = 0; k < al.industries.size(); ++k)
    w(static_cast<Eigen::Index>(k)) = model.weights(al.industries[k].first);
  const double total = w.sum();
  if (total <= 0.0) throw PanelMismatch("aligned weights sum to zero");
  return w / total;
}

}  // namespace detail

/// Weighted mean absolute gap between two panels, in percentage points:
/// the month-average of sum_i w_i |model - data|, with initial output shares
/// as weights, renormalized over the industries both panels cover.
inline double afe_sectoral(const MonthlyPanel& model,
                           const MonthlyPanel& data) {
  const auto al = detail::align_panels(model, data);
  const Vec w = detail::aligned_weights(model, al);
  double total = 0.0;
  for (const auto& [ma, mb] : al.months) {
    for (std::size_t k = 0; k < al.industries.size(); ++k) {
      const auto& [ia, ib] = al.industries[k];
      total += w(static_cast<Eigen::Index>(k)) *
               std::abs(model.values(ia, ma) - data.values(ib, mb));
    }
  }
  return total / double(al.months.size());
}

/// Signed aggregate gap in percent of the baseline: positive when the data
/// index sits above the model, i.e. the model is too pessimistic.
inline double afe_aggregate(const MonthlyPanel& model,
                            const MonthlyPanel& data) {
  const auto al = detail::align_panels(model, data);
  const Vec w = detail::aligned_weights(model, al);
  double total = 0.0;
  for (const auto& [ma, mb] : al.months) {
    double agg_model = 0.0, agg_data = 0.0;
    for (std::size_t k = 0; k < al.industries.size(); ++k) {
      const auto& [ia, ib] = al.industries[k];
      agg_model += w(static_cast<Eigen::Index>(k)) * model.values(ia, ma);
      agg_data += w(static_cast<Eigen::Index>(k)) * data.values(ib, mb);
    }
    total += agg_data - agg_model;
  }
  return total / double(al.months.size());
}

// ---- ordinary least squares -----------------------------------------------

struct OlsFit {
  std::vector<std::string> names;  // "intercept" first
  Vec coef;
  Vec stderr_;
  double r2_adj = 0.0;
  long n = 0;
};

/// OLS of log(y) on an intercept and the logs of the given regressors,
/// with classical standard errors. Every value entering a log must be
/// positive. A constant y under an intercept-only fit reports R^2 = 0.
inline OlsFit ols_loglog(const Vec& y, const std::vector<Vec>& regressors,
                         const std::vector<std::string>& names) {
  const Eigen::Index n = y.size();
  const Eigen::Index k = static_cast<Eigen::Index>(regressors.size());
  if (static_cast<Eigen::Index>(names.size()) != k)
    throw DimensionMismatch("regressor names do not match columns");
  if (n < k + 2)
    throw EmptyInput("not enough observations for the requested fit");

  Vec ly(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (y(r) <= 0.0) throw NonPositiveValue("y", r);
    ly(r) = std::log(y(r));
  }
  Mat X(n, k + 1);
  X.col(0) = Vec::Ones(n);
  for (Eigen::Index c = 0; c < k; ++c) {
    if (regressors[static_cast<std::size_t>(c)].size() != n)
      throw DimensionMismatch("regressor length mismatch");
    for (Eigen::Index r = 0; r < n; ++r) {
      const double v = regressors[static_cast<std::size_t>(c)](r);
      if (v <= 0.0) throw NonPositiveValue(names[static_cast<std::size_t>(c)], r);
      X(r, c + 1) = std::log(v);
    }
  }

  Eigen::ColPivHouseholderQR<Mat> qr(X);
  if (qr.rank() < k + 1)
    throw RankDeficient("regressors are collinear");
  Vec beta = qr.solve(ly);

  const Vec resid = ly - X * beta;
  const double rss = resid.squaredNorm();
  const double dof = double(n - (k + 1));
  const double sigma2 = rss / dof;

  Mat xtx_inv = (X.transpose() * X).inverse();
  Vec se(k + 1);
  for (Eigen::Index c = 0; c < k + 1; ++c)
    se(c) = std::sqrt(sigma2 * xtx_inv(c, c));

  const double mean_y = ly.mean();
  const double tss = (ly.array() - mean_y).matrix().squaredNorm();
  // A flat response has no variance to explain; the exact-equality test
  // matters because rounding in the mean leaves tss tiny but nonzero there.
  const bool flat = (ly.array() == ly(0)).all();
  double r2_adj = 0.0;
  if (!flat && tss > 0.0) {
    const double r2 = 1.0 - rss / tss;
    r2_adj = 1.0 - (1.0 - r2) * double(n - 1) / dof;
  }

  OlsFit fit;
  fit.names.push_back("intercept");
  for (const auto& s : names) fit.names.push_back(s);
  fit.coef = std::move(beta);
  fit.stderr_ = std::move(se);
  fit.r2_adj = r2_adj;
  fit.n = n;
  return fit;
}

// ---- single-industry shock experiments ---------------------------------------

enum class ShockMode : int { Supply, Demand };

inline const char* to_string(ShockMode m) {
  return m == ShockMode::Supply ? "supply" : "demand";
}

struct SingleShockCell {
  ProductionFunctionKind kind{};
  ShockMode mode{};
  std::string industry;
  double magnitude = 0.0;
  double output_fraction = 0.0;  // aggregate output at the window end / baseline
};

/// Hits one industry with a shock of the given size from day zero, leaves
/// every other industry alone, and reads aggregate output at the end of the
/// window as a fraction of the baseline.
///
/// Supply mode caps the industry's labor at (1 - magnitude) of normal.
/// Demand mode lowers demand for its goods across households (with no
/// rebalancing toward other goods) and across all other final demand
/// categories uniformly; expectations stay neutral throughout.
inline ShockSchedule single_shock_schedule(Eigen::Index n, Eigen::Index target,
                                           ShockMode mode, double magnitude,
                                           int window_days) {
  ShockSchedule s = baseline_schedule(window_days + 1, n);
  for (int t = 0; t < s.horizon; ++t) {
    if (mode == ShockMode::Supply) {
      s.eps_s(t, target) = magnitude;
    } else {
      s.eps_d(t, target) = magnitude;
      s.row_factor(t, target) = 1.0 - magnitude;
    }
  }
  return s;
}

inline std::vector<SingleShockCell> single_shock_sweep(
    const Economy& econ, const std::vector<ProductionFunctionKind>& kinds,
    const std::vector<ShockMode>& modes, const std::vector<double>& magnitudes,
    int window_days, const Params& base_params, int jobs = 1) {
  const Eigen::Index n = econ.n();
  const double base_total = econ.x0.sum();
  if (base_total <= 0.0) throw EmptyInput("economy has no output");

  struct Task {
    ProductionFunctionKind kind;
    ShockMode mode;
    Eigen::Index target;
    double magnitude;
  };
  std::vector<Task> tasks;
  for (auto kind : kinds)
    for (auto mode : modes)
      for (Eigen::Index i = 0; i < n; ++i)
        for (double g : magnitudes) tasks.push_back({kind, mode, i, g});

  std::vector<SingleShockCell> cells(tasks.size());
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t at = cursor.fetch_add(1);
      if (at >= tasks.size()) return;
      const Task& task = tasks[at];
      Params params = base_params;
      if (task.mode == ShockMode::Demand) params.delta_s = 1.0;
      ShockSchedule sched = single_shock_schedule(
          n, task.target, task.mode, task.magnitude, window_days);
      Trajectory traj = run_simulation(econ, task.kind, sched, params);
      SingleShockCell cell;
      cell.kind = task.kind;
      cell.mode = task.mode;
      cell.industry = econ.codes[static_cast<std::size_t>(task.target)];
      cell.magnitude = task.magnitude;
      cell.output_fraction = traj.days.back().x.sum() / base_total;
      cells[at] = std::move(cell);
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return cells;
}

// ---- parameter sensitivity sweeps ---------------------------------------------

struct SweepAxis {
  std::string param;  // tau, gamma_h, gamma_f, delta_s, rho, b, l_share_recovery
  std::vector<double> values;
};

struct SweepPoint {
  std::map<std::string, double> assignment;
  Vec aggregate_output;       // per day
  Vec aggregate_consumption;  // per day
};

namespace detail {

inline void apply_param(Params& p, const std::string& name, double v,
                        bool link_gamma) {
  if (name == "tau")
    p.tau = v;
  else if (name == "gamma_h") {
    p.gamma_h = v;
    if (link_gamma) p.gamma_f = 2.0 * v;
  } else if (name == "gamma_f")
    p.gamma_f = v;
  else if (name == "delta_s")
    p.delta_s = v;
  else if (name == "rho")
    p.rho = v;
  else if (name == "b")
    p.b = v;
  else if (name == "l_share_recovery")
    p.l_share_recovery = v;
  else
    throw ConfigError("unknown sweep parameter: " + name);
}

}  // namespace detail

/// Reruns one scenario over a parameter grid. `cartesian` walks the full
/// cross product of the axes; otherwise each axis varies alone around the
/// base parameters. With `link_gamma`, setting gamma_h drags gamma_f along
/// at twice the speed, the usual firing/hiring asymmetry.
inline std::vector<SweepPoint> sensitivity_sweep(
    const Economy& econ, ProductionFunctionKind kind,
    const ShockSchedule& schedule, const Params& base,
    const std::vector<SweepAxis>& axes, bool cartesian, bool link_gamma,
    int jobs = 1) {
  if (axes.empty()) throw EmptyInput("no sweep axes");
  for (const auto& ax : axes)
    if (ax.values.empty()) throw EmptyInput("empty sweep axis: " + ax.param);

  std::vector<std::map<std::string, double>> assignments;
  if (cartesian) {
    assignments.push_back({});
    for (const auto& ax : axes) {
      std::vector<std::map<std::string, double>> grown;
      for (const auto& partial : assignments)
        for (double v : ax.values) {
          auto next = partial;
          next[ax.param] = v;
          grown.push_back(std::move(next));
        }
      assignments = std::move(grown);
    }
  } else {
    for (const auto& ax : axes)
      for (double v : ax.values) assignments.push_back({{ax.param, v}});
  }

  std::vector<SweepPoint> points(assignments.size());
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t at = cursor.fetch_add(1);
      if (at >= assignments.size()) return;
      Params params = base;
      for (const auto& [name, v] : assignments[at])
        detail::apply_param(params, name, v, link_gamma);
      Trajectory traj = run_simulation(econ, kind, schedule, params);
      points[at].assignment = assignments[at];
      points[at].aggregate_output = traj.aggregate_output();
      Vec cons(static_cast<Eigen::Index>(traj.days.size()));
      for (std::size_t t = 0; t < traj.days.size(); ++t)
        cons(static_cast<Eigen::Index>(t)) = traj.days[t].c.sum();
      points[at].aggregate_consumption = std::move(cons);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return points;
}

}  // namespace prodnet
