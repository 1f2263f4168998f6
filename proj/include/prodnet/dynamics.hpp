#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "prodnet/calibration.hpp"
#include "prodnet/coefficients.hpp"
#include "prodnet/economy.hpp"
#include "prodnet/errors.hpp"
#include "prodnet/production.hpp"
#include "prodnet/shocks.hpp"
#include "prodnet/types.hpp"

namespace prodnet {

struct Params {
  double tau = 10.0;            // inventory adjustment time, days
  double gamma_h = 1.0 / 30.0;  // hiring speed
  double gamma_f = 1.0 / 15.0;  // firing speed
  double delta_s = 0.5;         // share of shocked consumption not redirected
  double rho = 0.99;            // consumption memory
  double b = 0.8;               // income replacement while benefits run
  double l_share_recovery = 0.5;   // long-run share of the income drop kept
  double overdraw_tol = 1e-9;      // guard band for guaranteed input draws
  std::optional<double> m_override;  // propensity to consume; default: from data
};

/// Mutable state carried from one day to the next.
struct SimState {
  int day = 0;
  Mat s;        // inventories (input j, industry i)
  Vec l;        // labor compensation per industry
  Vec d_prev;   // total demand faced yesterday
  double cd_prev = 0.0;  // household consumption demand yesterday
  std::vector<InputLimit> xinp_prev;  // yesterday's input bound
};

/// Everything observable about one simulated day.
struct DayRecord {
  int day = 0;
  Vec x;        // realized output
  Vec d;        // total demand
  Vec xcap;     // capacity
  Vec l;        // labor compensation
  Vec c;        // household deliveries
  Vec f;        // other-final-demand deliveries
  Vec c_demand; // household demand before rationing
  Vec f_demand; // other final demand before rationing
  double cd_total = 0.0;  // aggregate household demand
  double l_tilde = 0.0;   // labor income
  double l_eff = 0.0;     // income entering consumption (with benefits)
  double xi = 1.0;        // expectation multiplier
  // Flow matrices, filled only when RunContext::record_flows is set.
  Mat orders;   // orders placed (supplier j, customer i)
  Mat z_deliv;  // intermediate deliveries after rationing
  // Diagnostics.
  int input_bound_count = 0;   // industries where the input bound was strict
  int pooled_bound_count = 0;  // of those, capped by a ces_* pooled term
};

struct Trajectory {
  std::vector<DayRecord> days;

  Vec aggregate_output() const {
    Vec out(static_cast<Eigen::Index>(days.size()));
    for (std::size_t t = 0; t < days.size(); ++t) out(t) = days[t].x.sum();
    return out;
  }
};

/// Fixed inputs of a run, prepared once.
struct RunContext {
  const Economy* econ = nullptr;
  TechnicalCoefficients tc;
  ProductionRule rule;
  Params params;
  double m = 0.0;        // propensity to consume actually used
  Vec theta0;            // budget shares at calibration
  Mat s_target;          // n_days(i) * z0(j,i)
  Vec xi_path;           // expectation multiplier per day
  const ShockSchedule* schedule = nullptr;
  bool record_flows = false;  // keep per-day order/delivery matrices
};

inline RunContext make_run_context(const Economy& econ,
                                   ProductionFunctionKind kind,
                                   const ShockSchedule& schedule,
                                   const Params& params) {
  RunContext ctx;
  ctx.econ = &econ;
  ctx.tc = technical_coefficients(econ);
  ctx.rule = ProductionRule::build(kind, ctx.tc.a, econ.criticality);
  ctx.params = params;
  ctx.schedule = &schedule;
  const double total_c = econ.total_consumption();
  const double total_l = econ.total_labor();
  if (params.m_override) {
    ctx.m = *params.m_override;
  } else if (total_c > 0.0) {
    ctx.m = propensity_to_consume(total_c, total_l).value;
  } else {
    ctx.m = 0.0;  // no household sector
  }
  ctx.theta0 = total_c > 0.0 ? Vec(econ.c0 / total_c)
                             : Vec(Vec::Zero(econ.n()));
  ctx.s_target = econ.z0 * econ.n_days.asDiagonal();
  ctx.xi_path = expectation_path(schedule, econ.l0, params.rho,
                                 params.l_share_recovery);
  return ctx;
}

inline SimState init_state(const RunContext& ctx) {
  const Economy& e = *ctx.econ;
  if (e.total_consumption() <= 0.0)
    throw ZeroConsumption("economy has no household consumption");
  SimState st;
  st.day = 0;
  st.s = ctx.s_target;
  st.l = e.l0;
  st.d_prev = e.x0;
  st.cd_prev = e.total_consumption();
  st.xinp_prev.assign(static_cast<std::size_t>(e.n()), std::nullopt);
  return st;
}

// ---- elementary updates -------------------------------------------------

/// Orders placed with each supplier: replacement at the recipe rate for
/// yesterday's demand plus a partial refill of the inventory gap. Orders
/// never go negative; an overfull inventory is simply run down.
inline Mat intermediate_orders(const Mat& a, const Vec& d_prev,
                               const Mat& s_target, const Mat& s, double tau) {
  Mat orders = a * d_prev.asDiagonal() + (s_target - s) / tau;
  return orders.cwiseMax(0.0);
}

struct ConsumptionDemand {
  double total = 0.0;   // aggregate demand
  Vec per_good;         // split across goods
  double eps_tilde = 0.0;  // aggregate preference shock
};

/// Household demand: an error-correction blend of habit (yesterday's level)
/// and the level supported by current and expected permanent income, scaled
/// by the aggregate preference shock. theta0 are calibration budget shares;
/// eps_d the per-good shocks; delta_s the share of shocked spending that is
/// saved instead of redirected.
inline ConsumptionDemand consumption_demand(const Vec& theta0, const Vec& eps_d,
                                            double delta_s, double cd_prev,
                                            double income, double perm_income,
                                            double rho, double m) {
  ConsumptionDemand out;
  const Eigen::Index n = theta0.size();
  if (eps_d.size() != n)
    throw DimensionMismatch("demand shock vector size mismatch");

  Vec theta_bar = theta0.cwiseProduct(Vec::Ones(n) - eps_d);
  const double mass = theta_bar.sum();
  if (theta0.sum() <= 0.0) {
    out.per_good = Vec::Zero(n);
    return out;  // no household sector at calibration
  }
  if (mass <= 0.0)
    throw AllGoodsShocked("every consumption good is fully shocked");
  out.eps_tilde = delta_s * (1.0 - mass);

  if (cd_prev <= 0.0)
    throw ZeroConsumption("habit level is not positive, cannot update");
  if (income <= 0.0 || perm_income <= 0.0)
    throw NonPositiveIncome("household income must stay positive");

  const double log_level = rho * std::log(cd_prev) +
                           0.5 * (1.0 - rho) * std::log(m * income) +
                           0.5 * (1.0 - rho) * std::log(m * perm_income);
  out.total = (1.0 - out.eps_tilde) * std::exp(log_level);
  out.per_good = (theta_bar / mass) * out.total;
  return out;
}

/// Workforce adjustment toward yesterday's realized need, then the shock cap.
/// Hiring is slower than firing; the cap from today's labor shock applies
/// immediately.
inline Vec update_labor(const SimState& st, const Economy& e,
                        const Params& p, const Vec& eps_s_today) {
  const Eigen::Index n = e.n();
  Vec l_new(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double delta = 0.0;
    if (e.x0(i) > 0.0 && e.l0(i) > 0.0) {
      const double xcap_prev = (st.l(i) / e.l0(i)) * e.x0(i);
      const double need = clamp_limit(
          st.d_prev(i), st.xinp_prev[static_cast<std::size_t>(i)]);
      delta = (e.l0(i) / e.x0(i)) * (need - xcap_prev);
    }
    double l = st.l(i) + (delta >= 0.0 ? p.gamma_h : p.gamma_f) * delta;
    const double cap = (1.0 - eps_s_today(i)) * e.l0(i);
    l_new(i) = std::clamp(l, 0.0, cap);
  }
  return l_new;
}

struct Deliveries {
  Mat z;      // intermediate deliveries (supplier j, customer i)
  Vec c;      // household deliveries
  Vec f;      // other-final-demand deliveries
  Vec scale;  // realized share of demand served, per supplier
};

/// Proportional rationing: every customer of supplier j receives the same
/// share x_j / d_j of their order. `d` must be the same total demand that
/// capped production, d_j = sum_i orders(j,i) + c_demand_j + f_demand_j.
/// A supplier nobody ordered from delivers nothing and keeps scale 1.
inline Deliveries ration_and_deliver(const Mat& orders, const Vec& c_demand,
                                     const Vec& f_demand, const Vec& d,
                                     const Vec& x) {
  const Eigen::Index n = x.size();
  Deliveries out;
  out.scale = Vec::Ones(n);
  for (Eigen::Index j = 0; j < n; ++j)
    if (d(j) > 0.0) out.scale(j) = x(j) / d(j);
  out.z = out.scale.asDiagonal() * orders;
  out.c = c_demand.cwiseProduct(out.scale);
  out.f = f_demand.cwiseProduct(out.scale);
  return out;
}

/// Stocks absorb deliveries and release what production used. Clamped at
/// zero: a guaranteed input cannot legally go negative (checked upstream),
/// and non-guaranteed usage is already stock-limited, so the clamp only
/// swallows rounding dust.
inline Mat update_inventories(const Mat& s, const Mat& z_deliv,
                              const Mat& usage) {
  return (s + z_deliv - usage).cwiseMax(0.0);
}

// ---- the daily step -------------------------------------------------------

inline std::pair<SimState, DayRecord> step(const RunContext& ctx,
                                           const SimState& st) {
  const Economy& e = *ctx.econ;
  const ShockSchedule& sched = *ctx.schedule;
  const Params& p = ctx.params;
  const int t = st.day;
  if (t >= sched.horizon)
    throw DimensionMismatch("stepping past the schedule horizon");
  const Eigen::Index n = e.n();

  // 1. Hiring and firing, then today's labor income.
  const Vec eps_s_today = sched.eps_s.row(t).transpose();
  Vec l_new = update_labor(st, e, p, eps_s_today);
  const double l_tilde = l_new.sum();
  const bool benefits =
      sched.phase[static_cast<std::size_t>(t)] != Phase::Pre;
  const double l_eff =
      benefits ? p.b * e.total_labor() + (1.0 - p.b) * l_tilde : l_tilde;
  const double xi = ctx.xi_path(t);
  const double l_perm = xi * e.total_labor();

  // 2. Demand formation.
  const Vec eps_d_today = sched.eps_d.row(t).transpose();
  ConsumptionDemand cons =
      consumption_demand(ctx.theta0, eps_d_today, p.delta_s, st.cd_prev,
                         l_eff, l_perm, p.rho, ctx.m);

  Vec f_demand(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double fd = 0.0;
    for (int k = 0; k < kFdCategoryCount; ++k) {
      double factor = sched.f_factor(t, k);
      if (k == int(FdCategory::Npish)) factor *= 1.0 - eps_d_today(i);
      fd += e.f0(i, k) * factor;
    }
    f_demand(i) = sched.row_factor(t, i) * fd;
  }

  Mat orders =
      intermediate_orders(ctx.tc.a, st.d_prev, ctx.s_target, st.s, p.tau);
  Vec d = orders.rowwise().sum() + cons.per_good + f_demand;

  // 3. Production.
  Vec xcap = capacity(l_new, e.l0, e.x0);
  InputState istate{st.s, ctx.tc.a, e.criticality, e.x0};
  InputBoundDiag diag;
  std::vector<InputLimit> xinp =
      input_constrained_output(ctx.rule, istate, &diag);
  Vec x = realized_output(xcap, xinp, d);

  // 4. Proportional rationing.
  Deliveries del = ration_and_deliver(orders, cons.per_good, f_demand, d, x);

  // 5. Inventory turnover.
  Mat usage = input_usage(ctx.rule, x, istate, p.overdraw_tol);
  Mat s_new = update_inventories(st.s, del.z, usage);

  SimState next;
  next.day = t + 1;
  next.s = std::move(s_new);
  next.l = l_new;
  next.d_prev = d;
  next.cd_prev = cons.total > 0.0 ? cons.total : st.cd_prev;
  next.xinp_prev = xinp;

  DayRecord rec;
  rec.day = t;
  rec.x = std::move(x);
  rec.d = std::move(d);
  rec.xcap = std::move(xcap);
  rec.l = std::move(l_new);
  rec.c = std::move(del.c);
  rec.f = std::move(del.f);
  rec.c_demand = std::move(cons.per_good);
  rec.f_demand = std::move(f_demand);
  rec.cd_total = cons.total;
  rec.l_tilde = l_tilde;
  rec.l_eff = l_eff;
  rec.xi = xi;
  if (ctx.record_flows) {
    rec.orders = std::move(orders);
    rec.z_deliv = std::move(del.z);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& lim = xinp[static_cast<std::size_t>(i)];
    if (lim && *lim < std::min(rec.xcap(i), rec.d(i))) {
      ++rec.input_bound_count;
      // Away from a binding input limit the pooled/point comparison is a
      // rounding coin flip (at the calibration point every ratio ties), so
      // the pooled term only counts when the limit actually capped output.
      if (diag.pooled_bound[static_cast<std::size_t>(i)])
        ++rec.pooled_bound_count;
    }
  }
  return {std::move(next), std::move(rec)};
}

/// Runs the schedule from the steady state and returns one record per day.
inline Trajectory run_simulation(const RunContext& ctx) {
  Trajectory traj;
  traj.days.reserve(static_cast<std::size_t>(ctx.schedule->horizon));
  SimState st = init_state(ctx);
  for (int t = 0; t < ctx.schedule->horizon; ++t) {
    auto [next, rec] = step(ctx, st);
    st = std::move(next);
    traj.days.push_back(std::move(rec));
  }
  return traj;
}

inline Trajectory run_simulation(const Economy& econ,
                                 ProductionFunctionKind kind,
                                 const ShockSchedule& schedule,
                                 const Params& params) {
  RunContext ctx = make_run_context(econ, kind, schedule, params);
  return run_simulation(ctx);
}

}  // namespace prodnet
