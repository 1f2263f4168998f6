#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "prodnet/errors.hpp"
#include "prodnet/types.hpp"

namespace prodnet {

// ---- inventory targets from a stocks survey ---------------------------------

/// One valid survey observation. Rows with missing fields are dropped at
/// ingestion and simply contribute no weight.
struct SurveyRecord {
  std::string code;  // source industry code
  int year = 0;
  double begin_stock = 0.0;
  double end_stock = 0.0;
  double turnover = 0.0;
};

/// Derives per-industry inventory targets, in days of production, from a
/// stocks-and-turnover survey.
///
/// Per source industry and year: ratio_y = 365 * mid_stock / turnover with
/// mid_stock = (begin + end) / 2. Years are blended with weights
/// decay^(max_year - y), where max_year is the newest year anywhere in the
/// survey, so a missing year contributes zero weight rather than zero value.
/// Source industries are then averaged onto model industries with their mean
/// turnover as weight (several sources may map to one model code). Model
/// industries absent from the survey receive the unweighted mean target of
/// `service_codes`, the industries whose stock holding the survey does not
/// observe directly.
inline Vec inventory_targets_from_survey(
    const std::vector<SurveyRecord>& records,
    const std::vector<std::string>& model_codes,
    const std::map<std::string, std::string>& source_to_model = {},
    double decay = 0.95,
    const std::vector<std::string>& service_codes = {}) {
  if (records.empty()) throw NoDataAnywhere("survey holds no usable rows");

  int max_year = records.front().year;
  for (const auto& r : records) max_year = std::max(max_year, r.year);

  struct SourceAgg {
    double weighted_ratio = 0.0;
    double weight = 0.0;
    double turnover_sum = 0.0;
    int years = 0;
  };
  std::map<std::string, SourceAgg> by_source;
  for (const auto& r : records) {
    if (r.turnover <= 0.0) throw NonPositiveTurnover(r.code, r.year);
    const double ratio = 365.0 * 0.5 * (r.begin_stock + r.end_stock) / r.turnover;
    const double w = std::pow(decay, double(max_year - r.year));
    auto& agg = by_source[r.code];
    agg.weighted_ratio += w * ratio;
    agg.weight += w;
    agg.turnover_sum += r.turnover;
    agg.years += 1;
  }

  // Source-level target and aggregation weight (mean turnover).
  struct SourceValue {
    double target = 0.0;
    double weight = 0.0;
  };
  std::map<std::string, SourceValue> source_value;
  for (const auto& [code, agg] : by_source)
    source_value[code] = {agg.weighted_ratio / agg.weight,
                          agg.turnover_sum / double(agg.years)};

  const auto model_of = [&](const std::string& src) -> std::string {
    if (source_to_model.empty()) return src;
    auto it = source_to_model.find(src);
    return it == source_to_model.end() ? src : it->second;
  };

  std::map<std::string, double> num, den;
  for (const auto& [src, val] : source_value) {
    const std::string tgt = model_of(src);
    num[tgt] += val.weight * val.target;
    den[tgt] += val.weight;
  }

  std::map<std::string, double> model_target;
  for (const auto& [tgt, d] : den)
    if (d > 0.0) model_target[tgt] = num[tgt] / d;

  // Imputation value for industries the survey does not cover.
  double service_mean = 0.0;
  {
    double sum = 0.0;
    int cnt = 0;
    for (const auto& c : service_codes) {
      auto it = model_target.find(c);
      if (it != model_target.end()) {
        sum += it->second;
        ++cnt;
      }
    }
    if (cnt > 0) service_mean = sum / double(cnt);
  }

  Vec out(static_cast<Eigen::Index>(model_codes.size()));
  for (std::size_t i = 0; i < model_codes.size(); ++i) {
    auto it = model_target.find(model_codes[i]);
    if (it != model_target.end()) {
      out(static_cast<Eigen::Index>(i)) = it->second;
    } else {
      double fallback = service_mean;
      if (fallback <= 0.0) {
        // No designated service industries present: fall back to the
        // unweighted mean over everything observed.
        double sum = 0.0;
        for (const auto& [c, v] : model_target) sum += v;
        if (model_target.empty())
          throw NoDataAnywhere("no survey data maps to any model industry");
        fallback = sum / double(model_target.size());
      }
      out(static_cast<Eigen::Index>(i)) = fallback;
    }
  }
  return out;
}

// ---- criticality ratings ----------------------------------------------------

// Analyst scores live in {0, 0.5, 1}; a cell an analyst did not rate is NaN.
// The consensus cell is the mean over non-NaN scores, snapped to
//   1   if mean >= 2/3,
//   0   if mean <= 1/3,
//   0.5 otherwise,
// with a small slack so a mean that is exactly a third boundary in real
// arithmetic is not lost to rounding. Cells nobody rated aggregate to 0.
// The diagonal (own input) is critical by definition.
inline Mat aggregate_ratings(const std::vector<Mat>& per_analyst) {
  if (per_analyst.empty()) throw EmptyInput("no analyst matrices");
  const Eigen::Index n = per_analyst.front().rows();
  for (const auto& m : per_analyst)
    if (m.rows() != n || m.cols() != n)
      throw DimensionMismatch("analyst matrices disagree on size");

  constexpr double kSlack = 1e-9;
  Mat out = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double sum = 0.0;
      int cnt = 0;
      for (const auto& m : per_analyst) {
        const double v = m(j, i);
        if (std::isnan(v)) continue;
        if (v != 0.0 && v != 0.5 && v != 1.0)
          throw InvalidRating("rating outside {0, 0.5, 1} at (" +
                              std::to_string(j) + "," + std::to_string(i) +
                              ")");
        sum += v;
        ++cnt;
      }
      if (cnt == 0) {
        out(j, i) = 0.0;
        continue;
      }
      const double mean = sum / double(cnt);
      if (mean >= 2.0 / 3.0 - kSlack)
        out(j, i) = 1.0;
      else if (mean <= 1.0 / 3.0 + kSlack)
        out(j, i) = 0.0;
      else
        out(j, i) = 0.5;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

// ---- crosswalk aggregation ---------------------------------------------------

/// Weighted aggregation of a source-classified attribute onto target codes.
/// A source mapped to k targets contributes weight w/k to each of them, so a
/// source split across several targets is not double counted. Every target
/// must receive at least one source, and positive total weight.
inline Vec crosswalk_aggregate(
    const std::vector<std::string>& source_codes, const Vec& values,
    const Vec& weights,
    const std::multimap<std::string, std::string>& source_to_targets,
    const std::vector<std::string>& target_codes) {
  if (source_codes.empty()) throw EmptyInput("crosswalk has no sources");
  if (values.size() != static_cast<Eigen::Index>(source_codes.size()) ||
      weights.size() != values.size())
    throw DimensionMismatch("crosswalk arrays disagree on source count");

  std::map<std::string, double> num, den;
  std::set<std::string> touched;
  for (std::size_t s = 0; s < source_codes.size(); ++s) {
    const auto [lo, hi] = source_to_targets.equal_range(source_codes[s]);
    const auto k = std::distance(lo, hi);
    if (k == 0) continue;
    const double w = weights(static_cast<Eigen::Index>(s)) / double(k);
    for (auto it = lo; it != hi; ++it) {
      num[it->second] += w * values(static_cast<Eigen::Index>(s));
      den[it->second] += w;
      touched.insert(it->second);
    }
  }

  Vec out(static_cast<Eigen::Index>(target_codes.size()));
  for (std::size_t t = 0; t < target_codes.size(); ++t) {
    const auto& code = target_codes[t];
    if (!touched.count(code)) throw UnmappedTarget(code);
    if (den[code] <= 0.0) throw ZeroWeightTarget(code);
    out(static_cast<Eigen::Index>(t)) = num[code] / den[code];
  }
  return out;
}

// ---- propensity to consume ----------------------------------------------------

struct Propensity {
  double value = 0.0;
  bool clamped = false;  // true when raw c0/l0 exceeded 1 and was capped
};

/// Aggregate propensity to consume out of labor income, total household
/// consumption over total labor compensation in the calibration year.
inline Propensity propensity_to_consume(double total_c0, double total_l0) {
  if (total_l0 <= 0.0)
    throw ZeroLaborIncome("labor compensation totals zero, propensity undefined");
  const double raw = total_c0 / total_l0;
  if (raw > 1.0) return {1.0, true};
  return {raw, false};
}

}  // namespace prodnet
