#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "prodnet/calibration.hpp"
#include "prodnet/csv.hpp"
#include "prodnet/dynamics.hpp"
#include "prodnet/economy.hpp"
#include "prodnet/errors.hpp"
#include "prodnet/shocks.hpp"
#include "prodnet/analysis.hpp"

namespace prodnet {

// ---- economy ingestion ------------------------------------------------------

/// Reads a square flows table. Layout: one row per supplying industry, with
/// columns `industry_code`, one column per industry (same code set as the
/// rows), `c`, the five other-final-demand categories, `l`, and optionally
/// `x`. Annual tables are converted to daily units by dividing by 365.
/// Gross output is always canonicalized to the row totals; a supplied `x`
/// column only has to agree with them within `clearing_tol` (relative).
///
/// Inventory targets and criticality are not part of this table; the caller
/// attaches them (see read_ratings_matrix and the survey reader) or accepts
/// the defaults: every input critical, `default_target_days` of cover.
inline Economy read_io_table(const std::string& path, bool annual = false,
                             double clearing_tol = 1e-6,
                             double default_target_days = 10.0) {
  const CsvTable t = read_csv(path);
  const std::size_t code_col = t.col("industry_code");

  std::vector<std::string> codes;
  for (const auto& row : t.rows) codes.push_back(row[code_col]);
  const auto n = static_cast<Eigen::Index>(codes.size());
  if (n == 0) throw EmptyInput(path + ": table has no rows");
  {
    std::set<std::string> uniq(codes.begin(), codes.end());
    if (static_cast<Eigen::Index>(uniq.size()) != n) {
      for (std::size_t i = 0; i < codes.size(); ++i)
        for (std::size_t j = i + 1; j < codes.size(); ++j)
          if (codes[i] == codes[j]) throw DuplicateCode(codes[i]);
    }
  }

  std::vector<std::size_t> user_cols;
  for (const auto& code : codes) user_cols.push_back(t.col(code));
  const std::size_t c_col = t.col("c");
  std::vector<std::size_t> f_cols;
  for (const auto& cat : final_demand_categories()) f_cols.push_back(t.col(cat));
  const std::size_t l_col = t.col("l");
  const bool has_x = t.has_col("x");
  const std::size_t x_col = has_x ? t.col("x") : 0;

  Economy e;
  e.codes = codes;
  e.z0 = Mat(n, n);
  e.c0 = Vec(n);
  e.f0 = Mat(n, kFdCategoryCount);
  e.l0 = Vec(n);
  e.x0 = Vec(n);
  const double scale = annual ? 1.0 / 365.0 : 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& row = t.rows[static_cast<std::size_t>(j)];
    const long line = j + 2;
    for (Eigen::Index i = 0; i < n; ++i)
      e.z0(j, i) =
          scale * parse_double(row[user_cols[static_cast<std::size_t>(i)]],
                               path, line);
    e.c0(j) = scale * parse_double(row[c_col], path, line);
    for (int k = 0; k < kFdCategoryCount; ++k)
      e.f0(j, k) =
          scale * parse_double(row[f_cols[static_cast<std::size_t>(k)]], path,
                               line);
    e.l0(j) = scale * parse_double(row[l_col], path, line);
    if (has_x) e.x0(j) = scale * parse_double(row[x_col], path, line);
  }

  const Vec row_totals = e.z0.rowwise().sum() + e.c0 + e.f0.rowwise().sum();
  if (has_x) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double gap = std::abs(e.x0(j) - row_totals(j)) /
                         std::max(1.0, std::abs(e.x0(j)));
      if (gap > clearing_tol)
        throw MarketClearingViolation(codes[static_cast<std::size_t>(j)], gap);
    }
  }
  e.x0 = row_totals;

  e.n_days = Vec::Constant(n, default_target_days);
  e.criticality = Mat::Ones(n, n);
  return e;
}

// ---- criticality ratings -------------------------------------------------------

/// Long-form analyst scores: input_code, industry_code, analyst_id, rating.
/// Ratings are 0, 0.5, 1 or NA; one matrix per analyst is assembled (cells
/// an analyst never rated stay NA) and the consensus rule of
/// aggregate_ratings produces the final matrix.
inline Mat read_ratings_matrix(const std::string& path,
                               const std::vector<std::string>& codes) {
  const CsvTable t = read_csv(path);
  const std::size_t in_col = t.col("input_code");
  const std::size_t ind_col = t.col("industry_code");
  const std::size_t an_col = t.col("analyst_id");
  const std::size_t r_col = t.col("rating");

  const auto n = static_cast<Eigen::Index>(codes.size());
  const auto index_of = [&](const std::string& code) {
    for (std::size_t i = 0; i < codes.size(); ++i)
      if (codes[i] == code) return static_cast<Eigen::Index>(i);
    throw UnknownIndustry(code);
  };

  std::map<std::string, Mat> by_analyst;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  long line = 1;
  for (const auto& row : t.rows) {
    ++line;
    if (is_na(row[r_col])) continue;
    auto it = by_analyst.find(row[an_col]);
    if (it == by_analyst.end())
      it = by_analyst.emplace(row[an_col], Mat::Constant(n, n, nan)).first;
    it->second(index_of(row[in_col]), index_of(row[ind_col])) =
        parse_double(row[r_col], path, line);
  }
  if (by_analyst.empty()) throw EmptyInput(path + ": no usable ratings");

  std::vector<Mat> mats;
  for (auto& [id, m] : by_analyst) mats.push_back(std::move(m));
  return aggregate_ratings(mats);
}

// ---- inventory survey ------------------------------------------------------------

/// Rows: industry_code, year, begin_stock, end_stock, turnover. A row with
/// NA anywhere is dropped (that industry-year is simply unobserved).
inline std::vector<SurveyRecord> read_survey(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t code_col = t.col("industry_code");
  const std::size_t year_col = t.col("year");
  const std::size_t b_col = t.col("begin_stock");
  const std::size_t e_col = t.col("end_stock");
  const std::size_t s_col = t.col("turnover");

  std::vector<SurveyRecord> out;
  long line = 1;
  for (const auto& row : t.rows) {
    ++line;
    if (is_na(row[year_col]) || is_na(row[b_col]) || is_na(row[e_col]) ||
        is_na(row[s_col]))
      continue;
    SurveyRecord r;
    r.code = row[code_col];
    r.year = int(parse_long(row[year_col], path, line));
    r.begin_stock = parse_double(row[b_col], path, line);
    r.end_stock = parse_double(row[e_col], path, line);
    r.turnover = parse_double(row[s_col], path, line);
    out.push_back(std::move(r));
  }
  return out;
}

/// Optional two-column mapping from survey codes to model codes.
inline std::map<std::string, std::string> read_survey_map(
    const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t s_col = t.col("source_code");
  const std::size_t m_col = t.col("model_code");
  std::map<std::string, std::string> out;
  for (const auto& row : t.rows) out[row[s_col]] = row[m_col];
  return out;
}

// ---- crosswalk -------------------------------------------------------------------

/// source_code,target_code rows; a source listed with k targets splits its
/// weight evenly among them.
inline std::multimap<std::string, std::string> read_crosswalk(
    const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t s_col = t.col("source_code");
  const std::size_t g_col = t.col("target_code");
  std::multimap<std::string, std::string> out;
  for (const auto& row : t.rows) out.emplace(row[s_col], row[g_col]);
  return out;
}

struct KeyedValues {
  std::vector<std::string> codes;
  Vec values;
};

/// Reads (code, value) pairs from the given columns.
inline KeyedValues read_keyed_values(const std::string& path,
                                     const std::string& key_col,
                                     const std::string& value_col) {
  const CsvTable t = read_csv(path);
  const std::size_t k_col = t.col(key_col);
  const std::size_t v_col = t.col(value_col);
  KeyedValues out;
  out.values = Vec(static_cast<Eigen::Index>(t.rows.size()));
  long line = 1;
  for (const auto& row : t.rows) {
    ++line;
    out.codes.push_back(row[k_col]);
    out.values(static_cast<Eigen::Index>(out.codes.size() - 1)) =
        parse_double(row[v_col], path, line);
  }
  return out;
}

// ---- shock attributes ---------------------------------------------------------------

struct RawAttributes {
  std::vector<std::string> codes;
  IndustryAttributes attrs;
};

/// industry_code, rli, ess, ppi, eps_d; all fractions in [0, 1].
inline RawAttributes read_attributes(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t code_col = t.col("industry_code");
  const std::size_t rli_col = t.col("rli");
  const std::size_t ess_col = t.col("ess");
  const std::size_t ppi_col = t.col("ppi");
  const std::size_t d_col = t.col("eps_d");

  RawAttributes out;
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  out.attrs.rli = Vec(n);
  out.attrs.ess = Vec(n);
  out.attrs.ppi = Vec(n);
  out.attrs.eps_d = Vec(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& row = t.rows[static_cast<std::size_t>(j)];
    const long line = j + 2;
    out.codes.push_back(row[code_col]);
    out.attrs.rli(j) = parse_double(row[rli_col], path, line);
    out.attrs.ess(j) = parse_double(row[ess_col], path, line);
    out.attrs.ppi(j) = parse_double(row[ppi_col], path, line);
    out.attrs.eps_d(j) = parse_double(row[d_col], path, line);
  }
  return out;
}

/// Reorders raw per-code attributes onto the economy's industry order.
inline IndustryAttributes align_attributes(const RawAttributes& raw,
                                           const std::vector<std::string>& codes) {
  const auto n = static_cast<Eigen::Index>(codes.size());
  IndustryAttributes out;
  out.rli = Vec(n);
  out.ess = Vec(n);
  out.ppi = Vec(n);
  out.eps_d = Vec(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& code = codes[static_cast<std::size_t>(i)];
    Eigen::Index at = -1;
    for (std::size_t j = 0; j < raw.codes.size(); ++j)
      if (raw.codes[j] == code) at = static_cast<Eigen::Index>(j);
    if (at < 0) throw MissingAttribute(code);
    out.rli(i) = raw.attrs.rli(at);
    out.ess(i) = raw.attrs.ess(at);
    out.ppi(i) = raw.attrs.ppi(at);
    out.eps_d(i) = raw.attrs.eps_d(at);
  }
  return out;
}

/// Per-code values aligned onto the economy order (e.g. fixed supply shocks).
inline Vec align_values(const KeyedValues& raw,
                        const std::vector<std::string>& codes) {
  const auto n = static_cast<Eigen::Index>(codes.size());
  Vec out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& code = codes[static_cast<std::size_t>(i)];
    Eigen::Index at = -1;
    for (std::size_t j = 0; j < raw.codes.size(); ++j)
      if (raw.codes[j] == code) at = static_cast<Eigen::Index>(j);
    if (at < 0) throw UnknownIndustry(code);
    out(i) = raw.values(at);
  }
  return out;
}

// ---- trajectory output -----------------------------------------------------------------

/// Long-form daily series: one row per industry and day plus a TOTAL row
/// per day. Numbers use the shortest round-trip representation, so repeated
/// runs of the same configuration produce identical bytes.
inline void write_trajectory_csv(const std::string& path, const Economy& econ,
                                 const Trajectory& traj) {
  CsvWriter w(path, {"day", "industry_code", "x", "d", "c", "f", "l"});
  for (const auto& rec : traj.days) {
    for (Eigen::Index i = 0; i < econ.n(); ++i) {
      w.write_row({std::to_string(rec.day),
                   econ.codes[static_cast<std::size_t>(i)],
                   format_double(rec.x(i)), format_double(rec.d(i)),
                   format_double(rec.c(i)), format_double(rec.f(i)),
                   format_double(rec.l(i))});
    }
    w.write_row({std::to_string(rec.day), "TOTAL", format_double(rec.x.sum()),
                 format_double(rec.d.sum()), format_double(rec.c.sum()),
                 format_double(rec.f.sum()), format_double(rec.l.sum())});
  }
}

struct TrajectoryRow {
  int day = 0;
  std::string code;
  double x = 0, d = 0, c = 0, f = 0, l = 0;
};

inline std::vector<TrajectoryRow> read_trajectory_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t day_col = t.col("day");
  const std::size_t code_col = t.col("industry_code");
  const std::size_t x_col = t.col("x");
  const std::size_t d_col = t.col("d");
  const std::size_t c_col = t.col("c");
  const std::size_t f_col = t.col("f");
  const std::size_t l_col = t.col("l");
  std::vector<TrajectoryRow> out;
  long line = 1;
  for (const auto& row : t.rows) {
    ++line;
    TrajectoryRow r;
    r.day = int(parse_long(row[day_col], path, line));
    r.code = row[code_col];
    r.x = parse_double(row[x_col], path, line);
    r.d = parse_double(row[d_col], path, line);
    r.c = parse_double(row[c_col], path, line);
    r.f = parse_double(row[f_col], path, line);
    r.l = parse_double(row[l_col], path, line);
    out.push_back(std::move(r));
  }
  return out;
}

// ---- monthly panels -----------------------------------------------------------------------

inline void write_panel_csv(const std::string& path, const MonthlyPanel& p) {
  const bool weighted = p.weights.size() > 0;
  std::vector<std::string> header{"industry_code", "month", "value"};
  if (weighted) header.push_back("weight");
  CsvWriter w(path, header);
  for (std::size_t i = 0; i < p.codes.size(); ++i) {
    for (std::size_t mth = 0; mth < p.months.size(); ++mth) {
      std::vector<std::string> row{
          p.codes[i], p.months[mth],
          format_double(p.values(static_cast<Eigen::Index>(i),
                                 static_cast<Eigen::Index>(mth)))};
      if (weighted)
        row.push_back(format_double(p.weights(static_cast<Eigen::Index>(i))));
      w.write_row(row);
    }
  }
}

inline MonthlyPanel read_panel_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t code_col = t.col("industry_code");
  const std::size_t month_col = t.col("month");
  const std::size_t value_col = t.col("value");
  const bool weighted = t.has_col("weight");
  const std::size_t weight_col = weighted ? t.col("weight") : 0;

  MonthlyPanel p;
  std::map<std::string, Eigen::Index> code_at;
  std::map<std::string, Eigen::Index> month_at;
  for (const auto& row : t.rows) {
    if (!code_at.count(row[code_col])) {
      code_at[row[code_col]] = static_cast<Eigen::Index>(p.codes.size());
      p.codes.push_back(row[code_col]);
    }
    if (!month_at.count(row[month_col])) {
      month_at[row[month_col]] = 0;  // ordered below
      p.months.push_back(row[month_col]);
    }
  }
  std::sort(p.months.begin(), p.months.end());
  for (std::size_t m = 0; m < p.months.size(); ++m)
    month_at[p.months[m]] = static_cast<Eigen::Index>(m);

  p.values = Mat::Zero(static_cast<Eigen::Index>(p.codes.size()),
                       static_cast<Eigen::Index>(p.months.size()));
  if (weighted)
    p.weights = Vec::Zero(static_cast<Eigen::Index>(p.codes.size()));
  long line = 1;
  for (const auto& row : t.rows) {
    ++line;
    const Eigen::Index i = code_at[row[code_col]];
    const Eigen::Index m = month_at[row[month_col]];
    p.values(i, m) = parse_double(row[value_col], path, line);
    if (weighted) p.weights(i) = parse_double(row[weight_col], path, line);
  }
  return p;
}

}  // namespace prodnet
