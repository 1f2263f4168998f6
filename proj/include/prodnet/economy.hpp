#pragma once

#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "prodnet/errors.hpp"
#include "prodnet/types.hpp"

namespace prodnet {

// Canonical order and spelling of the other-final-demand categories. Every
// ingested table and every schedule uses exactly this set.
inline const std::vector<std::string>& final_demand_categories() {
  static const std::vector<std::string> k{"npish", "government", "investment",
                                          "export", "inventory_change"};
  return k;
}

enum class FdCategory : int {
  Npish = 0,
  Government = 1,
  Investment = 2,
  Export = 3,
  InventoryChange = 4
};

inline constexpr int kFdCategoryCount = 5;

/// A calibrated economy in daily units. All flow quantities are per day;
/// inventory targets are expressed in days of production.
struct Economy {
  std::vector<std::string> codes;  // industry codes, unique, defines order
  Mat z0;           // (j,i): daily flow of good j into industry i
  Vec c0;           // household consumption per good
  Mat f0;           // (j,k): other final demand, k indexes final_demand_categories()
  Vec l0;           // daily labor compensation per industry
  Vec x0;           // daily gross output per industry
  Vec n_days;       // inventory target, days of production of each user
  Mat criticality;  // (j,i) in {0, 0.5, 1}; diagonal is 1 by definition

  Eigen::Index n() const { return static_cast<Eigen::Index>(codes.size()); }

  Eigen::Index index_of(const std::string& code) const {
    for (Eigen::Index i = 0; i < n(); ++i)
      if (codes[static_cast<std::size_t>(i)] == code) return i;
    return -1;
  }

  double total_labor() const { return l0.sum(); }
  double total_consumption() const { return c0.sum(); }
};

namespace detail {

/// One pass over every consistency check. `emit` either throws (validation)
/// or records the message and returns (reporting); after a dimension problem
/// the scan stops since further indexing would be unsafe.
template <typename Emit>
void scan_economy(const Economy& e, double rel_tol, Emit&& emit) {
  const Eigen::Index n = e.n();
  if (n == 0) {
    emit(EmptyInput("economy has no industries"));
    return;
  }
  if (e.z0.rows() != n || e.z0.cols() != n || e.c0.size() != n ||
      e.f0.rows() != n || e.f0.cols() != kFdCategoryCount ||
      e.l0.size() != n || e.x0.size() != n || e.n_days.size() != n ||
      e.criticality.rows() != n || e.criticality.cols() != n) {
    emit(DimensionMismatch("economy arrays disagree on industry count"));
    return;
  }

  {
    std::unordered_map<std::string, int> seen;
    for (const auto& c : e.codes) {
      if (c.empty()) emit(EmptyInput("empty industry code"));
      if (++seen[c] == 2) emit(DuplicateCode(c));
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      if (e.z0(j, i) < 0.0) emit(NegativeFlow("z0", j, i));
    if (e.c0(i) < 0.0) emit(NegativeFlow("c0", i, 0));
    for (Eigen::Index k = 0; k < kFdCategoryCount; ++k)
      if (e.f0(i, k) < 0.0) emit(NegativeFlow("f0", i, k));
    if (e.l0(i) < 0.0) emit(NegativeFlow("l0", i, 0));
    if (e.x0(i) < 0.0) emit(NegativeFlow("x0", i, 0));
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    const double row = e.z0.row(j).sum() + e.c0(j) + e.f0.row(j).sum();
    const double gap =
        std::abs(e.x0(j) - row) / std::max(1.0, std::abs(e.x0(j)));
    if (gap > rel_tol)
      emit(MarketClearingViolation(e.codes[static_cast<std::size_t>(j)], gap));
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = e.criticality(j, i);
      if (r != 0.0 && r != 0.5 && r != 1.0)
        emit(InvalidRating("criticality entry outside {0, 0.5, 1} at (" +
                           std::to_string(j) + "," + std::to_string(i) + ")"));
    }
    if (e.criticality(i, i) != 1.0)
      emit(InvalidRating("criticality diagonal must be 1 at " +
                         std::to_string(i)));
  }

  // An industry that uses inputs needs at least one day of stock cover,
  // otherwise even the unshocked economy cannot reproduce x0 day after day.
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool has_inputs = e.z0.col(i).maxCoeff() > 0.0;
    if (has_inputs && e.x0(i) > 0.0 && e.n_days(i) < 1.0)
      emit(EmptyInput("inventory target below one day for industry " +
                      e.codes[static_cast<std::size_t>(i)]));
  }
}

}  // namespace detail

/// Checks internal consistency; throws on the first violation found.
/// `rel_tol` bounds the relative gap allowed between x0 and the row totals
/// of z0 + c0 + f0 (market clearing).
inline void validate_economy(const Economy& e, double rel_tol = 1e-6) {
  detail::scan_economy(e, rel_tol, [](auto&& err) { throw err; });
}

/// Same checks, but collects every violation instead of stopping.
inline std::vector<std::string> economy_violations(const Economy& e,
                                                   double rel_tol = 1e-6) {
  std::vector<std::string> out;
  detail::scan_economy(e, rel_tol,
                       [&out](auto&& err) { out.emplace_back(err.what()); });
  return out;
}

}  // namespace prodnet
