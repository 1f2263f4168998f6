#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "prodnet/errors.hpp"
#include "prodnet/types.hpp"

namespace prodnet {

// How scarce inputs bound feasible output. The first five are the
// rationing-free forms; the ces_* kinds are the closed-form substitution
// limits of a nested CES technology and differ from their counterparts only
// by one extra linear bound over the non-critical inputs.
enum class ProductionFunctionKind : int {
  Leontief,
  Ihs1,
  Ihs2,
  Ihs3,
  Linear,
  CesLimitLeontief,    // every input critical: collapses to Leontief
  CesLimitIhs13Strict, // important inputs kept individually binding (ihs1-like)
  CesLimitIhs13Loose,  // important inputs pooled as non-critical (ihs3-like)
  CesLimitIhs2
};

inline const char* to_string(ProductionFunctionKind k) {
  switch (k) {
    case ProductionFunctionKind::Leontief: return "leontief";
    case ProductionFunctionKind::Ihs1: return "ihs1";
    case ProductionFunctionKind::Ihs2: return "ihs2";
    case ProductionFunctionKind::Ihs3: return "ihs3";
    case ProductionFunctionKind::Linear: return "linear";
    case ProductionFunctionKind::CesLimitLeontief: return "ces_limit_leontief";
    case ProductionFunctionKind::CesLimitIhs13Strict: return "ces_ihs13_strict";
    case ProductionFunctionKind::CesLimitIhs13Loose: return "ces_ihs13_loose";
    case ProductionFunctionKind::CesLimitIhs2: return "ces_ihs2";
  }
  return "unknown";
}

inline ProductionFunctionKind kind_from_string(const std::string& s) {
  using K = ProductionFunctionKind;
  if (s == "leontief") return K::Leontief;
  if (s == "ihs1") return K::Ihs1;
  if (s == "ihs2") return K::Ihs2;
  if (s == "ihs3") return K::Ihs3;
  if (s == "linear") return K::Linear;
  if (s == "ces_ihs13_strict") return K::CesLimitIhs13Strict;
  if (s == "ces_ihs13_loose") return K::CesLimitIhs13Loose;
  if (s == "ces_ihs2") return K::CesLimitIhs2;
  throw UnknownKind(s);
}

inline const std::vector<ProductionFunctionKind>& all_cli_kinds() {
  using K = ProductionFunctionKind;
  static const std::vector<K> k{K::Leontief, K::Ihs1,  K::Ihs2,
                                K::Ihs3,     K::Linear, K::CesLimitIhs13Strict,
                                K::CesLimitIhs13Loose,  K::CesLimitIhs2};
  return k;
}

/// Inventory situation of every industry on a given day.
/// s(j,i): stock of input j held by industry i. a(j,i): requirement per unit
/// of output. criticality(j,i) in {0, 0.5, 1}. xcap0: initial capacity, the
/// reference point of the ihs2 half-capacity term.
struct InputState {
  Mat s;
  Mat a;
  Mat criticality;
  Vec xcap0;
};

// Requirement entries this small are treated as "not an input": they would
// otherwise turn rounding dust in an ingested table into binding constraints.
inline constexpr double kRequirementFloor = 1e-12;

/// Index sets each kind operates on, resolved once per (a, criticality) pair
/// so the per-day evaluation only walks short vectors.
struct ProductionRule {
  ProductionFunctionKind kind{};
  // Per industry: inputs with a above the floor, split by rating.
  std::vector<std::vector<int>> critical;   // rating 1
  std::vector<std::vector<int>> important;  // rating 0.5
  std::vector<std::vector<int>> other;      // rating 0
  std::vector<std::vector<int>> all;        // union, ascending
  // Per industry: inputs whose availability the chosen form guarantees
  // (a_ji * x <= s_ji holds by construction); usage of everything else is
  // clipped at the stock.
  std::vector<std::vector<int>> guaranteed;
  // Per industry: the set pooled by the ces_* linear term, and its total
  // requirement. Empty pool means the term is absent.
  std::vector<std::vector<int>> pooled;
  Vec pooled_a;

  static ProductionRule build(ProductionFunctionKind kind, const Mat& a,
                              const Mat& criticality) {
    using K = ProductionFunctionKind;
    const Eigen::Index n = a.cols();
    if (criticality.rows() != a.rows() || criticality.cols() != n)
      throw DimensionMismatch("criticality does not match requirements");
    ProductionRule r;
    r.kind = kind;
    r.critical.resize(n);
    r.important.resize(n);
    r.other.resize(n);
    r.all.resize(n);
    r.guaranteed.resize(n);
    r.pooled.resize(n);
    r.pooled_a = Vec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < a.rows(); ++j) {
        if (a(j, i) <= kRequirementFloor) continue;
        r.all[i].push_back(int(j));
        const double rating = criticality(j, i);
        if (rating == 1.0)
          r.critical[i].push_back(int(j));
        else if (rating == 0.5)
          r.important[i].push_back(int(j));
        else
          r.other[i].push_back(int(j));
      }
      switch (kind) {
        case K::Leontief:
        case K::CesLimitLeontief:
          r.guaranteed[i] = r.all[i];
          break;
        case K::Ihs1:
        case K::CesLimitIhs13Strict: {
          auto g = r.critical[i];
          g.insert(g.end(), r.important[i].begin(), r.important[i].end());
          std::sort(g.begin(), g.end());
          r.guaranteed[i] = std::move(g);
          break;
        }
        // The ihs2 half-capacity term does not keep important inputs in
        // stock (production continues while they run out), so only the
        // critical set is guaranteed.
        case K::Ihs2:
        case K::CesLimitIhs2:
        case K::Ihs3:
        case K::CesLimitIhs13Loose:
          r.guaranteed[i] = r.critical[i];
          break;
        case K::Linear:
          break;  // nothing guaranteed, every input drains to zero
      }
      switch (kind) {
        case K::CesLimitIhs13Strict:
        case K::CesLimitIhs2:
          r.pooled[i] = r.other[i];
          break;
        case K::CesLimitIhs13Loose: {
          auto p = r.important[i];
          p.insert(p.end(), r.other[i].begin(), r.other[i].end());
          std::sort(p.begin(), p.end());
          r.pooled[i] = std::move(p);
          break;
        }
        default:
          break;
      }
      for (int j : r.pooled[i]) r.pooled_a(i) += a(j, i);
    }
    return r;
  }
};

/// Production capacity from the current workforce. An industry that used no
/// labor in the calibration year keeps its initial capacity.
inline Vec capacity(const Vec& l, const Vec& l0, const Vec& x0) {
  const Eigen::Index n = l.size();
  if (l0.size() != n || x0.size() != n)
    throw DimensionMismatch("capacity arrays disagree");
  Vec out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out(i) = l0(i) > 0.0 ? (l(i) / l0(i)) * x0(i) : x0(i);
  return out;
}

/// Per-industry diagnostics of one input-bound evaluation.
struct InputBoundDiag {
  // True where the pooled linear term of a ces_* kind was the strict minimum.
  std::vector<std::uint8_t> pooled_bound;
};

/// Output bound imposed by today's inventories under the chosen form.
/// Industries whose relevant input set is empty are unconstrained and
/// return an empty optional.
inline std::vector<InputLimit> input_constrained_output(
    const ProductionRule& rule, const InputState& st,
    InputBoundDiag* diag = nullptr) {
  using K = ProductionFunctionKind;
  const Eigen::Index n = st.a.cols();
  if (st.s.rows() != st.a.rows() || st.s.cols() != n ||
      st.xcap0.size() != n)
    throw DimensionMismatch("input state arrays disagree");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < st.s.rows(); ++j)
      if (st.s(j, i) < 0.0) throw NegativeInventory(j, i);

  std::vector<InputLimit> out(static_cast<std::size_t>(n));
  if (diag) diag->pooled_bound.assign(static_cast<std::size_t>(n), 0);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double point = kInf;  // minimum over individually binding terms
    switch (rule.kind) {
      case K::Leontief:
      case K::CesLimitLeontief:
        for (int j : rule.all[ui]) point = std::min(point, st.s(j, i) / st.a(j, i));
        break;
      case K::Ihs1:
      case K::CesLimitIhs13Strict:
        for (int j : rule.critical[ui])
          point = std::min(point, st.s(j, i) / st.a(j, i));
        for (int j : rule.important[ui])
          point = std::min(point, st.s(j, i) / st.a(j, i));
        break;
      case K::Ihs2:
      case K::CesLimitIhs2:
        for (int j : rule.critical[ui])
          point = std::min(point, st.s(j, i) / st.a(j, i));
        for (int j : rule.important[ui])
          point = std::min(point, 0.5 * (st.s(j, i) / st.a(j, i) + st.xcap0(i)));
        break;
      case K::Ihs3:
      case K::CesLimitIhs13Loose:
        for (int j : rule.critical[ui])
          point = std::min(point, st.s(j, i) / st.a(j, i));
        break;
      case K::Linear: {
        double snum = 0.0, aden = 0.0;
        for (int j : rule.all[ui]) {
          snum += st.s(j, i);
          aden += st.a(j, i);
        }
        if (aden > 0.0) point = snum / aden;
        break;
      }
    }

    double pooled = kInf;
    if (rule.pooled_a(i) > 0.0) {
      double snum = 0.0;
      for (int j : rule.pooled[ui]) snum += st.s(j, i);
      pooled = snum / rule.pooled_a(i);
    }

    const double lim = std::min(point, pooled);
    if (lim == kInf) {
      out[ui] = std::nullopt;
    } else {
      out[ui] = lim;
      if (diag && pooled < point) diag->pooled_bound[ui] = 1;
    }
  }
  return out;
}

/// What the industry actually produces: capacity, input bound and demand,
/// whichever is lowest. Unbounded input limits drop out of the minimum.
inline Vec realized_output(const Vec& xcap, const std::vector<InputLimit>& xinp,
                           const Vec& d) {
  const Eigen::Index n = xcap.size();
  if (d.size() != n || static_cast<Eigen::Index>(xinp.size()) != n)
    throw DimensionMismatch("realized output arrays disagree");
  Vec out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out(i) = clamp_limit(std::min(xcap(i), d(i)), xinp[static_cast<std::size_t>(i)]);
  return out;
}

/// Inputs consumed when producing x. Guaranteed inputs are drawn at the
/// recipe rate a_ji * x_i; the chosen form keeps them in stock, and a draw
/// above stock there means the caller produced more than the form allows.
/// All other inputs draw at the recipe rate until the stock runs out.
inline Mat input_usage(const ProductionRule& rule, const Vec& x,
                       const InputState& st, double overdraw_tol = 1e-9) {
  const Eigen::Index n = st.a.cols();
  if (x.size() != n) throw DimensionMismatch("output vector size mismatch");
  Mat usage = Mat::Zero(st.a.rows(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (int j : rule.guaranteed[ui]) {
      const double need = st.a(j, i) * x(i);
      if (need > st.s(j, i) + overdraw_tol * std::max(1.0, need))
        throw CriticalOverdraw(j, i, need, st.s(j, i));
      usage(j, i) = std::min(need, st.s(j, i));
    }
    for (int j : rule.all[ui]) {
      if (std::binary_search(rule.guaranteed[ui].begin(),
                             rule.guaranteed[ui].end(), int(j)))
        continue;
      usage(j, i) = std::min(st.a(j, i) * x(i), st.s(j, i));
    }
  }
  return usage;
}

}  // namespace prodnet
