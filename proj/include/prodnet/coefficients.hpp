#pragma once

#include <Eigen/Dense>

#include "prodnet/economy.hpp"
#include "prodnet/errors.hpp"
#include "prodnet/types.hpp"

namespace prodnet {

/// Input requirements and sales allocation derived from the calibration year.
/// a(j,i)  : units of good j needed per unit of output of industry i.
/// b_alloc(i,j) : share of industry i's output delivered to industry j.
/// Columns (rows) belonging to zero-output industries are identically zero.
struct TechnicalCoefficients {
  Mat a;
  Mat b_alloc;
};

inline TechnicalCoefficients technical_coefficients(const Economy& e) {
  const Eigen::Index n = e.n();
  TechnicalCoefficients tc;
  tc.a = Mat::Zero(n, n);
  tc.b_alloc = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (e.x0(i) <= 0.0) continue;
    tc.a.col(i) = e.z0.col(i) / e.x0(i);
    tc.b_alloc.row(i) = e.z0.row(i) / e.x0(i);
  }
  return tc;
}

namespace detail {

inline Vec solve_ones(const Mat& m, const char* what) {
  const Eigen::Index n = m.rows();
  Mat sys = Mat::Identity(n, n) - m;
  Eigen::FullPivLU<Mat> lu(sys);
  if (!lu.isInvertible())
    throw SingularSystem(std::string(what) + ": system is singular");
  return lu.solve(Vec::Ones(n));
}

}  // namespace detail

/// Average distance to final use, u = (I - B)^-1 1. Equals 1 for an industry
/// selling only to final demand and grows with nested intermediate use.
inline Vec upstreamness(const TechnicalCoefficients& tc) {
  return detail::solve_ones(tc.b_alloc, "upstreamness");
}

/// Classic output multiplier, m = (I - A^T)^-1 1: total economy-wide output
/// triggered per unit of final demand for each industry.
inline Vec output_multipliers(const TechnicalCoefficients& tc) {
  return detail::solve_ones(tc.a.transpose(), "output multipliers");
}

}  // namespace prodnet
