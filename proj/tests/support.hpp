#pragma once

// Shared oracles and random-instance generators for the test suite. Oracles
// deliberately avoid the code paths they check: series sums instead of LU
// solves, normal equations instead of QR, plain loops instead of Eigen
// reductions where the rounding order matters.

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "prodnet/production.hpp"
#include "prodnet/shocks.hpp"
#include "prodnet/types.hpp"

namespace support {

using prodnet::Mat;
using prodnet::Vec;

// ---- floating-point distance ----------------------------------------------

/// Number of representable doubles strictly between a and b (0 when equal).
/// Both arguments must be finite.
inline std::uint64_t ulps_apart(double a, double b) {
  const auto key = [](double v) -> std::int64_t {
    const auto bits = std::bit_cast<std::int64_t>(v);
    return bits < 0 ? std::numeric_limits<std::int64_t>::min() - bits : bits;
  };
  const std::int64_t ka = key(a), kb = key(b);
  return static_cast<std::uint64_t>(ka > kb ? ka - kb : kb - ka);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// ---- series oracle for the dense solves ------------------------------------

/// sum_{k=0}^{terms} M^k * 1, evaluated by repeated multiplication. Converges
/// to (I - M)^-1 * 1 when the spectral radius of M is below one.
inline Vec neumann_ones(const Mat& m, int terms) {
  Vec acc = Vec::Ones(m.rows());
  Vec power = acc;
  for (int k = 0; k < terms; ++k) {
    power = m * power;
    acc += power;
  }
  return acc;
}

inline double spectral_radius(const Mat& m) {
  return Eigen::EigenSolver<Mat>(m, false).eigenvalues().cwiseAbs().maxCoeff();
}

/// Random entrywise-nonnegative matrix rescaled to the requested spectral
/// radius. Sparsity keeps the instances from looking all alike.
inline Mat random_matrix_with_radius(Eigen::Index n, double radius,
                                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = unif(rng) < 0.35 ? 0.0 : unif(rng);
  if (m.sum() <= 0.0) m.setConstant(0.5);
  double rho = spectral_radius(m);
  if (rho <= 0.0) {  // nilpotent draw: fall back to a dense one
    m.setConstant(1.0 / double(n));
    rho = spectral_radius(m);
  }
  return m * (radius / rho);
}

// ---- normal-equations least squares ----------------------------------------

struct NormalEqFit {
  Vec coef;
  Vec se;
};

/// Gauss-Jordan inverse with partial pivoting; plain loops on purpose.
inline Mat invert_dense(Mat m) {
  const Eigen::Index n = m.rows();
  Mat inv = Mat::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(pivot, c))) pivot = r;
    if (m(pivot, c) == 0.0) throw std::runtime_error("singular normal matrix");
    m.row(c).swap(m.row(pivot));
    inv.row(c).swap(inv.row(pivot));
    const double d = m(c, c);
    m.row(c) /= d;
    inv.row(c) /= d;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m(r, c);
      if (f == 0.0) continue;
      m.row(r) -= f * m.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

/// Classical OLS through the normal equations: coef = (X'X)^-1 X'y,
/// covariance = RSS/(n-k) * (X'X)^-1. X must already hold the intercept
/// column and any log transforms.
inline NormalEqFit ols_normal_equations(const Vec& y, const Mat& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  const Mat xtx_inv = invert_dense(x.transpose() * x);
  NormalEqFit fit;
  fit.coef = xtx_inv * (x.transpose() * y);
  const Vec resid = y - x * fit.coef;
  const double sigma2 = resid.squaredNorm() / double(n - k);
  fit.se = (sigma2 * xtx_inv.diagonal()).cwiseSqrt();
  return fit;
}

// ---- random instances --------------------------------------------------------

/// Random inventory situation for one industry block of n inputs by n users:
/// requirements with zeros mixed in, every rating class possible, stocks that
/// range from empty to far above any plausible need.
inline prodnet::InputState random_input_state(Eigen::Index n,
                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  prodnet::InputState st;
  st.a = Mat::Zero(n, n);
  st.s = Mat::Zero(n, n);
  st.criticality = Mat::Zero(n, n);
  st.xcap0 = Vec(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    st.xcap0(i) = 5.0 + 195.0 * unif(rng);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (unif(rng) < 0.3) continue;  // not an input
      st.a(j, i) = 0.02 + unif(rng);
      const double r = unif(rng);
      st.criticality(j, i) = r < 0.4 ? 1.0 : (r < 0.7 ? 0.5 : 0.0);
      // Stocks from starved to overstuffed relative to capacity needs.
      st.s(j, i) = st.a(j, i) * st.xcap0(i) * 2.0 * unif(rng) * unif(rng) * 3.0;
    }
  }
  return st;
}

/// Random but well-formed shock schedule: an optional lockdown window with
/// per-day supply and demand shocks, final-demand factors dipping below one.
inline prodnet::ShockSchedule random_schedule(Eigen::Index n, int horizon,
                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> start_dist(0, std::max(horizon / 3, 1));
  prodnet::ShockSchedule s = prodnet::baseline_schedule(horizon, n);
  const int ls = start_dist(rng);
  std::uniform_int_distribution<int> end_dist(ls + 1, horizon);
  const int le = end_dist(rng);
  s.lockdown_start_day = ls;
  for (int t = 0; t < horizon; ++t) {
    if (t < ls) continue;
    s.phase[static_cast<std::size_t>(t)] =
        t < le ? prodnet::Phase::Lockdown : prodnet::Phase::Post;
  }
  for (int t = ls; t < horizon; ++t) {
    const double fade = t < le ? 1.0 : std::max(0.0, 1.0 - 0.05 * (t - le));
    for (Eigen::Index i = 0; i < n; ++i) {
      s.eps_s(t, i) = fade * 0.9 * unif(rng);
      s.eps_d(t, i) = fade * 0.6 * unif(rng);
      s.row_factor(t, i) = 1.0 - fade * 0.4 * unif(rng);
    }
    for (int k = 0; k < prodnet::kFdCategoryCount; ++k)
      s.f_factor(t, k) = 1.0 - fade * 0.5 * unif(rng);
  }
  s.validate();
  return s;
}

}  // namespace support
