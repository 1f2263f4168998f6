#pragma once

#include <random>
#include <string>
#include <vector>

#include "prodnet/economy.hpp"
#include "prodnet/types.hpp"

namespace prodnet {

/// Five-industry economy with hand-picked round numbers. Ships with the
/// repository (data/toy mirrors it in CSV form) and anchors most tests:
/// market clearing holds exactly in decimal, every criticality class
/// appears, and inventory covers range from two to six days.
inline Economy make_toy_economy() {
  Economy e;
  e.codes = {"AGR", "MFG", "ENE", "SRV", "TRD"};
  e.z0 = Mat(5, 5);
  e.z0 << 4, 30, 0, 6, 0,        // AGR
      10, 60, 10, 20, 10,        // MFG
      6, 40, 8, 16, 10,          // ENE
      8, 60, 12, 60, 30,         // SRV
      2, 30, 6, 18, 4;           // TRD
  e.c0 = Vec(5);
  e.c0 << 50, 150, 60, 300, 120;
  e.f0 = Mat(5, kFdCategoryCount);
  // npish, government, investment, export, inventory_change
  e.f0 << 2, 0, 4, 24, 0,        // AGR
      5, 10, 60, 60, 5,          // MFG
      0, 10, 0, 10, 0,           // ENE
      10, 60, 30, 28, 2,         // SRV
      3, 2, 5, 10, 0;            // TRD
  e.l0 = Vec(5);
  e.l0 << 60, 120, 80, 340, 100;
  e.x0 = Vec(5);
  e.x0 << 120, 400, 160, 600, 200;
  e.n_days = Vec(5);
  e.n_days << 4, 6, 2, 5, 3;
  e.criticality = Mat(5, 5);
  e.criticality << 1, 1, 0, 0.5, 0,  // AGR as input
      1, 1, 1, 0.5, 0.5,             // MFG
      1, 1, 1, 1, 1,                 // ENE
      0, 0, 0.5, 1, 0.5,             // SRV
      0, 0.5, 0, 0, 1;               // TRD
  return e;
}

/// Random but internally consistent economy of n industries, for property
/// tests and scale checks. Output is pinned to the row totals after
/// construction, so market clearing holds to rounding. Every industry that
/// buys anything has at least one critical input and at least one day of
/// stock cover.
inline Economy make_synthetic_economy(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Mat a = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec raw = Vec::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j)
      if (unif(rng) > 0.3) raw(j) = 0.05 + unif(rng);
    const double total = raw.sum();
    if (total <= 0.0) continue;
    const double colsum = 0.2 + 0.4 * unif(rng);
    a.col(i) = raw * (colsum / total);
  }

  Vec fd(n);
  for (Eigen::Index i = 0; i < n; ++i) fd(i) = 5.0 + 45.0 * unif(rng);
  Mat leontief = Mat::Identity(n, n) - a;
  Vec x = Eigen::FullPivLU<Mat>(leontief).solve(fd);

  Economy e;
  e.codes.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    e.codes[static_cast<std::size_t>(i)] = "I" + std::to_string(i + 1);
  e.z0 = a * x.asDiagonal();
  e.c0 = 0.55 * fd;
  e.f0 = Mat(n, kFdCategoryCount);
  e.f0.col(int(FdCategory::Npish)) = 0.05 * fd;
  e.f0.col(int(FdCategory::Government)) = 0.10 * fd;
  e.f0.col(int(FdCategory::Investment)) = 0.10 * fd;
  e.f0.col(int(FdCategory::Export)) = 0.18 * fd;
  e.f0.col(int(FdCategory::InventoryChange)) = 0.02 * fd;
  e.x0 = e.z0.rowwise().sum() + e.c0 + e.f0.rowwise().sum();
  e.l0 = 0.9 * (e.x0 - e.z0.colwise().sum().transpose()).cwiseMax(0.0);

  e.criticality = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index strongest = -1;
    double best = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (a(j, i) <= 0.0) continue;
      if (a(j, i) > best) {
        best = a(j, i);
        strongest = j;
      }
      const double u = unif(rng);
      e.criticality(j, i) = u < 0.4 ? 1.0 : (u < 0.7 ? 0.5 : 0.0);
    }
    if (strongest >= 0) e.criticality(strongest, i) = 1.0;
    e.criticality(i, i) = 1.0;
  }

  e.n_days = Vec(n);
  for (Eigen::Index i = 0; i < n; ++i) e.n_days(i) = 1.5 + 10.5 * unif(rng);
  return e;
}

}  // namespace prodnet
