// Shocks each toy industry alone and ranks them by the aggregate damage a
// month later, illustrating that size alone does not decide systemicness.

#include <algorithm>
#include <cstdio>
#include <vector>

#include "prodnet/analysis.hpp"
#include "prodnet/toy.hpp"

using namespace prodnet;

int main() {
  const Economy econ = make_toy_economy();

  const auto cells = single_shock_sweep(
      econ, {ProductionFunctionKind::Ihs2}, {ShockMode::Supply}, {0.6},
      /*window_days=*/30, Params{});

  std::vector<SingleShockCell> ranked(cells.begin(), cells.end());
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) {
              return a.output_fraction < b.output_fraction;
            });

  std::printf("60%% labor shock, one industry at a time, ihs2, day 30:\n");
  std::printf("%-10s %16s %18s\n", "industry", "size (share x0)",
              "aggregate output");
  const double total = econ.x0.sum();
  for (const auto& cell : ranked) {
    const Eigen::Index i = econ.index_of(cell.industry);
    std::printf("%-10s %15.1f%% %17.1f%%\n", cell.industry.c_str(),
                100.0 * econ.x0(i) / total, 100.0 * cell.output_fraction);
  }
  return 0;
}
