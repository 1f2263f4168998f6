#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <vector>

namespace prodnet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Upper bound on feasible output imposed by input stocks. An industry whose
// relevant input set is empty is unconstrained; that case is carried as an
// empty optional, never as a floating-point infinity.
using InputLimit = std::optional<double>;

inline double clamp_limit(double value, const InputLimit& lim) {
  return lim ? std::min(value, *lim) : value;
}

// Convention used for every (input, industry) matrix in the library:
// entry (j, i) refers to input good j held, ordered or used by industry i.
// Row j of an orders or deliveries matrix therefore belongs to supplier j.

}  // namespace prodnet
