#pragma once

#include <Eigen/Core>

namespace gibo {

/// Maximum supported Sobol dimension (extent of the embedded direction-number
/// table).
inline constexpr int kSobolMaxDim = 36;

/// First `n` points of the d-dimensional Sobol sequence in [0,1)^d, Gray-code
/// order, with the all-zeros leading point skipped. Direction numbers follow
/// the Joe-Kuo construction, fixed at compile time so point i of dimension d
/// is identical across runs and platforms. Row i of the result is point i.
Eigen::MatrixXd sobol_points(int n, int d);

}  // namespace gibo
