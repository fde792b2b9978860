#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>
#include <vector>

#include "anc/network.hpp"
#include "anc/subnet.hpp"

namespace anc {

/// Thrown when a requested grid would exceed the evaluation guard.
class GridGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hard cap on the number of grid points a single search may visit.
inline constexpr double kGridPointGuard = 1e8;

struct OracleResult {
  ScalingVector beta;
  double snr = 0.0;  // snr_destination(beta), recomputed exactly
  int resolution = 0;
  // Per layer/node: best beta within one grid step of its (state-dependent)
  // upper bound.
  std::vector<std::vector<char>> saturated;
};

struct SubnetOracleResult {
  Eigen::VectorXd beta;
  double snr = 0.0;
  std::vector<char> saturated;
};

/// Exhaustive maximization of the destination SNR over per-coordinate grids
/// {0, bmax/r, ..., bmax} with r steps, endpoint inclusive so the upper bound
/// itself is always a grid point. Layers are enumerated sequentially because
/// later bounds depend on earlier factors. `pinned` entries (1-based layer,
/// 0-based node) are held at their upper bound. Ties resolve to the
/// lexicographically smallest beta in layer-major order.
OracleResult grid_search(const LayeredNetwork& net, int resolution,
                         const std::vector<std::pair<int, int>>& pinned = {});

/// Same search over a single subnet problem; `pinned` holds node indices
/// fixed at their upper bound.
SubnetOracleResult grid_search_subnet(const SubnetProblem& prob, int resolution,
                                      const std::vector<int>& pinned = {});

}  // namespace anc
