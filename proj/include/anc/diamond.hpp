#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "anc/network.hpp"

namespace anc {

/// Thrown when every saturation hyperplane of a solve is degenerate (the
/// pinned-set signal term is identically zero on all of them).
class DegenerateHyperplaneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative slack absorbed when comparing a recomputed factor against its
/// upper bound; strict comparison on floats can oscillate at the boundary.
inline constexpr double kSaturationSlack = 1e-12;

/// Solution of one saturation hyperplane beta_k = beta_{k,max}: the pinned
/// node, the saturated set it grew into, the full scaling vector and its SNR.
/// Nodes in `zeroed` were clamped to 0 (negative stationary value, or a zero
/// gain toward the target) and are excluded from the saturated-set sums.
struct HyperplaneCandidate {
  int pinned = 0;
  std::vector<int> saturated;  // includes pinned, ascending
  std::vector<int> zeroed;     // ascending
  Eigen::VectorXd beta;
  double snr = 0.0;
  int iterations = 0;   // saturation rounds; always <= N
  bool degenerate = false;
};

struct DiamondSolution {
  ScalingVector beta;
  double snr = 0.0;
  int pinned = 0;  // k* of the winning hyperplane, 0-based
  std::vector<HyperplaneCandidate> candidates;
};

/// Saturation iteration on the hyperplane beta_k = beta_{k,max} of an
/// N-relay diamond (L = 1): unsaturated factors are recomputed from the
/// stationarity formula with sums over the saturated set, any factor meeting
/// its bound is moved into the set, until stable. k is 0-based.
HyperplaneCandidate hyperplane_solve(const LayeredNetwork& net, int k);

/// Exact diamond optimum: best hyperplane candidate over k = 1..N, ties
/// broken toward the smallest k.
DiamondSolution solve_diamond(const LayeredNetwork& net);

}  // namespace anc
