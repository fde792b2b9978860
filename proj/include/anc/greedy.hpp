#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "anc/propagation.hpp"
#include "anc/subnet.hpp"

namespace anc {

/// Audit record of one layer's greedy choice: the per-target candidate
/// vectors, their product scores, the committed candidate and the resulting
/// next-layer statistics.
struct LayerChoice {
  std::vector<Eigen::VectorXd> candidates;  // one per next-layer node
  std::vector<double> scores;               // prod_k (1 + SNR_{l+1,k})
  int chosen = 0;                           // attains the max score, ties -> smallest
  LayerState state_after;
};

struct GreedyTrace {
  std::vector<LayerChoice> layers;
};

/// prod_i (1 + s_i^2 P_s / C_ii) over the nodes of a layer state.
double product_score(const LayerState& state, double source_power);

/// Layer-by-layer greedy scaling vector: for each layer, solve the
/// single-target subnet problem toward every next-layer node, score each
/// candidate by the product of next-layer received SNRs, commit the best.
/// For the last layer the single target is the destination, so the choice is
/// the destination-SNR-optimal subnet solve. Solver errors are annotated
/// with the layer they occurred in.
std::pair<ScalingVector, GreedyTrace> greedy_scaling(const LayeredNetwork& net);

}  // namespace anc
