#pragma once

#include <Eigen/Dense>

#include <vector>

#include "anc/diamond.hpp"
#include "anc/propagation.hpp"

namespace anc {

/// One relay layer with exact input statistics (s, C) feeding a single node
/// of the next layer through the gains target_gains. Specializes to the
/// diamond problem when C = sigma^2 * I.
struct SubnetProblem {
  Eigen::VectorXd s;             // input signal coefficients
  Eigen::MatrixXd C;             // input noise covariance, watts
  Eigen::VectorXd target_gains;  // h_{it} toward the target node
  Eigen::VectorXd powers;        // per-node transmit powers
  double source_power = 0.0;
  double noise_var = 0.0;

  int size() const { return static_cast<int>(s.size()); }
};

struct SubnetSolution {
  Eigen::VectorXd beta;
  double snr = 0.0;
  int pinned = 0;
  std::vector<HyperplaneCandidate> candidates;
};

/// Problem for layer state.layer toward node `target` of the next layer.
SubnetProblem make_subnet(const LayerState& state, const LayeredNetwork& net, int target);

/// SNR at the target: P_s (sum s_i beta_i h_it)^2 / (sigma^2 + w^T C w),
/// w_i = beta_i h_it. Equals the SNR of a one-target propagate step.
double subnet_snr(const SubnetProblem& prob, const Eigen::VectorXd& beta);

/// beta_{i,max} = sqrt(P_i / (s_i^2 P_s + C_ii)).
Eigen::VectorXd subnet_beta_max(const SubnetProblem& prob);

/// Saturation iteration on the hyperplane beta_k = beta_{k,max}, with the
/// correlated-noise stationarity formula; reduces to the diamond iteration
/// when C is diagonal. k is 0-based.
HyperplaneCandidate subnet_hyperplane_solve(const SubnetProblem& prob, int k);

/// Best hyperplane candidate over k = 1..N, ties toward the smallest k.
SubnetSolution solve_subnet(const SubnetProblem& prob);

}  // namespace anc
