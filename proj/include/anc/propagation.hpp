#pragma once

#include <Eigen/Dense>

#include <vector>

#include "anc/network.hpp"

namespace anc {

// Math-to-code note on units: every second-order statistic in this module is
// kept in absolute watts. The noise covariance C at a layer's inputs includes
// the locally injected noise, so C_ii >= sigma^2 always. The modified-gain SNR
// expression uses dimensionless effective gains, whose destination noise is
// sigma^2 * (1 + sum h_lj^2); the covariance route carries the same quantity
// as C_dest directly. Normalized covariances E(z_i z_j)/sigma^2 are formed on
// demand where a formula needs them, never stored.

/// Exact second-order statistics at the inputs of one relay layer: the
/// received signal at node i is s_i * x_s plus a zero-mean noise z_i with
/// covariance C. The noises of a layer are correlated (they share forwarded
/// upstream noise) except at layer 1.
struct LayerState {
  int layer = 1;      // 1-based layer index
  Eigen::VectorXd s;  // signal coefficients, length n_layer
  Eigen::MatrixXd C;  // noise covariance at the layer inputs, watts
};

/// Effective end-to-end gains for a fixed scaling vector: source_gain
/// aggregates every source->destination path (link gains times intermediate
/// scaling factors); noise_gains[l-1][j] does the same for the noise injected
/// at node (l,j), including that node's own factor.
struct ModifiedGains {
  double source_gain = 0.0;
  std::vector<Eigen::VectorXd> noise_gains;
};

/// Statistics at layer 1: s_i = h_{si}, C = sigma^2 * I.
LayerState initial_state(const LayeredNetwork& net);

/// One-hop update. With H the gain matrix from state.layer to the next layer
/// and B = diag(beta_l): s' = H^T B s, C' = H^T B C B H + sigma^2 I.
LayerState propagate(const LayerState& state, const Eigen::VectorXd& beta_l,
                     const LayeredNetwork& net);

/// Upper bounds beta_{i,max} = sqrt(P_i / (s_i^2 P_s + C_ii)). Strictly
/// positive: the denominator is at least sigma^2.
Eigen::VectorXd beta_max(const LayerState& state, const LayeredNetwork& net);

/// Layer-sequential dynamic program over the line graph; never enumerates
/// paths.
ModifiedGains modified_gains(const LayeredNetwork& net, const ScalingVector& beta);

/// Destination SNR via the covariance recursion (source of truth). In debug
/// builds, cross-checked against the modified-gains route to 1e-9 relative.
double snr_destination(const LayeredNetwork& net, const ScalingVector& beta);

/// Destination SNR via modified gains: (P_s/sigma^2) h_s^2 / (1 + sum h_lj^2).
double snr_via_modified_gains(const LayeredNetwork& net, const ScalingVector& beta);

/// Per-node received SNR s_i^2 P_s / C_ii.
Eigen::VectorXd received_snrs(const LayerState& state, double source_power);

/// Statistics at the destination input (a 1-node layer L+1).
LayerState final_state(const LayeredNetwork& net, const ScalingVector& beta);

}  // namespace anc
