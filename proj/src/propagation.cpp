#include "anc/propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace anc {

LayerState initial_state(const LayeredNetwork& net) {
  LayerState st;
  st.layer = 1;
  st.s = net.gains[0].row(0).transpose();
  st.C = net.noise_var * Eigen::MatrixXd::Identity(net.layer_sizes[0], net.layer_sizes[0]);
  return st;
}

LayerState propagate(const LayerState& state, const Eigen::VectorXd& beta_l,
                     const LayeredNetwork& net) {
  const int L = net.num_layers();
  if (state.layer < 1 || state.layer > L) throw std::out_of_range("propagate: layer out of range");
  const Eigen::MatrixXd& H = net.gains[state.layer];
  if (beta_l.size() != H.rows() || state.s.size() != H.rows())
    throw std::invalid_argument("propagate: dimension mismatch");

  const int n_next = static_cast<int>(H.cols());
  Eigen::MatrixXd BH = beta_l.asDiagonal() * H;  // (B H), rows indexed by current layer

  LayerState next;
  next.layer = state.layer + 1;
  next.s = BH.transpose() * state.s;
  next.C = BH.transpose() * state.C * BH +
           net.noise_var * Eigen::MatrixXd::Identity(n_next, n_next);
  return next;
}

Eigen::VectorXd beta_max(const LayerState& state, const LayeredNetwork& net) {
  const Eigen::VectorXd& P = net.relay_powers[state.layer - 1];
  Eigen::VectorXd out(P.size());
  for (int i = 0; i < P.size(); ++i) {
    double received = state.s[i] * state.s[i] * net.source_power + state.C(i, i);
    out[i] = std::sqrt(P[i] / received);
  }
  return out;
}

ModifiedGains modified_gains(const LayeredNetwork& net, const ScalingVector& beta) {
  const int L = net.num_layers();
  ModifiedGains mg;
  mg.noise_gains.resize(L);

  // Forward pass: u_l[i] = aggregate gain source -> node (l,i) input.
  Eigen::VectorXd u = net.gains[0].row(0).transpose();
  for (int l = 1; l <= L; ++l)
    u = net.gains[l].transpose() * beta.layers[l - 1].cwiseProduct(u);
  mg.source_gain = u[0];

  // Backward pass: v_l[j] = aggregate gain from node (l,j) output -> destination.
  Eigen::VectorXd v = net.gains[L].col(0);
  mg.noise_gains[L - 1] = beta.layers[L - 1].cwiseProduct(v);
  for (int l = L - 1; l >= 1; --l) {
    v = net.gains[l] * beta.layers[l].cwiseProduct(v);
    mg.noise_gains[l - 1] = beta.layers[l - 1].cwiseProduct(v);
  }
  return mg;
}

LayerState final_state(const LayeredNetwork& net, const ScalingVector& beta) {
  LayerState st = initial_state(net);
  for (int l = 1; l <= net.num_layers(); ++l) st = propagate(st, beta.layers[l - 1], net);
  return st;
}

double snr_via_modified_gains(const LayeredNetwork& net, const ScalingVector& beta) {
  ModifiedGains mg = modified_gains(net, beta);
  double noise = 1.0;
  for (const Eigen::VectorXd& h : mg.noise_gains) noise += h.squaredNorm();
  return (net.source_power / net.noise_var) * mg.source_gain * mg.source_gain / noise;
}

double snr_destination(const LayeredNetwork& net, const ScalingVector& beta) {
  LayerState dest = final_state(net, beta);
  double snr = dest.s[0] * dest.s[0] * net.source_power / dest.C(0, 0);
#ifndef NDEBUG
  double alt = snr_via_modified_gains(net, beta);
  double scale = std::max({1.0, snr, alt});
  if (std::abs(snr - alt) > 1e-9 * scale)
    throw std::logic_error("snr_destination: covariance and modified-gain routes disagree");
#endif
  return snr;
}

Eigen::VectorXd received_snrs(const LayerState& state, double source_power) {
  Eigen::VectorXd out(state.s.size());
  for (int i = 0; i < state.s.size(); ++i)
    out[i] = state.s[i] * state.s[i] * source_power / state.C(i, i);
  return out;
}

}  // namespace anc
