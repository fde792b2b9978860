#include "anc/bounds.hpp"

#include <cmath>

#include "anc/greedy.hpp"
#include "anc/propagation.hpp"

namespace anc {

double rate_bits(double snr) { return 0.5 * std::log2(1.0 + snr); }

ScalingVector all_max_beta(const LayeredNetwork& net) {
  ScalingVector beta;
  LayerState state = initial_state(net);
  for (int l = 1; l <= net.num_layers(); ++l) {
    beta.layers.push_back(beta_max(state, net));
    if (l < net.num_layers()) state = propagate(state, beta.layers.back(), net);
  }
  return beta;
}

double mac_upper_bound(const LayeredNetwork& net) {
  const int L = net.num_layers();
  const Eigen::VectorXd h_t = net.gains[L].col(0);
  const Eigen::VectorXd& P = net.relay_powers[L - 1];
  double amplitude = 0.0;
  for (int i = 0; i < h_t.size(); ++i) amplitude += std::sqrt(P[i]) * std::abs(h_t[i]);
  return rate_bits(amplitude * amplitude / net.noise_var);
}

RateReport make_report(const LayeredNetwork& net) {
  RateReport rep;
  rep.source_power = net.source_power;
  auto [beta, trace] = greedy_scaling(net);
  rep.snr = snr_destination(net, beta);
  rep.rate_bits = rate_bits(rep.snr);
  rep.baseline_rate = rate_bits(snr_destination(net, all_max_beta(net)));
  rep.mac_bound = mac_upper_bound(net);
  rep.gap_to_bound = rep.mac_bound - rep.rate_bits;
  return rep;
}

}  // namespace anc
