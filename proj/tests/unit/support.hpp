#pragma once

// Shared fixtures for the unit and acceptance suites: seeded random network
// generators, random feasible scaling vectors, and a sample-based simulator
// of the relay chain used as an independent check of the analytic statistics.

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "anc/network.hpp"
#include "anc/propagation.hpp"

namespace anc::testsupport {

struct NetOptions {
  double gain_min = 0.5;
  double gain_max = 3.0;
  double power_min = 1.0;
  double power_max = 10.0;
  double source_power = 10.0;
  double noise_var = 1.0;
  bool mixed_sign_gains = false;
};

inline LayeredNetwork random_network(std::mt19937_64& rng, const std::vector<int>& layer_sizes,
                                     const NetOptions& opt = {}) {
  std::uniform_real_distribution<double> gain(opt.gain_min, opt.gain_max);
  std::uniform_real_distribution<double> power(opt.power_min, opt.power_max);
  std::bernoulli_distribution flip(0.5);

  LayeredNetwork net;
  net.layer_sizes = layer_sizes;
  net.source_power = opt.source_power;
  net.noise_var = opt.noise_var;
  const int L = net.num_layers();
  for (int l = 0; l <= L; ++l) {
    int rows = (l == 0) ? 1 : layer_sizes[l - 1];
    int cols = (l == L) ? 1 : layer_sizes[l];
    Eigen::MatrixXd g(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        g(r, c) = gain(rng);
        if (opt.mixed_sign_gains && flip(rng)) g(r, c) = -g(r, c);
      }
    net.gains.push_back(g);
  }
  for (int l = 0; l < L; ++l) {
    Eigen::VectorXd p(layer_sizes[l]);
    for (int i = 0; i < layer_sizes[l]; ++i) p[i] = power(rng);
    net.relay_powers.push_back(p);
  }
  validate_network(net);
  return net;
}

inline LayeredNetwork random_diamond(std::mt19937_64& rng, int relays,
                                     const NetOptions& opt = {}) {
  return random_network(rng, {relays}, opt);
}

/// Network where every node's outgoing gains are equal (the exactly solvable
/// symmetric class).
inline LayeredNetwork random_symmetric_network(std::mt19937_64& rng,
                                               const std::vector<int>& layer_sizes,
                                               const NetOptions& opt = {}) {
  LayeredNetwork net = random_network(rng, layer_sizes, opt);
  for (auto& g : net.gains)
    for (int r = 0; r < g.rows(); ++r) g.row(r).setConstant(g(r, 0));
  return net;
}

/// Random feasible scaling vector, each factor a uniform fraction of its
/// sequential upper bound.
inline ScalingVector random_feasible_beta(std::mt19937_64& rng, const LayeredNetwork& net) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ScalingVector beta;
  LayerState state = initial_state(net);
  for (int l = 1; l <= net.num_layers(); ++l) {
    Eigen::VectorXd bm = beta_max(state, net);
    Eigen::VectorXd b(bm.size());
    for (int i = 0; i < bm.size(); ++i) b[i] = unit(rng) * bm[i];
    beta.layers.push_back(b);
    if (l < net.num_layers()) state = propagate(state, b, net);
  }
  return beta;
}

/// Empirical first/second moments of the destination-layer channel outputs,
/// simulated sample by sample from the channel and scaling definitions. The
/// layered structure is ISI-free, so one source symbol plus one fresh noise
/// draw per node reproduces the steady-state statistics.
struct MomentEstimate {
  // For the tracked layer: mean and standard error of y_i * x_s (estimates
  // s_i * P_s) and of y_i * y_j (estimates s_i s_j P_s + C_ij).
  Eigen::VectorXd signal_mean, signal_se;
  Eigen::MatrixXd cross_mean, cross_se;
};

inline MomentEstimate simulate_moments(const LayeredNetwork& net, const ScalingVector& beta,
                                       int track_layer, long samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> source(0.0, std::sqrt(net.source_power));
  std::normal_distribution<double> noise(0.0, std::sqrt(net.noise_var));

  const int n = (track_layer <= net.num_layers()) ? net.layer_sizes[track_layer - 1] : 1;
  Eigen::VectorXd sig_sum = Eigen::VectorXd::Zero(n), sig_sq = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd cr_sum = Eigen::MatrixXd::Zero(n, n), cr_sq = Eigen::MatrixXd::Zero(n, n);

  for (long it = 0; it < samples; ++it) {
    double xs = source(rng);
    Eigen::VectorXd y;  // outputs at the current layer
    for (int l = 1; l <= track_layer; ++l) {
      int nl = (l <= net.num_layers()) ? net.layer_sizes[l - 1] : 1;
      Eigen::VectorXd ynew(nl);
      if (l == 1) {
        for (int i = 0; i < nl; ++i) ynew[i] = net.gains[0](0, i) * xs + noise(rng);
      } else {
        Eigen::VectorXd x = beta.layers[l - 2].cwiseProduct(y);
        ynew = net.gains[l - 1].transpose() * x;
        for (int i = 0; i < nl; ++i) ynew[i] += noise(rng);
      }
      y = ynew;
    }
    for (int i = 0; i < n; ++i) {
      double p = y[i] * xs;
      sig_sum[i] += p;
      sig_sq[i] += p * p;
      for (int j = 0; j < n; ++j) {
        double q = y[i] * y[j];
        cr_sum(i, j) += q;
        cr_sq(i, j) += q * q;
      }
    }
  }

  MomentEstimate est;
  est.signal_mean = sig_sum / samples;
  est.cross_mean = cr_sum / samples;
  est.signal_se = ((sig_sq / samples - est.signal_mean.cwiseProduct(est.signal_mean)) / samples)
                      .cwiseMax(0.0)
                      .cwiseSqrt();
  est.cross_se = ((cr_sq / samples - est.cross_mean.cwiseProduct(est.cross_mean)) / samples)
                     .cwiseMax(0.0)
                     .cwiseSqrt();
  return est;
}

}  // namespace anc::testsupport
