#include "anc/oracle.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "anc/propagation.hpp"

namespace anc {

namespace {

void check_guard(int resolution, int free_coords) {
  if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  double points = std::pow(static_cast<double>(resolution + 1), free_coords);
  if (points > kGridPointGuard)
    throw GridGuardError("grid size " + std::to_string(points) + " points exceeds guard of " +
                         std::to_string(kGridPointGuard) + " (free coordinates: " +
                         std::to_string(free_coords) + ", resolution: " +
                         std::to_string(resolution) + ")");
}

double grid_value(double bound, int step, int resolution) {
  return step == resolution ? bound : bound * step / resolution;
}

// Enumerates the factors of one subnet (last layer toward a single target)
// with incremental signal/noise accumulation; the quadratic noise form makes
// a per-point evaluation O(1) after the per-node cross term.
class SubnetEnumerator {
 public:
  SubnetEnumerator(const SubnetProblem& prob, int resolution, const std::vector<char>& pinned)
      : prob_(prob),
        resolution_(resolution),
        pinned_(pinned),
        bmax_(subnet_beta_max(prob)),
        w_(Eigen::VectorXd::Zero(prob.size())),
        beta_(Eigen::VectorXd::Zero(prob.size())) {}

  // Calls on_best(beta) whenever a strictly better point is found.
  template <typename Fn>
  void run(double& best_snr, Fn&& on_best) {
    best_snr_ = &best_snr;
    on_best_ = [&](const Eigen::VectorXd& b) { on_best(b); };
    recurse(0, 0.0, prob_.noise_var);
  }

 private:
  void recurse(int i, double signal, double noise) {
    if (i == prob_.size()) {
      double snr = prob_.source_power * signal * signal / noise;
      if (snr > *best_snr_) {
        *best_snr_ = snr;
        on_best_(beta_);
      }
      return;
    }
    double cross = 0.0;
    for (int j = 0; j < i; ++j) cross += w_[j] * prob_.C(i, j);
    const int first = pinned_[i] ? resolution_ : 0;
    for (int g = first; g <= resolution_; ++g) {
      double b = grid_value(bmax_[i], g, resolution_);
      double wi = b * prob_.target_gains[i];
      beta_[i] = b;
      w_[i] = wi;
      recurse(i + 1, signal + prob_.s[i] * wi,
              noise + 2.0 * wi * cross + wi * wi * prob_.C(i, i));
    }
  }

  const SubnetProblem& prob_;
  int resolution_;
  std::vector<char> pinned_;
  Eigen::VectorXd bmax_;
  Eigen::VectorXd w_;
  Eigen::VectorXd beta_;
  double* best_snr_ = nullptr;
  std::function<void(const Eigen::VectorXd&)> on_best_;
};

class NetworkSearcher {
 public:
  NetworkSearcher(const LayeredNetwork& net, int resolution,
                  const std::vector<std::pair<int, int>>& pinned)
      : net_(net), resolution_(resolution) {
    pinned_.resize(net.num_layers());
    int free_coords = 0;
    for (int l = 1; l <= net.num_layers(); ++l) {
      pinned_[l - 1].assign(net.layer_sizes[l - 1], 0);
      free_coords += net.layer_sizes[l - 1];
    }
    for (auto [l, i] : pinned) {
      if (l < 1 || l > net.num_layers() || i < 0 || i >= net.layer_sizes[l - 1])
        throw std::out_of_range("grid_search: pinned coordinate out of range");
      if (!pinned_[l - 1][i]) {
        pinned_[l - 1][i] = 1;
        --free_coords;
      }
    }
    check_guard(resolution, free_coords);
    for (int n : net.layer_sizes) current_.layers.push_back(Eigen::VectorXd::Zero(n));
  }

  OracleResult run() {
    best_snr_ = -1.0;
    layer_rec(initial_state(net_), 1);

    OracleResult res;
    res.beta = best_;
    res.resolution = resolution_;
    res.snr = snr_destination(net_, best_);
    // Saturation flags against the recomputed sequential bounds.
    LayerState state = initial_state(net_);
    for (int l = 1; l <= net_.num_layers(); ++l) {
      Eigen::VectorXd bm = beta_max(state, net_);
      std::vector<char> flags(net_.layer_sizes[l - 1], 0);
      for (int i = 0; i < bm.size(); ++i)
        flags[i] = bm[i] - best_.layers[l - 1][i] <= bm[i] / resolution_ * (1.0 + 1e-9);
      res.saturated.push_back(flags);
      if (l < net_.num_layers()) state = propagate(state, best_.layers[l - 1], net_);
    }
    return res;
  }

 private:
  void layer_rec(const LayerState& state, int l) {
    if (l == net_.num_layers()) {
      SubnetProblem prob = make_subnet(state, net_, 0);
      SubnetEnumerator enumerator(prob, resolution_, pinned_[l - 1]);
      enumerator.run(best_snr_, [&](const Eigen::VectorXd& b) {
        current_.layers[l - 1] = b;
        best_ = current_;
      });
      return;
    }
    Eigen::VectorXd bm = beta_max(state, net_);
    node_rec(state, l, 0, bm);
  }

  void node_rec(const LayerState& state, int l, int i, const Eigen::VectorXd& bm) {
    if (i == net_.layer_sizes[l - 1]) {
      layer_rec(propagate(state, current_.layers[l - 1], net_), l + 1);
      return;
    }
    const int first = pinned_[l - 1][i] ? resolution_ : 0;
    for (int g = first; g <= resolution_; ++g) {
      current_.layers[l - 1][i] = grid_value(bm[i], g, resolution_);
      node_rec(state, l, i + 1, bm);
    }
  }

  const LayeredNetwork& net_;
  int resolution_;
  std::vector<std::vector<char>> pinned_;
  ScalingVector current_;
  ScalingVector best_;
  double best_snr_ = -1.0;
};

}  // namespace

OracleResult grid_search(const LayeredNetwork& net, int resolution,
                         const std::vector<std::pair<int, int>>& pinned) {
  return NetworkSearcher(net, resolution, pinned).run();
}

SubnetOracleResult grid_search_subnet(const SubnetProblem& prob, int resolution,
                                      const std::vector<int>& pinned) {
  std::vector<char> pin(prob.size(), 0);
  int free_coords = prob.size();
  for (int i : pinned) {
    if (i < 0 || i >= prob.size())
      throw std::out_of_range("grid_search_subnet: pinned coordinate out of range");
    if (!pin[i]) {
      pin[i] = 1;
      --free_coords;
    }
  }
  check_guard(resolution, free_coords);

  SubnetOracleResult res;
  double best_snr = -1.0;
  SubnetEnumerator enumerator(prob, resolution, pin);
  enumerator.run(best_snr, [&](const Eigen::VectorXd& b) { res.beta = b; });
  res.snr = subnet_snr(prob, res.beta);

  Eigen::VectorXd bm = subnet_beta_max(prob);
  res.saturated.assign(prob.size(), 0);
  for (int i = 0; i < prob.size(); ++i)
    res.saturated[i] = bm[i] - res.beta[i] <= bm[i] / resolution * (1.0 + 1e-9);
  return res;
}

}  // namespace anc
