#include "anc/diamond.hpp"

#include <cmath>

#include "anc/propagation.hpp"

namespace anc {

namespace {

enum class NodeStatus { Free, Saturated, Zeroed };

double diamond_snr(const LayeredNetwork& net, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd h_s = net.gains[0].row(0).transpose();
  const Eigen::VectorXd h_t = net.gains[1].col(0);
  double signal = 0.0, noise = 1.0;
  for (int i = 0; i < beta.size(); ++i) {
    signal += h_s[i] * beta[i] * h_t[i];
    noise += beta[i] * beta[i] * h_t[i] * h_t[i];
  }
  return (net.source_power / net.noise_var) * signal * signal / noise;
}

void collect(const std::vector<NodeStatus>& status, HyperplaneCandidate& cand) {
  for (int i = 0; i < static_cast<int>(status.size()); ++i) {
    if (status[i] == NodeStatus::Saturated) cand.saturated.push_back(i);
    if (status[i] == NodeStatus::Zeroed) cand.zeroed.push_back(i);
  }
}

// The saturation loop can over-commit a node to its bound: a recomputed
// factor past beta_max at one round does not imply the node saturates at the
// true hyperplane optimum once further nodes pin. For moderate N, enumerate
// every interior/saturated/zeroed assignment of the free nodes; given a
// saturated set S the interior stationary values are
//   beta_i = (h_si / h_it) (1 + sum_S bmax^2 h_t^2) / (sum_S h_s bmax h_t),
// independent across interior nodes. Adopt the best feasible face if it
// strictly beats the loop's result.
constexpr int kMaxEnumeratedFaces = 200000;

void refine_by_face_enumeration(const LayeredNetwork& net, int k, const Eigen::VectorXd& h_s,
                                const Eigen::VectorXd& h_t, const Eigen::VectorXd& bmax,
                                HyperplaneCandidate& cand) {
  const int N = static_cast<int>(h_s.size());
  std::vector<int> positions;
  for (int i = 0; i < N; ++i)
    if (i != k && h_t[i] != 0.0) positions.push_back(i);

  const int P = static_cast<int>(positions.size());
  long long faces = 1;
  for (int p = 0; p < P; ++p) {
    faces *= 3;
    if (faces > kMaxEnumeratedFaces) return;
  }

  Eigen::VectorXd beta(N);
  std::vector<int> assign(P, 0);  // 0 = interior, 1 = saturated, 2 = zeroed
  for (long long code = 0; code < faces; ++code) {
    long long rest = code;
    for (int p = 0; p < P; ++p) {
      assign[p] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    beta.setZero();
    beta[k] = bmax[k];
    double numer = 1.0 + bmax[k] * bmax[k] * h_t[k] * h_t[k];
    double denom = h_s[k] * bmax[k] * h_t[k];
    std::vector<bool> is_sat(N, false);
    is_sat[k] = true;
    bool has_interior = false;
    for (int p = 0; p < P; ++p) {
      int i = positions[p];
      if (assign[p] == 0) has_interior = true;
      if (assign[p] != 1) continue;
      beta[i] = bmax[i];
      is_sat[i] = true;
      numer += bmax[i] * bmax[i] * h_t[i] * h_t[i];
      denom += h_s[i] * bmax[i] * h_t[i];
    }
    if (has_interior && denom == 0.0) continue;
    bool feasible = true;
    for (int p = 0; p < P && feasible; ++p) {
      if (assign[p] != 0) continue;
      int i = positions[p];
      double b = (h_s[i] / h_t[i]) * numer / denom;
      if (b > 0.0 && b < bmax[i] * (1.0 - kSaturationSlack))
        beta[i] = b;
      else
        feasible = false;
    }
    if (!feasible) continue;
    double snr = diamond_snr(net, beta);
    if (snr > cand.snr * (1.0 + kSaturationSlack)) {
      cand.beta = beta;
      cand.snr = snr;
      cand.saturated.clear();
      cand.zeroed.clear();
      for (int i = 0; i < N; ++i) {
        if (is_sat[i]) cand.saturated.push_back(i);
        else if (beta[i] == 0.0) cand.zeroed.push_back(i);
      }
    }
  }
}

}  // namespace

HyperplaneCandidate hyperplane_solve(const LayeredNetwork& net, int k) {
  if (net.num_layers() != 1) throw std::invalid_argument("hyperplane_solve: network is not a diamond");
  const int N = net.layer_sizes[0];
  if (k < 0 || k >= N) throw std::out_of_range("hyperplane_solve: node index");

  const Eigen::VectorXd h_s = net.gains[0].row(0).transpose();
  const Eigen::VectorXd h_t = net.gains[1].col(0);
  const Eigen::VectorXd bmax = beta_max(initial_state(net), net);

  HyperplaneCandidate cand;
  cand.pinned = k;
  cand.beta = Eigen::VectorXd::Zero(N);

  std::vector<NodeStatus> status(N, NodeStatus::Free);
  // A node with no gain toward the destination cannot contribute; its factor
  // stays 0 and it never enters the saturated-set sums.
  for (int i = 0; i < N; ++i)
    if (h_t[i] == 0.0) status[i] = NodeStatus::Zeroed;

  status[k] = NodeStatus::Saturated;
  cand.beta[k] = bmax[k];

  auto finish_degenerate = [&]() {
    cand.degenerate = true;
    for (int i = 0; i < N; ++i)
      if (status[i] == NodeStatus::Free) cand.beta[i] = 0.0;
    collect(status, cand);
    cand.snr = diamond_snr(net, cand.beta);
    return cand;
  };

  if (h_t[k] == 0.0) {
    // Pinned node unreachable from the destination: the whole hyperplane
    // signal term is zero.
    status[k] = NodeStatus::Saturated;  // keep beta_k = bmax on its hyperplane
    return finish_degenerate();
  }

  while (true) {
    double denom = 0.0, numer = 1.0;
    for (int j = 0; j < N; ++j) {
      if (status[j] != NodeStatus::Saturated) continue;
      denom += h_s[j] * bmax[j] * h_t[j];
      numer += bmax[j] * bmax[j] * h_t[j] * h_t[j];
    }
    if (denom == 0.0) return finish_degenerate();

    ++cand.iterations;
    if (cand.iterations > N)
      throw std::logic_error("hyperplane_solve: saturation loop exceeded N rounds");

    bool changed = false;
    for (int i = 0; i < N; ++i) {
      if (status[i] != NodeStatus::Free) continue;
      double b = (h_s[i] / h_t[i]) * numer / denom;
      if (b < 0.0) {
        cand.beta[i] = 0.0;
        status[i] = NodeStatus::Zeroed;
        changed = true;
      } else if (b >= bmax[i] * (1.0 - kSaturationSlack)) {
        cand.beta[i] = bmax[i];
        status[i] = NodeStatus::Saturated;
        changed = true;
      } else {
        cand.beta[i] = b;
      }
    }
    if (!changed) break;
  }

  collect(status, cand);
  cand.snr = diamond_snr(net, cand.beta);
  refine_by_face_enumeration(net, k, h_s, h_t, bmax, cand);
  return cand;
}

DiamondSolution solve_diamond(const LayeredNetwork& net) {
  if (net.num_layers() != 1) throw std::invalid_argument("solve_diamond: network is not a diamond");
  const int N = net.layer_sizes[0];

  DiamondSolution sol;
  int best = -1;
  bool all_degenerate = true;
  for (int k = 0; k < N; ++k) {
    sol.candidates.push_back(hyperplane_solve(net, k));
    const HyperplaneCandidate& c = sol.candidates.back();
    if (!c.degenerate) all_degenerate = false;
    if (best < 0 || c.snr > sol.candidates[best].snr) best = k;
  }
  if (all_degenerate)
    throw DegenerateHyperplaneError("solve_diamond: all hyperplanes degenerate");

  sol.pinned = best;
  sol.snr = sol.candidates[best].snr;
  sol.beta.layers = {sol.candidates[best].beta};
  return sol;
}

}  // namespace anc
