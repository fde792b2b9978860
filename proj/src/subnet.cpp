#include "anc/subnet.hpp"

#include <cmath>

namespace anc {

namespace {

enum class NodeStatus { Free, Saturated, Zeroed };

void collect(const std::vector<NodeStatus>& status, HyperplaneCandidate& cand) {
  for (int i = 0; i < static_cast<int>(status.size()); ++i) {
    if (status[i] == NodeStatus::Saturated) cand.saturated.push_back(i);
    if (status[i] == NodeStatus::Zeroed) cand.zeroed.push_back(i);
  }
}

// Solve the free-block stationarity system on one face of the box: nodes in
// `sat` sit at their bounds, nodes in `zero` at 0, nodes in `interior` solve
//   w_I = C_II^{-1} (lambda s_I - C_IS w_S),
//   lambda = (sigma^2 + q - rho) / (A - mu),
// where w_i = beta_i h_i, A = s_S^T w_S, q = w_S^T C_SS w_S and mu, rho are
// the couplings s_I^T C_II^{-1} C_IS w_S and (C_IS w_S)^T C_II^{-1} C_IS w_S.
// Returns false when the face has no usable stationary point or the solution
// leaves the box.
bool solve_face(const SubnetProblem& prob, const Eigen::VectorXd& bmax,
                const std::vector<int>& sat, const std::vector<int>& interior,
                Eigen::VectorXd& beta) {
  const Eigen::VectorXd& s = prob.s;
  const Eigen::VectorXd& h = prob.target_gains;

  beta.setZero(prob.size());
  double signal_sat = 0.0, q_sat = 0.0;
  for (int j : sat) {
    double wj = bmax[j] * h[j];
    beta[j] = bmax[j];
    signal_sat += s[j] * wj;
    for (int j2 : sat) q_sat += wj * bmax[j2] * h[j2] * prob.C(j, j2);
  }
  if (interior.empty()) return true;
  if (signal_sat == 0.0) return false;

  const int F = static_cast<int>(interior.size());
  Eigen::MatrixXd C_ff(F, F);
  Eigen::VectorXd s_f(F), coupling(F);
  for (int a = 0; a < F; ++a) {
    s_f[a] = s[interior[a]];
    double c = 0.0;
    for (int j : sat) c += bmax[j] * h[j] * prob.C(interior[a], j);
    coupling[a] = c;
    for (int b = 0; b < F; ++b) C_ff(a, b) = prob.C(interior[a], interior[b]);
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(C_ff);
  if (ldlt.info() != Eigen::Success) return false;
  Eigen::VectorXd u = ldlt.solve(s_f);
  Eigen::VectorXd v = ldlt.solve(coupling);
  double lambda_den = signal_sat - s_f.dot(v);
  if (lambda_den == 0.0) return false;
  double lambda = (prob.noise_var + q_sat - coupling.dot(v)) / lambda_den;

  for (int a = 0; a < F; ++a) {
    int i = interior[a];
    double b = (lambda * u[a] - v[a]) / h[i];
    if (!(b > 0.0 && b < bmax[i] * (1.0 - kSaturationSlack))) return false;
    beta[i] = b;
  }
  return true;
}

// The saturation loop is exact for diagonal C but can over-commit a node to
// its bound when the forwarded noises are correlated. For moderate layer
// widths, enumerate every interior/saturated/zeroed assignment of the free
// nodes and keep the best feasible face solution.
constexpr int kMaxEnumeratedFaces = 200000;

void refine_by_face_enumeration(const SubnetProblem& prob, int k,
                                const Eigen::VectorXd& bmax, HyperplaneCandidate& cand) {
  const int N = prob.size();
  std::vector<int> positions;
  for (int i = 0; i < N; ++i)
    if (i != k && prob.target_gains[i] != 0.0) positions.push_back(i);

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
    std::vector<int> sat = {k}, interior;
    for (int p = 0; p < P; ++p) {
      if (assign[p] == 0) interior.push_back(positions[p]);
      if (assign[p] == 1) sat.push_back(positions[p]);
    }
    if (!solve_face(prob, bmax, sat, interior, beta)) continue;
    double snr = subnet_snr(prob, beta);
    if (snr > cand.snr * (1.0 + kSaturationSlack)) {
      cand.beta = beta;
      cand.snr = snr;
      cand.saturated.clear();
      cand.zeroed.clear();
      std::vector<bool> is_sat(N, false);
      for (int j : sat) is_sat[j] = true;
      for (int i = 0; i < N; ++i) {
        if (is_sat[i]) cand.saturated.push_back(i);
        else if (beta[i] == 0.0) cand.zeroed.push_back(i);
      }
    }
  }
}

}  // namespace

SubnetProblem make_subnet(const LayerState& state, const LayeredNetwork& net, int target) {
  const Eigen::MatrixXd& H = net.gains[state.layer];
  if (target < 0 || target >= H.cols()) throw std::out_of_range("make_subnet: target index");
  SubnetProblem prob;
  prob.s = state.s;
  prob.C = state.C;
  prob.target_gains = H.col(target);
  prob.powers = net.relay_powers[state.layer - 1];
  prob.source_power = net.source_power;
  prob.noise_var = net.noise_var;
  return prob;
}

double subnet_snr(const SubnetProblem& prob, const Eigen::VectorXd& beta) {
  Eigen::VectorXd w = beta.cwiseProduct(prob.target_gains);
  double signal = prob.s.dot(w);
  double noise = prob.noise_var + w.dot(prob.C * w);
  return prob.source_power * signal * signal / noise;
}

Eigen::VectorXd subnet_beta_max(const SubnetProblem& prob) {
  Eigen::VectorXd out(prob.size());
  for (int i = 0; i < prob.size(); ++i) {
    double received = prob.s[i] * prob.s[i] * prob.source_power + prob.C(i, i);
    out[i] = std::sqrt(prob.powers[i] / received);
  }
  return out;
}

HyperplaneCandidate subnet_hyperplane_solve(const SubnetProblem& prob, int k) {
  const int N = prob.size();
  if (k < 0 || k >= N) throw std::out_of_range("subnet_hyperplane_solve: node index");

  const Eigen::VectorXd& s = prob.s;
  const Eigen::VectorXd& h = prob.target_gains;
  const Eigen::VectorXd bmax = subnet_beta_max(prob);
  const double sigma2 = prob.noise_var;

  HyperplaneCandidate cand;
  cand.pinned = k;
  cand.beta = Eigen::VectorXd::Zero(N);

  std::vector<NodeStatus> status(N, NodeStatus::Free);
  for (int i = 0; i < N; ++i)
    if (h[i] == 0.0) status[i] = NodeStatus::Zeroed;
  status[k] = NodeStatus::Saturated;
  cand.beta[k] = bmax[k];

  auto finish_degenerate = [&]() {
    cand.degenerate = true;
    for (int i = 0; i < N; ++i)
      if (status[i] == NodeStatus::Free) cand.beta[i] = 0.0;
    collect(status, cand);
    cand.snr = subnet_snr(prob, cand.beta);
    return cand;
  };

  if (h[k] == 0.0) return finish_degenerate();

  while (true) {
    // Work in the effective coordinates w_i = beta_i h_i. Stationarity of
    // (s^T w)^2 / (sigma^2 + w^T C w) in the free coordinates, with the
    // saturated block fixed at w_j = bmax_j h_j, reads (C w)_F = lambda s_F
    // with lambda = noise / signal, so the free block solves a linear system:
    //   w_F = C_FF^{-1} (lambda s_F - C_FS w_S),
    //   lambda = (sigma^2 + q - rho) / (A - mu),
    // where A = s_S^T w_S, q = w_S^T C_SS w_S, and mu, rho are the Schur-like
    // couplings s_F^T C_FF^{-1} C_FS w_S and (C_FS w_S)^T C_FF^{-1} C_FS w_S.
    // With diagonal C the couplings vanish and the update reduces to the
    // per-node diamond recomputation.
    std::vector<int> sat, free_idx;
    for (int i = 0; i < N; ++i) {
      if (status[i] == NodeStatus::Saturated) sat.push_back(i);
      if (status[i] == NodeStatus::Free) free_idx.push_back(i);
    }

    double signal_sat = 0.0, q_sat = 0.0;
    for (int j : sat) {
      double wj = bmax[j] * h[j];
      signal_sat += s[j] * wj;
      for (int j2 : sat) q_sat += wj * bmax[j2] * h[j2] * prob.C(j, j2);
    }
    if (signal_sat == 0.0) return finish_degenerate();

    ++cand.iterations;
    if (cand.iterations > N)
      throw std::logic_error("subnet_hyperplane_solve: saturation loop exceeded N rounds");

    if (free_idx.empty()) break;

    const int F = static_cast<int>(free_idx.size());
    Eigen::MatrixXd C_ff(F, F);
    Eigen::VectorXd s_f(F), coupling(F);
    for (int a = 0; a < F; ++a) {
      s_f[a] = s[free_idx[a]];
      double c = 0.0;
      for (int j : sat) c += bmax[j] * h[j] * prob.C(free_idx[a], j);
      coupling[a] = c;
      for (int b = 0; b < F; ++b) C_ff(a, b) = prob.C(free_idx[a], free_idx[b]);
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(C_ff);
    if (ldlt.info() != Eigen::Success) return finish_degenerate();
    Eigen::VectorXd u = ldlt.solve(s_f);
    Eigen::VectorXd v = ldlt.solve(coupling);
    double mu = s_f.dot(v);
    double rho = coupling.dot(v);
    double lambda_den = signal_sat - mu;
    if (lambda_den == 0.0) return finish_degenerate();
    double lambda = (sigma2 + q_sat - rho) / lambda_den;

    bool changed = false;
    for (int a = 0; a < F; ++a) {
      int i = free_idx[a];
      double b = (lambda * u[a] - v[a]) / h[i];
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
  cand.snr = subnet_snr(prob, cand.beta);
  refine_by_face_enumeration(prob, k, bmax, cand);
  return cand;
}

SubnetSolution solve_subnet(const SubnetProblem& prob) {
  const int N = prob.size();
  SubnetSolution sol;
  int best = -1;
  bool all_degenerate = true;
  for (int k = 0; k < N; ++k) {
    sol.candidates.push_back(subnet_hyperplane_solve(prob, k));
    const HyperplaneCandidate& c = sol.candidates.back();
    if (!c.degenerate) all_degenerate = false;
    if (best < 0 || c.snr > sol.candidates[best].snr) best = k;
  }
  if (all_degenerate)
    throw DegenerateHyperplaneError("solve_subnet: all hyperplanes degenerate");

  sol.pinned = best;
  sol.snr = sol.candidates[best].snr;
  sol.beta = sol.candidates[best].beta;
  return sol;
}

}  // namespace anc
