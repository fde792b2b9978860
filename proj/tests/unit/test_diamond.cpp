#include <doctest.h>

#include <algorithm>
#include <random>

#include "anc/diamond.hpp"
#include "anc/propagation.hpp"
#include "support.hpp"

using namespace anc;

namespace {

LayeredNetwork diamond(const Eigen::VectorXd& h_s, const Eigen::VectorXd& h_t,
                       const Eigen::VectorXd& powers, double ps, double sigma2) {
  LayeredNetwork net;
  net.layer_sizes = {static_cast<int>(h_s.size())};
  net.gains = {h_s.transpose(), h_t};
  net.relay_powers = {powers};
  net.source_power = ps;
  net.noise_var = sigma2;
  return net;
}

}  // namespace

TEST_CASE("single relay saturates") {
  LayeredNetwork net = diamond(Eigen::VectorXd::Constant(1, 2.0),
                               Eigen::VectorXd::Constant(1, 3.0),
                               Eigen::VectorXd::Constant(1, 4.0), 1.0, 1.0);
  DiamondSolution sol = solve_diamond(net);
  double bmax = std::sqrt(4.0 / (4.0 * 1.0 + 1.0));
  CHECK(sol.beta.layers[0][0] == doctest::Approx(bmax).epsilon(1e-15));
  CHECK(sol.candidates[0].saturated == std::vector<int>{0});
}

TEST_CASE("symmetric two-relay diamond saturates both nodes") {
  LayeredNetwork net = diamond(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2),
                               Eigen::VectorXd::Ones(2), 1.0, 1.0);
  HyperplaneCandidate c = hyperplane_solve(net, 0);
  // The recomputed factor for node 2 is (1 + 1/2) / sqrt(1/2) > beta_max.
  CHECK(c.saturated == std::vector<int>{0, 1});
  CHECK(c.beta[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(c.beta[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(c.snr == doctest::Approx(1.0).epsilon(1e-14));

  DiamondSolution sol = solve_diamond(net);
  CHECK(sol.snr == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sol.pinned == 0);  // tie between the two hyperplanes, smallest k wins
}

TEST_CASE("node stays unsaturated when the other side dominates") {
  // beta_max h_t = 1 for node 1 and 2.5 for node 2, so the recomputed
  // factor for node 2 ((1+u^2)/u = 2 in those units) stays below its bound.
  Eigen::VectorXd h_s = Eigen::VectorXd::Constant(2, 10.0);
  Eigen::VectorXd h_t(2);
  h_t << 2.0, 5.0;
  Eigen::VectorXd P = Eigen::VectorXd::Constant(2, 25.25);
  LayeredNetwork net = diamond(h_s, h_t, P, 1.0, 1.0);

  Eigen::VectorXd bmax = beta_max(initial_state(net), net);
  CHECK(bmax[0] == doctest::Approx(0.5).epsilon(1e-12));

  HyperplaneCandidate c = hyperplane_solve(net, 0);
  CHECK(c.saturated == std::vector<int>{0});
  double expected = (h_s[1] / h_t[1]) * (1.0 + bmax[0] * bmax[0] * h_t[0] * h_t[0]) /
                    (h_s[0] * bmax[0] * h_t[0]);
  CHECK(c.beta[1] == doctest::Approx(expected).epsilon(1e-14));
  CHECK(c.beta[1] < bmax[1]);

  DiamondSolution sol = solve_diamond(net);
  CHECK(sol.pinned == 0);
}

TEST_CASE("termination and exit shape on random diamonds") {
  std::mt19937_64 rng(21);
  testsupport::NetOptions opt;
  for (int trial = 0; trial < 200; ++trial) {
    opt.mixed_sign_gains = trial % 2 == 1;
    int N = 1 + static_cast<int>(rng() % 4);
    LayeredNetwork net = testsupport::random_diamond(rng, N, opt);
    Eigen::VectorXd bmax = beta_max(initial_state(net), net);
    for (int k = 0; k < N; ++k) {
      HyperplaneCandidate c = hyperplane_solve(net, k);
      CHECK(c.iterations <= N);
      // On halt, every remaining free factor is strictly below its bound.
      for (int i = 0; i < N; ++i) {
        bool in_sat = std::find(c.saturated.begin(), c.saturated.end(), i) != c.saturated.end();
        bool in_zero = std::find(c.zeroed.begin(), c.zeroed.end(), i) != c.zeroed.end();
        if (!in_sat && !in_zero) CHECK(c.beta[i] < bmax[i]);
      }
    }
  }
}

TEST_CASE("returned candidate is a fixed point of the recomputation formula") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    int N = 2 + static_cast<int>(rng() % 2);
    LayeredNetwork net = testsupport::random_diamond(rng, N);
    Eigen::VectorXd h_s = net.gains[0].row(0).transpose();
    Eigen::VectorXd h_t = net.gains[1].col(0);
    Eigen::VectorXd bmax = beta_max(initial_state(net), net);
    DiamondSolution sol = solve_diamond(net);
    const HyperplaneCandidate& c = sol.candidates[sol.pinned];
    double numer = 1.0, denom = 0.0;
    for (int j : c.saturated) {
      numer += bmax[j] * bmax[j] * h_t[j] * h_t[j];
      denom += h_s[j] * bmax[j] * h_t[j];
    }
    for (int i = 0; i < N; ++i) {
      bool in_sat = std::find(c.saturated.begin(), c.saturated.end(), i) != c.saturated.end();
      bool in_zero = std::find(c.zeroed.begin(), c.zeroed.end(), i) != c.zeroed.end();
      if (in_sat || in_zero) continue;
      double again = (h_s[i] / h_t[i]) * numer / denom;
      CHECK(c.beta[i] == doctest::Approx(again).epsilon(1e-10));
    }
  }
}

TEST_CASE("degenerate hyperplanes") {
  // Node 2 invisible from the source: its hyperplane has a zero signal term
  // and falls back to the saturated-set point.
  Eigen::VectorXd h_s(2), h_t(2);
  h_s << 1.0, 0.0;
  h_t << 1.0, 1.0;
  LayeredNetwork net = diamond(h_s, h_t, Eigen::VectorXd::Ones(2), 1.0, 1.0);
  HyperplaneCandidate c = hyperplane_solve(net, 1);
  CHECK(c.degenerate);
  DiamondSolution sol = solve_diamond(net);
  CHECK_FALSE(sol.candidates[sol.pinned].degenerate);

  // Both relays invisible: every hyperplane degenerates.
  LayeredNetwork dark = diamond(Eigen::VectorXd::Zero(2), h_t, Eigen::VectorXd::Ones(2), 1.0, 1.0);
  CHECK_THROWS_AS(solve_diamond(dark), DegenerateHyperplaneError);
}

TEST_CASE("solver result is deterministic") {
  std::mt19937_64 rng(23);
  LayeredNetwork net = testsupport::random_diamond(rng, 3);
  DiamondSolution a = solve_diamond(net);
  DiamondSolution b = solve_diamond(net);
  CHECK(a.beta == b.beta);
  CHECK(a.snr == b.snr);
  CHECK(a.pinned == b.pinned);
}
