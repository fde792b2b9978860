#include <doctest.h>

#include <random>

#include "anc/bounds.hpp"
#include "anc/diamond.hpp"
#include "anc/propagation.hpp"
#include "support.hpp"

using namespace anc;

TEST_CASE("rate in bits") {
  CHECK(rate_bits(0.0) == 0.0);
  CHECK(rate_bits(1.0) == doctest::Approx(0.5));
  CHECK(rate_bits(3.0) == doctest::Approx(1.0));
}

TEST_CASE("all-max scaling") {
  std::mt19937_64 rng(51);

  SUBCASE("diamond closed form") {
    LayeredNetwork net = testsupport::random_diamond(rng, 3);
    ScalingVector beta = all_max_beta(net);
    for (int i = 0; i < 3; ++i) {
      double h = net.gains[0](0, i);
      double expected =
          std::sqrt(net.relay_powers[0][i] / (h * h * net.source_power + net.noise_var));
      CHECK(beta.layers[0][i] == doctest::Approx(expected).epsilon(1e-14));
    }
    CHECK(validate_scaling(net, beta).ok);
  }

  SUBCASE("single-relay chain equals the exact solve") {
    LayeredNetwork net = testsupport::random_diamond(rng, 1);
    CHECK(all_max_beta(net).layers[0][0] ==
          doctest::Approx(solve_diamond(net).beta.layers[0][0]).epsilon(1e-14));
  }

  SUBCASE("later layers use the committed earlier maxima") {
    LayeredNetwork net = testsupport::random_network(rng, {2, 2});
    ScalingVector beta = all_max_beta(net);
    LayerState st = propagate(initial_state(net), beta.layers[0], net);
    CHECK(beta.layers[1] == beta_max(st, net));
    CHECK(validate_scaling(net, beta).ok);
  }
}

TEST_CASE("MAC cut bound") {
  LayeredNetwork one;
  one.layer_sizes = {1};
  one.gains = {Eigen::MatrixXd{{1.0}}, Eigen::MatrixXd{{1.0}}};
  one.relay_powers = {Eigen::VectorXd::Constant(1, 1.0)};
  one.source_power = 1.0;
  one.noise_var = 1.0;
  CHECK(mac_upper_bound(one) == doctest::Approx(0.5));

  SUBCASE("two cooperating last-layer nodes") {
    LayeredNetwork net;
    net.layer_sizes = {2, 2};
    net.gains = {Eigen::MatrixXd{{10.0, 10.0}},
                 Eigen::MatrixXd{{10.0, 2.0}, {10.0, 2.0}},
                 Eigen::MatrixXd{{10.0}, {10.0}}};
    net.relay_powers = {Eigen::VectorXd::Constant(2, 10.0), Eigen::VectorXd::Constant(2, 10.0)};
    net.source_power = 100.0;
    net.noise_var = 1.0;
    // (2 sqrt(10) * 10)^2 = 4000
    CHECK(mac_upper_bound(net) == doctest::Approx(0.5 * std::log2(4001.0)).epsilon(1e-12));

    // Permuting last-layer nodes leaves the bound unchanged.
    LayeredNetwork swapped = net;
    swapped.gains[1].col(0).swap(swapped.gains[1].col(1));
    swapped.gains[2].row(0).swap(swapped.gains[2].row(1));
    swapped.relay_powers[1].reverseInPlace();
    CHECK(mac_upper_bound(swapped) == doctest::Approx(mac_upper_bound(net)).epsilon(1e-14));

    // Doubling all last-layer powers adds at most half a bit.
    LayeredNetwork doubled = net;
    doubled.relay_powers[1] *= 2.0;
    CHECK(mac_upper_bound(doubled) - mac_upper_bound(net) <= 0.5 + 1e-12);
    CHECK(mac_upper_bound(doubled) > mac_upper_bound(net));
  }
}

TEST_CASE("report invariants on random networks") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 15; ++trial) {
    int L = 1 + static_cast<int>(rng() % 2);
    std::vector<int> shape;
    for (int l = 0; l < L; ++l) shape.push_back(1 + static_cast<int>(rng() % 3));
    LayeredNetwork net = testsupport::random_network(rng, shape);
    RateReport rep = make_report(net);
    CHECK(rep.rate_bits >= 0.0);
    CHECK(rep.rate_bits <= rep.mac_bound + 1e-9);
    CHECK(rep.baseline_rate >= 0.0);
    CHECK(rep.gap_to_bound == doctest::Approx(rep.mac_bound - rep.rate_bits));
  }
}
