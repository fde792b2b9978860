#include "anc/greedy.hpp"

#include <stdexcept>
#include <string>

namespace anc {

double product_score(const LayerState& state, double source_power) {
  Eigen::VectorXd snrs = received_snrs(state, source_power);
  double score = 1.0;
  for (int i = 0; i < snrs.size(); ++i) score *= 1.0 + snrs[i];
  return score;
}

std::pair<ScalingVector, GreedyTrace> greedy_scaling(const LayeredNetwork& net) {
  const int L = net.num_layers();
  ScalingVector beta;
  GreedyTrace trace;
  LayerState state = initial_state(net);

  for (int l = 1; l <= L; ++l) {
    const int n_next = static_cast<int>(net.gains[l].cols());
    LayerChoice choice;
    std::vector<LayerState> next_states;

    for (int j = 0; j < n_next; ++j) {
      try {
        SubnetProblem prob = make_subnet(state, net, j);
        SubnetSolution sol = solve_subnet(prob);
        choice.candidates.push_back(sol.beta);
      } catch (const DegenerateHyperplaneError& e) {
        throw DegenerateHyperplaneError(std::string(e.what()) + " (layer " + std::to_string(l) +
                                        ", target " + std::to_string(j) + ")");
      }
      next_states.push_back(propagate(state, choice.candidates.back(), net));
      choice.scores.push_back(product_score(next_states.back(), net.source_power));
    }

    choice.chosen = 0;
    for (int j = 1; j < n_next; ++j)
      if (choice.scores[j] > choice.scores[choice.chosen]) choice.chosen = j;

    state = next_states[choice.chosen];
    choice.state_after = state;
    beta.layers.push_back(choice.candidates[choice.chosen]);
    trace.layers.push_back(std::move(choice));
  }
  return {beta, trace};
}

}  // namespace anc
