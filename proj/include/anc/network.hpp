#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace anc {

/// Thrown when a network document or a scaling vector fails validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Layered relay network: source (layer 0), L relay layers, destination
/// (layer L+1). Links exist only between consecutive layers; an absent link
/// carries gain 0. Immutable after construction.
struct LayeredNetwork {
  std::vector<int> layer_sizes;               // n_1 .. n_L
  std::vector<Eigen::MatrixXd> gains;         // L+1 matrices, gains[l] is n_l x n_{l+1}
  std::vector<Eigen::VectorXd> relay_powers;  // per layer, watts
  double source_power = 0.0;                  // P_s, watts
  double noise_var = 0.0;                     // sigma^2, watts

  int num_layers() const { return static_cast<int>(layer_sizes.size()); }
  int total_relays() const;

  bool operator==(const LayeredNetwork& other) const;
};

/// Per-relay amplification factors, grouped by layer. layers[l-1][i] is
/// beta_{li}. Feasibility is state-dependent (upper bounds depend on the
/// committed factors of earlier layers), so it is checked explicitly via
/// validate_scaling rather than on construction.
struct ScalingVector {
  std::vector<Eigen::VectorXd> layers;

  int num_layers() const { return static_cast<int>(layers.size()); }
  bool operator==(const ScalingVector& other) const;
};

struct ScalingCheck {
  bool ok = true;
  int layer = 0;  // 1-based, valid when !ok
  int node = 0;   // 0-based, valid when !ok
  std::string reason;
};

/// Parse a network from its JSON document. Throws ValidationError on schema
/// violations, non-layered link structure, nonpositive powers or noise
/// variance, and isolated relays. Gains are stored exactly as given.
LayeredNetwork parse_network(const std::string& text);

/// Inverse of parse_network; parse(serialize(net)) == net exactly.
std::string serialize_network(const LayeredNetwork& net);

/// Structural validation shared by parse_network and programmatic construction.
void validate_network(const LayeredNetwork& net);

/// Checks 0 <= beta_{li} <= beta_{li,max}, with the bounds computed
/// layer-sequentially from the committed earlier layers. Reports the first
/// violating node in layer-major order.
ScalingCheck validate_scaling(const LayeredNetwork& net, const ScalingVector& beta);

/// Copy of net with a different source power (used by power sweeps).
LayeredNetwork with_source_power(const LayeredNetwork& net, double source_power);

}  // namespace anc
