#include "anc/network.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

#include "anc/propagation.hpp"

namespace anc {

using nlohmann::json;

int LayeredNetwork::total_relays() const {
  int m = 0;
  for (int n : layer_sizes) m += n;
  return m;
}

bool LayeredNetwork::operator==(const LayeredNetwork& other) const {
  if (layer_sizes != other.layer_sizes) return false;
  if (source_power != other.source_power || noise_var != other.noise_var) return false;
  if (gains.size() != other.gains.size()) return false;
  for (size_t i = 0; i < gains.size(); ++i)
    if (gains[i] != other.gains[i]) return false;
  if (relay_powers.size() != other.relay_powers.size()) return false;
  for (size_t i = 0; i < relay_powers.size(); ++i)
    if (relay_powers[i] != other.relay_powers[i]) return false;
  return true;
}

bool ScalingVector::operator==(const ScalingVector& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (size_t i = 0; i < layers.size(); ++i)
    if (layers[i] != other.layers[i]) return false;
  return true;
}

namespace {

double require_finite_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ValidationError("schema violation: " + what + " must be a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError("schema violation: " + what + " must be finite");
  return v;
}

Eigen::MatrixXd parse_matrix(const json& j, int rows, int cols, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw ValidationError("non-layered link: " + what + " must have " + std::to_string(rows) +
                          " rows");
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ValidationError("non-layered link: " + what + " row " + std::to_string(r) +
                            " must have " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c)
      m(r, c) = require_finite_number(row[c], what + "[" + std::to_string(r) + "][" +
                                                  std::to_string(c) + "]");
  }
  return m;
}

}  // namespace

LayeredNetwork parse_network(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("schema violation: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("schema violation: document must be an object");
  for (const char* key : {"layers", "gains", "relay_powers", "source_power", "noise_var"})
    if (!doc.contains(key))
      throw ValidationError(std::string("schema violation: missing field '") + key + "'");

  LayeredNetwork net;
  const json& layers = doc["layers"];
  if (!layers.is_array() || layers.empty())
    throw ValidationError("schema violation: 'layers' must be a nonempty array");
  for (const json& n : layers) {
    if (!n.is_number_integer() || n.get<int>() < 1)
      throw ValidationError("schema violation: layer sizes must be positive integers");
    net.layer_sizes.push_back(n.get<int>());
  }
  const int L = net.num_layers();

  const json& gains = doc["gains"];
  if (!gains.is_array() || static_cast<int>(gains.size()) != L + 1)
    throw ValidationError("non-layered link: 'gains' must hold exactly L+1 = " +
                          std::to_string(L + 1) + " consecutive-layer matrices");
  for (int l = 0; l <= L; ++l) {
    int rows = (l == 0) ? 1 : net.layer_sizes[l - 1];
    int cols = (l == L) ? 1 : net.layer_sizes[l];
    net.gains.push_back(parse_matrix(gains[l], rows, cols, "gains[" + std::to_string(l) + "]"));
  }

  const json& powers = doc["relay_powers"];
  if (!powers.is_array() || static_cast<int>(powers.size()) != L)
    throw ValidationError("schema violation: 'relay_powers' must hold one array per relay layer");
  for (int l = 0; l < L; ++l) {
    const json& p = powers[l];
    if (!p.is_array() || static_cast<int>(p.size()) != net.layer_sizes[l])
      throw ValidationError("schema violation: relay_powers[" + std::to_string(l) +
                            "] size mismatch");
    Eigen::VectorXd v(net.layer_sizes[l]);
    for (int i = 0; i < net.layer_sizes[l]; ++i)
      v[i] = require_finite_number(p[i], "relay_powers");
    net.relay_powers.push_back(v);
  }

  net.source_power = require_finite_number(doc["source_power"], "source_power");
  net.noise_var = require_finite_number(doc["noise_var"], "noise_var");

  validate_network(net);
  return net;
}

std::string serialize_network(const LayeredNetwork& net) {
  json doc;
  doc["layers"] = net.layer_sizes;
  json gains = json::array();
  for (const Eigen::MatrixXd& g : net.gains) {
    json m = json::array();
    for (int r = 0; r < g.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < g.cols(); ++c) row.push_back(g(r, c));
      m.push_back(row);
    }
    gains.push_back(m);
  }
  doc["gains"] = gains;
  json powers = json::array();
  for (const Eigen::VectorXd& p : net.relay_powers) {
    json v = json::array();
    for (int i = 0; i < p.size(); ++i) v.push_back(p[i]);
    powers.push_back(v);
  }
  doc["relay_powers"] = powers;
  doc["source_power"] = net.source_power;
  doc["noise_var"] = net.noise_var;
  return doc.dump(2);
}

void validate_network(const LayeredNetwork& net) {
  const int L = net.num_layers();
  if (L < 1) throw ValidationError("network must have at least one relay layer");
  if (!(net.source_power > 0.0)) throw ValidationError("source_power must be > 0");
  if (!(net.noise_var > 0.0)) throw ValidationError("noise_var must be > 0");
  if (static_cast<int>(net.gains.size()) != L + 1 ||
      static_cast<int>(net.relay_powers.size()) != L)
    throw ValidationError("dimension mismatch in gains or relay_powers");
  for (int l = 0; l <= L; ++l) {
    int rows = (l == 0) ? 1 : net.layer_sizes[l - 1];
    int cols = (l == L) ? 1 : net.layer_sizes[l];
    if (net.gains[l].rows() != rows || net.gains[l].cols() != cols)
      throw ValidationError("non-layered link: gains[" + std::to_string(l) +
                            "] has wrong dimensions");
  }
  for (int l = 1; l <= L; ++l) {
    for (int i = 0; i < net.layer_sizes[l - 1]; ++i) {
      if (!(net.relay_powers[l - 1][i] > 0.0))
        throw ValidationError("relay power must be > 0 at layer " + std::to_string(l) + " node " +
                              std::to_string(i));
      bool has_in = net.gains[l - 1].col(i).cwiseAbs().maxCoeff() > 0.0;
      bool has_out = net.gains[l].row(i).cwiseAbs().maxCoeff() > 0.0;
      if (!has_in || !has_out)
        throw ValidationError("isolated relay at layer " + std::to_string(l) + " node " +
                              std::to_string(i) + (has_in ? " (no outgoing link)"
                                                          : " (no incoming link)"));
    }
  }
}

ScalingCheck validate_scaling(const LayeredNetwork& net, const ScalingVector& beta) {
  const int L = net.num_layers();
  if (beta.num_layers() != L)
    throw ValidationError("dimension mismatch: scaling vector has wrong layer count");
  for (int l = 1; l <= L; ++l)
    if (beta.layers[l - 1].size() != net.layer_sizes[l - 1])
      throw ValidationError("dimension mismatch: scaling vector layer " + std::to_string(l));

  LayerState state = initial_state(net);
  for (int l = 1; l <= L; ++l) {
    Eigen::VectorXd bound = beta_max(state, net);
    for (int i = 0; i < net.layer_sizes[l - 1]; ++i) {
      double b = beta.layers[l - 1][i];
      if (b < 0.0) return {false, l, i, "negative scaling factor"};
      if (b > bound[i]) return {false, l, i, "scaling factor exceeds beta_max"};
    }
    if (l < L) state = propagate(state, beta.layers[l - 1], net);
  }
  return {};
}

LayeredNetwork with_source_power(const LayeredNetwork& net, double source_power) {
  if (!(source_power > 0.0) || !std::isfinite(source_power))
    throw ValidationError("source_power must be > 0 and finite");
  LayeredNetwork out = net;
  out.source_power = source_power;
  return out;
}

}  // namespace anc
