// Command-line front end: load a network description, compute the greedy
// scaling vector with rates and bounds, sweep the source power, or certify
// the solvers against the brute-force grid oracle.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "anc/bounds.hpp"
#include "anc/diamond.hpp"
#include "anc/greedy.hpp"
#include "anc/network.hpp"
#include "anc/oracle.hpp"
#include "anc/propagation.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

anc::LayeredNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw anc::ValidationError("cannot open network file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return anc::parse_network(ss.str());
}

std::string beta_to_string(const anc::ScalingVector& beta) {
  std::string out;
  for (size_t l = 0; l < beta.layers.size(); ++l) {
    out += "layer " + std::to_string(l + 1) + ": [";
    for (int i = 0; i < beta.layers[l].size(); ++i) {
      if (i) out += ", ";
      out += fmt(beta.layers[l][i]);
    }
    out += "]";
    if (l + 1 < beta.layers.size()) out += "  ";
  }
  return out;
}

int cmd_rate(const std::string& net_path, double ps_override, const std::string& format) {
  anc::LayeredNetwork net = load_network(net_path);
  if (ps_override > 0.0) net = anc::with_source_power(net, ps_override);
  auto [beta, trace] = anc::greedy_scaling(net);
  anc::RateReport rep = anc::make_report(net);
  if (format == "csv") {
    std::cout << "# anc rate net=" << net_path << "\n";
    std::cout << "P_s,snr_t,greedy_rate,baseline_rate,mac_bound,gap\n";
    std::cout << fmt(rep.source_power) << "," << fmt(rep.snr) << "," << fmt(rep.rate_bits) << ","
              << fmt(rep.baseline_rate) << "," << fmt(rep.mac_bound) << ","
              << fmt(rep.gap_to_bound) << "\n";
  } else {
    std::cout << "P_s            : " << fmt(rep.source_power) << "\n";
    std::cout << "beta_low       : " << beta_to_string(beta) << "\n";
    std::cout << "SNR_t          : " << fmt(rep.snr) << "\n";
    std::cout << "rate           : " << fmt(rep.rate_bits) << " bits\n";
    std::cout << "all-max rate   : " << fmt(rep.baseline_rate) << " bits\n";
    std::cout << "MAC cut (full cooperation, destination cut): " << fmt(rep.mac_bound)
              << " bits\n";
    std::cout << "gap to bound   : " << fmt(rep.gap_to_bound) << " bits\n";
  }
  return 0;
}

int cmd_sweep(const std::string& net_path, double ps_min, double ps_max, int points) {
  if (!(ps_min > 0.0) || !(ps_max >= ps_min) || points < 2)
    throw anc::ValidationError("sweep range: need ps-min > 0, ps-max >= ps-min, points >= 2");
  anc::LayeredNetwork net = load_network(net_path);

  std::vector<std::future<anc::RateReport>> jobs;
  for (int i = 0; i < points; ++i) {
    double t = static_cast<double>(i) / (points - 1);
    double ps = std::exp(std::log(ps_min) + t * (std::log(ps_max) - std::log(ps_min)));
    jobs.push_back(std::async(std::launch::async, [&net, ps] {
      return anc::make_report(anc::with_source_power(net, ps));
    }));
  }

  std::cout << "# anc sweep net=" << net_path << " ps_min=" << fmt(ps_min)
            << " ps_max=" << fmt(ps_max) << " points=" << points << "\n";
  std::cout << "P_s,greedy_rate,baseline_rate,mac_bound,gap\n";
  for (auto& job : jobs) {
    anc::RateReport rep = job.get();
    std::cout << fmt(rep.source_power) << "," << fmt(rep.rate_bits) << ","
              << fmt(rep.baseline_rate) << "," << fmt(rep.mac_bound) << ","
              << fmt(rep.gap_to_bound) << "\n";
  }
  return 0;
}

bool is_symmetric_class(const anc::LayeredNetwork& net) {
  // Equal gains along all outgoing links of every node (source included).
  for (int l = 0; l <= net.num_layers(); ++l) {
    for (int r = 0; r < net.gains[l].rows(); ++r) {
      const auto row = net.gains[l].row(r);
      for (int c = 1; c < row.size(); ++c)
        if (row[c] != row[0]) return false;
    }
  }
  return true;
}

int cmd_verify(const std::string& net_path, int resolution, unsigned seed) {
  anc::LayeredNetwork net = load_network(net_path);
  const int relays = net.total_relays();
  bool ok = true;
  auto report = [&](const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << (pass ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    ok = ok && pass;
  };

  report("round-trip", anc::parse_network(anc::serialize_network(net)) == net);

  auto [beta_low, trace] = anc::greedy_scaling(net);
  report("greedy-feasible", anc::validate_scaling(net, beta_low).ok);

  double snr_cov = anc::snr_destination(net, beta_low);
  double snr_mg = anc::snr_via_modified_gains(net, beta_low);
  double rel = std::abs(snr_cov - snr_mg) / std::max(1.0, snr_cov);
  report("snr-route-equivalence", rel <= 1e-9, "relative difference " + fmt(rel));

  // Randomized feasible down-scalings of beta_low stay feasible.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool monotone = true;
  for (int trial = 0; trial < 20; ++trial) {
    anc::ScalingVector shrunk = beta_low;
    for (auto& layer : shrunk.layers)
      for (int i = 0; i < layer.size(); ++i) layer[i] *= unit(rng);
    monotone = monotone && anc::validate_scaling(net, shrunk).ok;
  }
  report("feasibility-monotone", monotone);

  anc::OracleResult oracle = anc::grid_search(net, resolution);
  double tol = 2.0 * relays / resolution;
  report("greedy-vs-oracle", snr_cov >= oracle.snr * (1.0 - tol),
         "greedy " + fmt(snr_cov) + " oracle " + fmt(oracle.snr));

  bool any_saturated = false;
  for (const auto& layer : oracle.saturated)
    for (char f : layer) any_saturated = any_saturated || f;
  report("oracle-boundary", any_saturated);

  if (net.num_layers() == 1) {
    anc::DiamondSolution sol = anc::solve_diamond(net);
    report("diamond-vs-oracle",
           sol.snr >= oracle.snr * (1.0 - 1e-12) && oracle.snr >= sol.snr * (1.0 - tol),
           "exact " + fmt(sol.snr) + " oracle " + fmt(oracle.snr));
    bool iter_ok = true;
    for (const auto& c : sol.candidates) iter_ok = iter_ok && c.iterations <= relays;
    report("diamond-iterations", iter_ok);
  }

  if (is_symmetric_class(net)) {
    double gap = std::abs(snr_cov - oracle.snr) / std::max(1.0, oracle.snr);
    report("exact-class", gap <= tol, "symmetric network, relative gap " + fmt(gap));
  }

  return ok ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Amplify-and-forward scaling optimizer for layered Gaussian relay networks"};
  app.require_subcommand(1);

  std::string net_path;
  std::string format = "pretty";
  double ps = 0.0, ps_min = 1.0, ps_max = 1e4;
  int points = 50, resolution = 200;
  unsigned seed = 1;

  CLI::App* rate = app.add_subcommand("rate", "Greedy scaling vector, rate, baseline and bound");
  rate->add_option("--net", net_path, "network JSON file")->required();
  rate->add_option("--ps", ps, "override source power");
  rate->add_option("--format", format, "csv|pretty")->check(CLI::IsMember({"csv", "pretty"}));

  CLI::App* sweep = app.add_subcommand("sweep", "Log-spaced source-power sweep, CSV output");
  sweep->add_option("--net", net_path, "network JSON file")->required();
  sweep->add_option("--ps-min", ps_min, "lowest source power");
  sweep->add_option("--ps-max", ps_max, "highest source power");
  sweep->add_option("--points", points, "number of sweep points");

  CLI::App* verify = app.add_subcommand("verify", "Certify solvers against the grid oracle");
  verify->add_option("--net", net_path, "network JSON file")->required();
  verify->add_option("--resolution", resolution, "grid steps per coordinate");
  verify->add_option("--seed", seed, "seed for randomized checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rate->parsed()) return cmd_rate(net_path, ps, format);
    if (sweep->parsed()) return cmd_sweep(net_path, ps_min, ps_max, points);
    if (verify->parsed()) return cmd_verify(net_path, resolution, seed);
  } catch (const anc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const anc::DegenerateHyperplaneError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const anc::GridGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
