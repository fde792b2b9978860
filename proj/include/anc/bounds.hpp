#pragma once

#include "anc/network.hpp"

namespace anc {

/// Rates, baseline, and upper bound for one (network, beta, P_s) evaluation.
/// All rates in bits per channel use (log base 2 throughout).
struct RateReport {
  double source_power = 0.0;
  double snr = 0.0;
  double rate_bits = 0.0;       // greedy achievable rate
  double baseline_rate = 0.0;   // every factor at its sequential upper bound
  double mac_bound = 0.0;       // MAC cut (full cooperation, destination cut)
  double gap_to_bound = 0.0;    // mac_bound - rate_bits
};

/// (1/2) log2(1 + snr).
double rate_bits(double snr);

/// Layer-sequential all-max scaling: each layer's bounds are computed after
/// committing the previous layer's maxed factors.
ScalingVector all_max_beta(const LayeredNetwork& net);

/// Full-cooperation multiple-access cut at the destination:
/// (1/2) log2(1 + (sum_i sqrt(P_i) |h_it|)^2 / sigma^2) over the last relay
/// layer. Independent of P_s.
double mac_upper_bound(const LayeredNetwork& net);

/// Greedy rate, all-max baseline, MAC cut bound and gap for one network.
RateReport make_report(const LayeredNetwork& net);

}  // namespace anc
