#pragma once

#include <map>
#include <string>
#include <vector>

#include "fsens/config.hpp"
#include "fsens/estimators.hpp"

namespace fsens {

/// Estimates plus derived rankings and a provenance block. Rankings are
/// per divergence, descending by value, ties resolved by configured
/// subset order; unreliable (NaN) estimates rank last.
struct SensitivityReport {
  std::vector<SensitivityEstimate> estimates;
  // divergence -> rank (1-based) per subset, in configured subset order.
  std::map<std::string, std::vector<int>> ranks;
  std::vector<std::string> subset_order;      // configured subset labels
  std::vector<std::string> divergence_order;  // configured divergence names

  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string code_version;
  std::string rng_algorithm;
  long long model_evals = 0;
  double wall_seconds = 0.0;

  void derive_rankings();
  int rank_of(const std::string& divergence, const std::string& subset_label) const;

  /// Fixed column set:
  /// subset,divergence,method,L,S,m,n,value,scaled_value,rank,
  /// inf_term_count,model_evals,seconds. scaled_value is empty for
  /// unbounded divergences; seconds stays empty so identical configs
  /// produce byte-identical files (timings live in the JSON report).
  std::string to_csv() const;
  std::string to_json() const;
};

inline constexpr const char* kCodeVersion = "fsens 0.1.0";

}  // namespace fsens
