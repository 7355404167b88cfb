#pragma once

#include <string>
#include <vector>

#include "fsens/config.hpp"
#include "fsens/pdd.hpp"
#include "fsens/report.hpp"

namespace fsens {

/// Executes sample -> (surrogate) -> estimate -> report and writes
/// report.json / report.csv under the configured output directory.
/// Idempotent for a fixed config and seed.
SensitivityReport run(const RunConfig& config);

struct SweepOptions {
  std::vector<std::size_t> L_values;
  int replicates = 3;
};

struct SweepCell {
  std::string subset;
  std::string divergence;
  std::size_t L = 0;
  int replicate = 0;
  double value = 0.0;
  double reference = 0.0;
  double rel_error = 0.0;
};

/// Relative-error table |H - H_hat| / H against the oracle reference (or
/// values pinned in the config) per subset, divergence, sample size and
/// replicate seed substream. Writes sweep.csv and sweep_summary.csv.
std::vector<SweepCell> convergence_sweep(const RunConfig& config,
                                         const SweepOptions& options);

/// Builds (or loads) the surrogate named by the config.
PddSurrogate build_surrogate(const RunConfig& config);

}  // namespace fsens
