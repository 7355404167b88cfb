#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsens/estimators.hpp"
#include "fsens/input_model.hpp"

namespace fsens {

/// Configuration problems: malformed JSON, unknown keys, inconsistent
/// settings. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numeric failures at run time: non-convergent quadrature, degenerate
/// samples, unreliable estimates. CLI exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelSpec {
  std::string builtin;       // one of linear6 | iman | ishigami, or empty
  std::string external_cmd;  // set instead of builtin
  int external_dimension = 0;
  std::size_t batch_size = 10000;
  std::string transport = "stdin";
};

struct PddSettings {
  int S = 2;
  int m = 8;
  std::string n_spec = "m+1";  // "m+1" or an integer literal
  std::optional<std::string> load_path;
  int n() const { return n_spec == "m+1" ? m + 1 : std::stoi(n_spec); }
};

/// Parsed and schema-checked run configuration. Unknown keys are
/// rejected; every diagnostic names the offending config path.
struct RunConfig {
  ModelSpec model;
  InputModel input = InputModel::independent(
      {MarginalDistribution::gaussian(0.0, 1.0)});  // replaced by parse
  std::string method;  // mc | kde_mc | pdd_kde_mc | oracle
  std::vector<VariableSubset> subsets;
  std::vector<std::string> divergences;
  std::size_t L = 0;
  std::uint64_t seed = 0;
  KdeSettings kde;
  PddSettings pdd;
  bool pdd_present = false;
  std::string output_dir = "fsens_out";
  std::map<std::string, double> reference;  // "subset:divergence" -> value
  nlohmann::json raw;                       // canonical source document

  static RunConfig parse(const nlohmann::json& doc);
  static RunConfig parse_file(const std::string& path);

  /// FNV-1a over the canonical (sorted-key) dump; key order in the source
  /// document does not matter.
  std::uint64_t hash() const;
};

}  // namespace fsens
