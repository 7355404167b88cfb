#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fsens/divergence.hpp"
#include "fsens/input_model.hpp"
#include "fsens/kde.hpp"
#include "fsens/pdd.hpp"
#include "fsens/test_functions.hpp"

namespace fsens {

/// Paired input rows and output values with provenance.
struct SampleSet {
  Eigen::MatrixXd inputs;   // L x N
  Eigen::VectorXd outputs;  // L
  std::string model_id;
  std::uint64_t seed = 0;
  std::size_t size() const { return static_cast<std::size_t>(outputs.size()); }
};

SampleSet draw_sample_set(const ModelFunction& model, const InputModel& input,
                          std::size_t L, std::uint64_t seed);

/// Exact output and joint (X_u, Y) densities for mappings simple enough to
/// admit them. Joint evaluators are registered per subset.
class ExactDensityProvider {
 public:
  using JointFn = std::function<double(const Eigen::VectorXd&, double)>;

  void set_output_density(std::function<double(double)> f_y, double mean,
                          double stddev);
  void add_joint(const VariableSubset& u, JointFn f);

  bool supports(const VariableSubset& u) const;
  double f_y(double xi) const { return f_y_(xi); }
  const JointFn& joint(const VariableSubset& u) const;
  double y_mean() const { return y_mean_; }
  double y_std() const { return y_std_; }

 private:
  std::function<double(double)> f_y_;
  double y_mean_ = 0.0;
  double y_std_ = 1.0;
  std::map<std::string, JointFn> joints_;
};

/// Bandwidth selection for the estimator fits. The cross-validated
/// default rescales the reference rule per fit; the plain reference rule
/// oversmooths structured output densities and is kept for comparison.
enum class BandwidthPolicy { kLscv, kSilverman, kFixed };

struct KdeSettings {
  BandwidthPolicy policy = BandwidthPolicy::kLscv;
  std::optional<std::vector<double>> fixed_bandwidths;  // per joint axis
  double cutoff = 6.0;
  KdeEvalMode mode = KdeEvalMode::kTruncated;
  bool split_fit = false;  // fit on the first half, evaluate on the second
};

/// One estimated index with its run metadata.
struct SensitivityEstimate {
  VariableSubset subset{std::vector<int>{1}};
  std::string divergence;
  std::string method;  // mc | kde_mc | pdd_kde_mc | oracle
  double value = 0.0;
  std::size_t L = 0;
  std::uint64_t seed = 0;
  double standard_error = std::numeric_limits<double>::quiet_NaN();  // mc only
  std::size_t inf_terms = 0;       // summands evaluating to +-inf, dropped
  std::size_t zero_density_terms = 0;
  bool unreliable = false;         // inf_terms exceeded 0.01% of L
  std::vector<double> bandwidths;  // kde paths: output axis last
  int pdd_S = 0, pdd_m = 0, pdd_n = 0;
  long long model_evals = 0;
};

/// Sample mean of f(ratio) with the extended-real ratio conventions:
/// num and den below the density floor count as zero; zero den with
/// positive num evaluates f at +inf. Non-finite summands are counted and
/// excluded; past 0.01% of L the estimate is flagged unreliable (NaN).
SensitivityEstimate reduce_ratios(const std::vector<double>& num,
                                  const std::vector<double>& den,
                                  const GeneratingFunction& gf,
                                  bool with_standard_error);

/// Plain Monte Carlo estimator over exact densities.
SensitivityEstimate estimate_mc(const SampleSet& samples,
                                const ExactDensityProvider& densities,
                                const InputModel& model, const VariableSubset& u,
                                const GeneratingFunction& gf);

/// Shared per-sample-set state for the kernel-density estimator: the
/// output-marginal fit and its values at the sample points are computed
/// once and reused across subsets; per-subset joint ratios are cached so
/// several divergences can reduce the same ratio vector.
class KdeMcEngine {
 public:
  KdeMcEngine(const SampleSet& samples, const InputModel& model,
              const KdeSettings& settings);

  /// Ratio r_l = f_y(xi_l) f_xu(x_l) / f_joint(x_l, xi_l); numerators and
  /// denominators are kept apart so the floor conventions see raw values.
  struct Ratios {
    std::vector<double> num;
    std::vector<double> den;
    std::vector<double> bandwidths;
  };
  const Ratios& ratios(const VariableSubset& u);

  SensitivityEstimate estimate(const VariableSubset& u, const GeneratingFunction& gf);

 private:
  const SampleSet& samples_;
  const InputModel& model_;
  KdeSettings settings_;
  std::size_t fit_count_ = 0;   // rows used for fitting
  std::size_t eval_offset_ = 0; // first evaluated row (split mode)
  double h_y_marginal_ = 0.0;
  std::unique_ptr<KdeModel> f_y_;          // d = 1 fit
  Eigen::VectorXd f_y_at_samples_;
  std::map<std::string, Ratios> cache_;
};

/// Kernel-density Monte Carlo estimator; |u| <= 2.
SensitivityEstimate estimate_kde_mc(const SampleSet& samples, const InputModel& model,
                                    const VariableSubset& u,
                                    const GeneratingFunction& gf,
                                    const KdeSettings& settings = {});

/// Surrogate-accelerated estimator: draws L fresh inputs, pushes them
/// through the surrogate (no model-function evaluations), then proceeds
/// as the kernel-density estimator.
SensitivityEstimate estimate_pdd_kde_mc(const PddSurrogate& pdd,
                                        const InputModel& model,
                                        const VariableSubset& u,
                                        const GeneratingFunction& gf, std::size_t L,
                                        std::uint64_t seed,
                                        const KdeSettings& settings = {});

/// Divides by f(0) + f*(0), mapping onto [0, 1]; error when the range is
/// unbounded (no scaling is possible then).
double scale_index(const SensitivityEstimate& estimate);

}  // namespace fsens
