#include "fsens/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "fsens/parallel.hpp"

namespace fsens {

SampleSet draw_sample_set(const ModelFunction& model, const InputModel& input,
                          std::size_t L, std::uint64_t seed) {
  if (model.dimension() != input.dimension())
    throw std::invalid_argument("draw_sample_set: model/input dimension mismatch");
  SampleSet s;
  s.inputs = sample(input, L, seed);
  s.outputs = model.evaluate_batch(s.inputs);
  s.model_id = model.id();
  s.seed = seed;
  return s;
}

void ExactDensityProvider::set_output_density(std::function<double(double)> f_y,
                                              double mean, double stddev) {
  f_y_ = std::move(f_y);
  y_mean_ = mean;
  y_std_ = stddev;
}

void ExactDensityProvider::add_joint(const VariableSubset& u, JointFn f) {
  joints_[u.label()] = std::move(f);
}

bool ExactDensityProvider::supports(const VariableSubset& u) const {
  return joints_.count(u.label()) > 0;
}

const ExactDensityProvider::JointFn& ExactDensityProvider::joint(
    const VariableSubset& u) const {
  auto it = joints_.find(u.label());
  if (it == joints_.end())
    throw std::invalid_argument("exact densities unavailable for subset {" +
                                u.label() + "}");
  return it->second;
}

SensitivityEstimate reduce_ratios(const std::vector<double>& num,
                                  const std::vector<double>& den,
                                  const GeneratingFunction& gf,
                                  bool with_standard_error) {
  if (num.size() != den.size() || num.empty())
    throw std::invalid_argument("reduce_ratios: mismatched or empty inputs");
  const std::size_t L = num.size();
  constexpr std::size_t kChunk = 65536;
  const std::size_t nchunks = (L + kChunk - 1) / kChunk;
  struct Partial {
    double sum = 0.0, sumsq = 0.0;
    std::size_t inf = 0, zero_den = 0, finite = 0;
  };
  std::vector<Partial> partials(nchunks);
  const double inf = std::numeric_limits<double>::infinity();
  for_each_chunk(L, kChunk, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    Partial p;
    for (std::size_t l = lo; l < hi; ++l) {
      double a = num[l] < kDensityRatioFloor ? 0.0 : num[l];
      double b = den[l] < kDensityRatioFloor ? 0.0 : den[l];
      double term;
      if (b == 0.0) {
        ++p.zero_den;
        if (a == 0.0) {
          term = 0.0;  // 0 * f(0/0) = 0
        } else {
          term = gf(inf);
        }
      } else {
        double t = a / b;
        if (t < kDensityRatioFloor) t = 0.0;
        term = gf(t);
      }
      if (std::isfinite(term)) {
        p.sum += term;
        p.sumsq += term * term;
        ++p.finite;
      } else {
        ++p.inf;
      }
    }
    partials[c] = p;
  });
  Partial total;  // combined in chunk order: worker-count independent
  for (const auto& p : partials) {
    total.sum += p.sum;
    total.sumsq += p.sumsq;
    total.inf += p.inf;
    total.zero_den += p.zero_den;
    total.finite += p.finite;
  }
  SensitivityEstimate est;
  est.divergence = gf.name();
  est.L = L;
  est.inf_terms = total.inf;
  est.zero_density_terms = total.zero_den;
  // Reliability gate: more than 0.01% non-finite summands means the tail
  // conventions dominate and an average would be meaningless.
  if (static_cast<double>(total.inf) * 1e4 > static_cast<double>(L)) {
    est.unreliable = true;
    est.value = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  const double n = static_cast<double>(total.finite);
  est.value = total.sum / n;
  if (with_standard_error && total.finite > 1) {
    const double var = std::max(0.0, total.sumsq / n - est.value * est.value);
    est.standard_error = std::sqrt(var / n);
  }
  return est;
}

SensitivityEstimate estimate_mc(const SampleSet& samples,
                                const ExactDensityProvider& densities,
                                const InputModel& model, const VariableSubset& u,
                                const GeneratingFunction& gf) {
  const std::size_t L = samples.size();
  const auto& joint_fn = densities.joint(u);
  const auto f_xu = marginal_density(model, u);
  const auto& idx = u.indices();
  std::vector<double> num(L), den(L);
  for_each_chunk(L, 16384, [&](std::size_t, std::size_t lo, std::size_t hi) {
    Eigen::VectorXd xu(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t l = lo; l < hi; ++l) {
      for (std::size_t k = 0; k < idx.size(); ++k)
        xu(static_cast<Eigen::Index>(k)) =
            samples.inputs(static_cast<Eigen::Index>(l), idx[k] - 1);
      const double xi = samples.outputs(static_cast<Eigen::Index>(l));
      num[l] = densities.f_y(xi) * f_xu(xu);
      den[l] = joint_fn(xu, xi);
    }
  });
  SensitivityEstimate est = reduce_ratios(num, den, gf, true);
  est.subset = u;
  est.method = "mc";
  est.seed = samples.seed;
  est.model_evals = static_cast<long long>(L);
  return est;
}

KdeMcEngine::KdeMcEngine(const SampleSet& samples, const InputModel& model,
                         const KdeSettings& settings)
    : samples_(samples), model_(model), settings_(settings) {
  const std::size_t L = samples.size();
  if (L < 10) throw std::invalid_argument("kde estimator: sample set too small");
  fit_count_ = settings_.split_fit ? L / 2 : L;
  eval_offset_ = settings_.split_fit ? L - L / 2 : 0;
  const Eigen::VectorXd fit_y = samples_.outputs.head(fit_count_);
  if (settings_.fixed_bandwidths && !settings_.fixed_bandwidths->empty()) {
    h_y_marginal_ = settings_.fixed_bandwidths->back();
  } else {
    h_y_marginal_ = bandwidth_rule(fit_y, 1);
    if (settings_.policy == BandwidthPolicy::kLscv) {
      Eigen::VectorXd ref(1);
      ref << h_y_marginal_;
      h_y_marginal_ *= lscv_scale(fit_y, ref);
    }
  }
  Eigen::VectorXd h1(1);
  h1 << h_y_marginal_;
  f_y_ = std::make_unique<KdeModel>(
      KdeModel::fit(fit_y, h1, settings_.cutoff));
  const Eigen::MatrixXd eval_y =
      samples_.outputs.segment(eval_offset_, samples_.size() - eval_offset_);
  f_y_at_samples_ = f_y_->eval(eval_y, settings_.mode);
}

const KdeMcEngine::Ratios& KdeMcEngine::ratios(const VariableSubset& u) {
  auto it = cache_.find(u.label());
  if (it != cache_.end()) return it->second;
  if (u.size() > 2)
    throw std::invalid_argument(
        "kde estimator: joint fits are limited to |u| <= 2");
  const auto& idx = u.indices();
  if (idx.back() > model_.dimension())
    throw std::invalid_argument("kde estimator: subset index out of range");
  const int d = static_cast<int>(u.size()) + 1;
  const std::size_t L_eval = samples_.size() - eval_offset_;

  // Joint fit over (x_u, y); per-axis bandwidths follow the joint
  // dimension, which measurably shifts the indices versus a d=1 rule.
  Eigen::MatrixXd joint_points(fit_count_, d);
  for (int k = 0; k + 1 < d; ++k)
    joint_points.col(k) =
        samples_.inputs.col(idx[static_cast<std::size_t>(k)] - 1).head(fit_count_);
  joint_points.col(d - 1) = samples_.outputs.head(fit_count_);
  Eigen::VectorXd h(d);
  if (settings_.fixed_bandwidths) {
    if (settings_.fixed_bandwidths->size() != static_cast<std::size_t>(d))
      throw std::invalid_argument(
          "kde estimator: fixed bandwidth count must be |u|+1");
    for (int k = 0; k < d; ++k) h(k) = (*settings_.fixed_bandwidths)[k];
  } else {
    for (int k = 0; k < d; ++k) h(k) = bandwidth_rule(joint_points.col(k), d);
    if (settings_.policy == BandwidthPolicy::kLscv)
      h *= lscv_scale(joint_points, h);
  }
  KdeModel joint = KdeModel::fit(joint_points, h, settings_.cutoff);

  Eigen::MatrixXd queries(L_eval, d);
  for (int k = 0; k + 1 < d; ++k)
    queries.col(k) = samples_.inputs.col(idx[static_cast<std::size_t>(k)] - 1)
                         .tail(L_eval);
  queries.col(d - 1) = samples_.outputs.tail(L_eval);
  const Eigen::VectorXd joint_at = joint.eval(queries, settings_.mode);

  const auto f_xu = marginal_density(model_, u);
  Ratios r;
  r.num.resize(L_eval);
  r.den.resize(L_eval);
  for_each_chunk(L_eval, 16384, [&](std::size_t, std::size_t lo, std::size_t hi) {
    Eigen::VectorXd xu(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t l = lo; l < hi; ++l) {
      for (std::size_t k = 0; k < idx.size(); ++k)
        xu(static_cast<Eigen::Index>(k)) = queries(static_cast<Eigen::Index>(l), k);
      r.num[l] = f_y_at_samples_(static_cast<Eigen::Index>(l)) * f_xu(xu);
      r.den[l] = joint_at(static_cast<Eigen::Index>(l));
    }
  });
  r.bandwidths.assign(h.data(), h.data() + d);
  r.bandwidths.push_back(h_y_marginal_);  // marginal-output bandwidth last
  return cache_.emplace(u.label(), std::move(r)).first->second;
}

SensitivityEstimate KdeMcEngine::estimate(const VariableSubset& u,
                                          const GeneratingFunction& gf) {
  const Ratios& r = ratios(u);
  SensitivityEstimate est = reduce_ratios(r.num, r.den, gf, false);
  est.subset = u;
  est.method = "kde_mc";
  est.L = samples_.size();
  est.seed = samples_.seed;
  est.bandwidths = r.bandwidths;
  est.model_evals = static_cast<long long>(samples_.size());
  return est;
}

SensitivityEstimate estimate_kde_mc(const SampleSet& samples, const InputModel& model,
                                    const VariableSubset& u,
                                    const GeneratingFunction& gf,
                                    const KdeSettings& settings) {
  KdeMcEngine engine(samples, model, settings);
  return engine.estimate(u, gf);
}

SensitivityEstimate estimate_pdd_kde_mc(const PddSurrogate& pdd,
                                        const InputModel& model,
                                        const VariableSubset& u,
                                        const GeneratingFunction& gf, std::size_t L,
                                        std::uint64_t seed,
                                        const KdeSettings& settings) {
  SampleSet surrogate_samples;
  surrogate_samples.inputs = sample(model, L, seed);
  surrogate_samples.outputs = pdd.eval_batch(surrogate_samples.inputs);
  surrogate_samples.model_id = "pdd";
  surrogate_samples.seed = seed;
  KdeMcEngine engine(surrogate_samples, model, settings);
  SensitivityEstimate est = engine.estimate(u, gf);
  est.method = "pdd_kde_mc";
  est.pdd_S = pdd.S();
  est.pdd_m = pdd.m();
  est.pdd_n = pdd.n();
  est.model_evals = 0;  // surrogate only
  return est;
}

double scale_index(const SensitivityEstimate& estimate) {
  const GeneratingFunction gf = GeneratingFunction::parse(estimate.divergence);
  const double bound = range_upper_bound(gf);
  if (!std::isfinite(bound))
    throw std::domain_error("scale_index: '" + estimate.divergence +
                            "' has an unbounded range; no scaling is possible");
  return estimate.value / bound;
}

}  // namespace fsens
