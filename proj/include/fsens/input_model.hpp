#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fsens {

double normal_cdf(double x);
double normal_quantile(double p);

enum class MarginalKind { kGaussian, kUniform, kLognormal };

/// Reference measure used for orthonormal polynomial bases in standard
/// space: standard normal (gaussian, lognormal) or uniform on [-1, 1].
enum class BasisFamily { kHermite, kLegendre };

/// One coordinate law. Lognormal supports the three parameterizations in
/// circulation: (log-mean, log-std), (mean, std) and (mean, error factor),
/// where the error factor is the 95th/50th percentile ratio.
class MarginalDistribution {
 public:
  static MarginalDistribution gaussian(double mean, double stddev);
  static MarginalDistribution uniform(double lower, double upper);
  static MarginalDistribution lognormal_log_params(double log_mean, double log_std);
  static MarginalDistribution lognormal_mean_std(double mean, double stddev);
  static MarginalDistribution lognormal_mean_error_factor(double mean, double error_factor);

  MarginalKind kind() const { return kind_; }
  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;
  double mean() const;
  double stddev() const;

  /// CDF followed by the inverse CDF of the basis reference measure.
  double to_standard(double x) const;
  double from_standard(double z) const;
  BasisFamily basis() const;

  /// Draws one sample from (seed, counter).
  double sample(std::uint64_t seed, std::uint64_t counter) const;

  // Parameter access for serialization.
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  MarginalDistribution(MarginalKind kind, double a, double b);
  MarginalKind kind_;
  // gaussian: mean/std; uniform: lower/upper; lognormal: log-mean/log-std.
  double a_;
  double b_;
};

/// Sorted, duplicate-free, 1-based subset of input indices.
class VariableSubset {
 public:
  explicit VariableSubset(std::vector<int> indices);
  std::size_t size() const { return indices_.size(); }
  const std::vector<int>& indices() const { return indices_; }
  std::string label() const;  // "1" or "1+3"
  bool contains(int i) const;
  bool operator==(const VariableSubset& o) const { return indices_ == o.indices_; }

 private:
  std::vector<int> indices_;
};

/// Probability law of the input vector: independent marginals or a
/// correlated Gaussian. Immutable after construction; sampling is pure in
/// (seed), so concurrent use needs no synchronisation.
class InputModel {
 public:
  static InputModel independent(std::vector<MarginalDistribution> marginals);
  static InputModel correlated_gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  int dimension() const { return dimension_; }
  bool independent_law() const { return independent_; }
  const std::vector<MarginalDistribution>& marginals() const;
  const Eigen::VectorXd& gaussian_mean() const;
  const Eigen::MatrixXd& covariance() const;

  double coordinate_mean(int i) const;  // 1-based
  double coordinate_std(int i) const;

 private:
  InputModel() = default;
  int dimension_ = 0;
  bool independent_ = false;
  std::vector<MarginalDistribution> marginals_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;  // lower factor of cov_
  friend Eigen::MatrixXd sample(const InputModel&, std::size_t, std::uint64_t);
};

/// L i.i.d. rows drawn from the model law; deterministic in seed.
Eigen::MatrixXd sample(const InputModel& model, std::size_t L, std::uint64_t seed);

/// Marginal density of the selected coordinates at x_u; zero outside the
/// support of a bounded marginal.
double marginal_pdf(const InputModel& model, const VariableSubset& u,
                    const Eigen::VectorXd& x_u);

/// Reusable evaluator for the subset marginal (factorised product or
/// sub-block Gaussian). Cheaper than marginal_pdf in sample loops.
std::function<double(const Eigen::VectorXd&)> marginal_density(
    const InputModel& model, const VariableSubset& u);

/// Coordinate-wise isoprobabilistic transform; independent laws only.
Eigen::VectorXd to_standard_space(const InputModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd from_standard_space(const InputModel& model, const Eigen::VectorXd& z);

/// Density, Cholesky-parameterised, of a Gaussian block. Evaluation uses
/// the product of factor diagonals so that exact power-of-two rescalings
/// of the data commute with rounding.
class MvnDensity {
 public:
  MvnDensity(Eigen::VectorXd mean, const Eigen::MatrixXd& cov);
  double operator()(const Eigen::VectorXd& x) const;
  double variance(int i) const { return cov_(i, i); }
  const Eigen::VectorXd& mean() const { return mean_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  double diag_product_;
};

}  // namespace fsens
