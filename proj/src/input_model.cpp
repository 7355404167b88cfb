#include "fsens/input_model.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fsens/parallel.hpp"
#include "fsens/rng.hpp"

namespace fsens {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kTwoPi = 6.2831853071795864769;

double gaussian_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Acklam's rational approximation refined by one Halley step; accurate to
// a few ulps over (0, 1).
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile: p must lie in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(kTwoPi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

MarginalDistribution::MarginalDistribution(MarginalKind kind, double a, double b)
    : kind_(kind), a_(a), b_(b) {}

MarginalDistribution MarginalDistribution::gaussian(double mean, double stddev) {
  if (!(stddev > 0.0))
    throw std::invalid_argument("gaussian marginal: std must be > 0");
  return {MarginalKind::kGaussian, mean, stddev};
}

MarginalDistribution MarginalDistribution::uniform(double lower, double upper) {
  if (!(upper > lower))
    throw std::invalid_argument("uniform marginal: upper must exceed lower");
  return {MarginalKind::kUniform, lower, upper};
}

MarginalDistribution MarginalDistribution::lognormal_log_params(double log_mean,
                                                                double log_std) {
  if (!(log_std > 0.0))
    throw std::invalid_argument("lognormal marginal: log-std must be > 0");
  return {MarginalKind::kLognormal, log_mean, log_std};
}

MarginalDistribution MarginalDistribution::lognormal_mean_std(double mean,
                                                              double stddev) {
  if (!(mean > 0.0 && stddev > 0.0))
    throw std::invalid_argument("lognormal marginal: mean and std must be > 0");
  const double s2 = std::log1p(stddev * stddev / (mean * mean));
  return lognormal_log_params(std::log(mean) - 0.5 * s2, std::sqrt(s2));
}

MarginalDistribution MarginalDistribution::lognormal_mean_error_factor(
    double mean, double error_factor) {
  if (!(mean > 0.0 && error_factor > 1.0))
    throw std::invalid_argument(
        "lognormal marginal: mean must be > 0 and error factor > 1");
  // Error factor = 95th/50th percentile ratio, i.e. exp(z_{0.95} sigma);
  // the stated mean is the distribution mean.
  const double sigma = std::log(error_factor) / normal_quantile(0.95);
  return lognormal_log_params(std::log(mean) - 0.5 * sigma * sigma, sigma);
}

double MarginalDistribution::pdf(double x) const {
  switch (kind_) {
    case MarginalKind::kGaussian:
      return gaussian_pdf((x - a_) / b_) / b_;
    case MarginalKind::kUniform:
      return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
    case MarginalKind::kLognormal:
      if (x <= 0.0) return 0.0;
      return gaussian_pdf((std::log(x) - a_) / b_) / (b_ * x);
  }
  return 0.0;
}

double MarginalDistribution::cdf(double x) const {
  switch (kind_) {
    case MarginalKind::kGaussian:
      return normal_cdf((x - a_) / b_);
    case MarginalKind::kUniform:
      return std::clamp((x - a_) / (b_ - a_), 0.0, 1.0);
    case MarginalKind::kLognormal:
      if (x <= 0.0) return 0.0;
      return normal_cdf((std::log(x) - a_) / b_);
  }
  return 0.0;
}

double MarginalDistribution::quantile(double p) const {
  switch (kind_) {
    case MarginalKind::kGaussian:
      return a_ + b_ * normal_quantile(p);
    case MarginalKind::kUniform:
      if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("quantile: p must lie in [0,1]");
      return a_ + (b_ - a_) * p;
    case MarginalKind::kLognormal:
      return std::exp(a_ + b_ * normal_quantile(p));
  }
  return 0.0;
}

double MarginalDistribution::mean() const {
  switch (kind_) {
    case MarginalKind::kGaussian:
      return a_;
    case MarginalKind::kUniform:
      return 0.5 * (a_ + b_);
    case MarginalKind::kLognormal:
      return std::exp(a_ + 0.5 * b_ * b_);
  }
  return 0.0;
}

double MarginalDistribution::stddev() const {
  switch (kind_) {
    case MarginalKind::kGaussian:
      return b_;
    case MarginalKind::kUniform:
      return (b_ - a_) / std::sqrt(12.0);
    case MarginalKind::kLognormal:
      return mean() * std::sqrt(std::expm1(b_ * b_));
  }
  return 0.0;
}

double MarginalDistribution::to_standard(double x) const {
  switch (kind_) {
    case MarginalKind::kGaussian:
      return (x - a_) / b_;
    case MarginalKind::kUniform:
      return 2.0 * (x - a_) / (b_ - a_) - 1.0;
    case MarginalKind::kLognormal:
      return (std::log(x) - a_) / b_;
  }
  return 0.0;
}

double MarginalDistribution::from_standard(double z) const {
  switch (kind_) {
    case MarginalKind::kGaussian:
      return a_ + b_ * z;
    case MarginalKind::kUniform:
      return a_ + 0.5 * (z + 1.0) * (b_ - a_);
    case MarginalKind::kLognormal:
      return std::exp(a_ + b_ * z);
  }
  return 0.0;
}

BasisFamily MarginalDistribution::basis() const {
  return kind_ == MarginalKind::kUniform ? BasisFamily::kLegendre
                                         : BasisFamily::kHermite;
}

double MarginalDistribution::sample(std::uint64_t seed, std::uint64_t counter) const {
  switch (kind_) {
    case MarginalKind::kGaussian:
      return a_ + b_ * rng_normal(seed, counter);
    case MarginalKind::kUniform:
      return a_ + (b_ - a_) * rng_uniform(rng_u64(seed, counter), 0);
    case MarginalKind::kLognormal:
      return std::exp(a_ + b_ * rng_normal(seed, counter));
  }
  return 0.0;
}

VariableSubset::VariableSubset(std::vector<int> indices)
    : indices_(std::move(indices)) {
  if (indices_.empty())
    throw std::invalid_argument("variable subset must not be empty");
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 1)
      throw std::invalid_argument("variable subset indices are 1-based");
    if (k > 0 && indices_[k] == indices_[k - 1])
      throw std::invalid_argument("variable subset has duplicate index");
  }
}

std::string VariableSubset::label() const {
  std::string s;
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) s += '+';
    s += std::to_string(indices_[k]);
  }
  return s;
}

bool VariableSubset::contains(int i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

InputModel InputModel::independent(std::vector<MarginalDistribution> marginals) {
  if (marginals.empty())
    throw std::invalid_argument("input model needs at least one marginal");
  InputModel m;
  m.dimension_ = static_cast<int>(marginals.size());
  m.independent_ = true;
  m.marginals_ = std::move(marginals);
  return m;
}

InputModel InputModel::correlated_gaussian(Eigen::VectorXd mean,
                                           Eigen::MatrixXd cov) {
  const auto n = mean.size();
  if (n < 1 || cov.rows() != n || cov.cols() != n)
    throw std::invalid_argument("correlated gaussian: dimension mismatch");
  if (!cov.isApprox(cov.transpose(), 1e-12))
    throw std::invalid_argument("correlated gaussian: covariance not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(
        "correlated gaussian: covariance not positive definite");
  InputModel m;
  m.dimension_ = static_cast<int>(n);
  m.independent_ = false;
  m.mean_ = std::move(mean);
  m.cov_ = std::move(cov);
  m.chol_ = llt.matrixL();
  return m;
}

const std::vector<MarginalDistribution>& InputModel::marginals() const {
  if (!independent_)
    throw std::logic_error("marginals(): law is not an independent product");
  return marginals_;
}

const Eigen::VectorXd& InputModel::gaussian_mean() const {
  if (independent_)
    throw std::logic_error("gaussian_mean(): law is an independent product");
  return mean_;
}

const Eigen::MatrixXd& InputModel::covariance() const {
  if (independent_)
    throw std::logic_error("covariance(): law is an independent product");
  return cov_;
}

double InputModel::coordinate_mean(int i) const {
  return independent_ ? marginals_[i - 1].mean() : mean_(i - 1);
}

double InputModel::coordinate_std(int i) const {
  return independent_ ? marginals_[i - 1].stddev() : std::sqrt(cov_(i - 1, i - 1));
}

Eigen::MatrixXd sample(const InputModel& model, std::size_t L, std::uint64_t seed) {
  if (L < 1) throw std::invalid_argument("sample: L must be >= 1");
  const int N = model.dimension();
  Eigen::MatrixXd out(L, N);
  if (model.independent_law()) {
    const auto& marg = model.marginals();
    for_each_chunk(L, 16384, [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t l = lo; l < hi; ++l)
        for (int j = 0; j < N; ++j)
          out(l, j) = marg[j].sample(seed, l * N + j);
    });
  } else {
    const Eigen::MatrixXd& C = model.chol_;
    const Eigen::VectorXd& mu = model.mean_;
    for_each_chunk(L, 16384, [&](std::size_t, std::size_t lo, std::size_t hi) {
      Eigen::VectorXd z(N);
      for (std::size_t l = lo; l < hi; ++l) {
        for (int j = 0; j < N; ++j) z(j) = rng_normal(seed, l * N + j);
        out.row(l) = (mu + C * z).transpose();
      }
    });
  }
  return out;
}

MvnDensity::MvnDensity(Eigen::VectorXd mean, const Eigen::MatrixXd& cov)
    : mean_(std::move(mean)), cov_(cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("mvn density: covariance block not positive definite");
  chol_ = llt.matrixL();
  diag_product_ = chol_.diagonal().prod();
}

double MvnDensity::operator()(const Eigen::VectorXd& x) const {
  const auto d = mean_.size();
  Eigen::VectorXd y =
      chol_.triangularView<Eigen::Lower>().solve(x - mean_);
  const double q = y.squaredNorm();
  return std::exp(-0.5 * q) /
         (std::pow(kTwoPi, 0.5 * static_cast<double>(d)) * diag_product_);
}

double marginal_pdf(const InputModel& model, const VariableSubset& u,
                    const Eigen::VectorXd& x_u) {
  return marginal_density(model, u)(x_u);
}

std::function<double(const Eigen::VectorXd&)> marginal_density(
    const InputModel& model, const VariableSubset& u) {
  const auto& idx = u.indices();
  if (idx.back() > model.dimension())
    throw std::invalid_argument("marginal_density: subset index out of range");
  if (model.independent_law()) {
    std::vector<MarginalDistribution> sel;
    sel.reserve(idx.size());
    for (int i : idx) sel.push_back(model.marginals()[i - 1]);
    return [sel](const Eigen::VectorXd& x) {
      if (static_cast<std::size_t>(x.size()) != sel.size())
        throw std::invalid_argument("marginal density: point has wrong length");
      double p = 1.0;
      for (std::size_t k = 0; k < sel.size(); ++k) p *= sel[k].pdf(x(k));
      return p;
    };
  }
  const auto d = static_cast<Eigen::Index>(idx.size());
  Eigen::VectorXd mu(d);
  Eigen::MatrixXd cov(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    mu(r) = model.gaussian_mean()(idx[r] - 1);
    for (Eigen::Index c = 0; c < d; ++c)
      cov(r, c) = model.covariance()(idx[r] - 1, idx[c] - 1);
  }
  MvnDensity dens(std::move(mu), cov);
  return [dens, d](const Eigen::VectorXd& x) {
    if (x.size() != d)
      throw std::invalid_argument("marginal density: point has wrong length");
    return dens(x);
  };
}

Eigen::VectorXd to_standard_space(const InputModel& model, const Eigen::VectorXd& x) {
  if (!model.independent_law())
    throw std::invalid_argument(
        "to_standard_space: unsupported for correlated laws");
  if (x.size() != model.dimension())
    throw std::invalid_argument("to_standard_space: wrong length");
  Eigen::VectorXd z(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j)
    z(j) = model.marginals()[j].to_standard(x(j));
  return z;
}

Eigen::VectorXd from_standard_space(const InputModel& model, const Eigen::VectorXd& z) {
  if (!model.independent_law())
    throw std::invalid_argument(
        "from_standard_space: unsupported for correlated laws");
  if (z.size() != model.dimension())
    throw std::invalid_argument("from_standard_space: wrong length");
  Eigen::VectorXd x(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j)
    x(j) = model.marginals()[j].from_standard(z(j));
  return x;
}

}  // namespace fsens
