#pragma once

#include <Eigen/Dense>
#include <string>

#include "fsens/divergence.hpp"
#include "fsens/estimators.hpp"
#include "fsens/input_model.hpp"

namespace fsens {

/// Exact densities for a linear map Y = a'X of Gaussian input (independent
/// standard or correlated): Y and every (X_u, Y) block are Gaussian with
/// covariances assembled from the input covariance and coefficients.
class GaussianLinearOracle {
 public:
  GaussianLinearOracle(Eigen::VectorXd coefficients, const InputModel& law);

  const Eigen::VectorXd& coefficients() const { return coeff_; }
  const InputModel& law() const { return law_; }
  double output_mean() const { return y_mean_; }
  double output_variance() const { return y_var_; }
  double input_output_covariance(int i) const { return cov_xy_(i - 1); }

  /// Provider serving the output marginal plus joints for the requested
  /// subsets (|u| <= 2 each).
  ExactDensityProvider densities(const std::vector<VariableSubset>& subsets) const;

 private:
  Eigen::VectorXd coeff_;
  InputModel law_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  double y_mean_ = 0.0;
  double y_var_ = 0.0;
  Eigen::VectorXd cov_xy_;
};

ExactDensityProvider exact_densities(const GaussianLinearOracle& oracle,
                                     const VariableSubset& u);

struct QuadratureConfig {
  double box_sigmas = 8.0;   // half-width of the integration box per axis
  int points_per_panel = 10; // Gauss-Legendre order within each panel
  int initial_panels = 2;
  int max_doublings = 12;
  double rel_tol = 1e-4;     // successive-refinement stopping criterion
};

/// Direct tensor-quadrature evaluation of the index: integrates
/// f(f_y f_xu / f_joint) f_joint over a box of +-box_sigmas standard
/// deviations per axis, doubling the panel count per axis until two
/// successive refinements agree to rel_tol. Throws if the refinement does
/// not converge.
double index_by_quadrature(const ExactDensityProvider& densities,
                           const InputModel& model, const VariableSubset& u,
                           const GeneratingFunction& gf,
                           const QuadratureConfig& config = {});

/// Closed-form divergences between univariate normals, as a quadrature
/// cross-check: kl and rkl for any parameters, hellinger for any, tv for
/// equal variances only.
double gaussian_divergence_closed_form(const std::string& divergence, double mean1,
                                       double var1, double mean2, double var2);

}  // namespace fsens
