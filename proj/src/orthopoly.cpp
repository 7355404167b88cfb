#include "fsens/orthopoly.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace fsens {

namespace {

// Recurrence coefficient beta_k of the orthonormal form
//   sqrt(beta_{k+1}) p_{k+1}(x) = x p_k(x) - sqrt(beta_k) p_{k-1}(x),
// with alpha_k = 0 for both supported (symmetric-weight) families.
double recurrence_beta(BasisFamily family, int k) {
  switch (family) {
    case BasisFamily::kHermite:  // standard normal weight
      return static_cast<double>(k);
    case BasisFamily::kLegendre: {  // uniform weight on [-1, 1]
      const double kk = static_cast<double>(k);
      return kk * kk / (4.0 * kk * kk - 1.0);
    }
  }
  return 0.0;
}

}  // namespace

GaussRule gauss_rule(BasisFamily family, int n) {
  if (n < 1 || n > 64)
    throw std::invalid_argument("gauss_rule: n must lie in [1, 64]");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double off = std::sqrt(recurrence_beta(family, k));
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_rule: eigensolver failed");
  GaussRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights(k) = v0 * v0;  // total measure is 1
  }
  // Symmetrise: both weights are even functions of the node for these
  // families, so enforce exact node antisymmetry to keep odd integrands
  // cancelling to machine zero.
  for (int k = 0; k < n / 2; ++k) {
    const int j = n - 1 - k;
    const double mag = 0.5 * (rule.nodes(j) - rule.nodes(k));
    rule.nodes(k) = -mag;
    rule.nodes(j) = mag;
    const double w = 0.5 * (rule.weights(k) + rule.weights(j));
    rule.weights(k) = w;
    rule.weights(j) = w;
  }
  if (n % 2 == 1) rule.nodes((n - 1) / 2) = 0.0;
  return rule;
}

Eigen::VectorXd ortho_poly_values(BasisFamily family, int max_degree, double x) {
  if (max_degree < 0)
    throw std::invalid_argument("ortho_poly_values: degree must be >= 0");
  Eigen::VectorXd psi(max_degree + 1);
  psi(0) = 1.0;
  if (max_degree == 0) return psi;
  double sqrt_beta_k = std::sqrt(recurrence_beta(family, 1));
  psi(1) = x / sqrt_beta_k;
  for (int k = 1; k < max_degree; ++k) {
    const double sqrt_beta_k1 = std::sqrt(recurrence_beta(family, k + 1));
    psi(k + 1) = (x * psi(k) - sqrt_beta_k * psi(k - 1)) / sqrt_beta_k1;
    sqrt_beta_k = sqrt_beta_k1;
  }
  return psi;
}

}  // namespace fsens
