#pragma once

#include <Eigen/Dense>

#include "fsens/input_model.hpp"

namespace fsens {

struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;  // probabilists' normalisation: weights sum to 1
};

/// Gauss rule of the family via Golub-Welsch on the orthonormal
/// three-term recurrence; exact for polynomials of degree <= 2n-1 against
/// the family's probability measure. 1 <= n <= 64.
GaussRule gauss_rule(BasisFamily family, int n);

/// Values psi_0(x) .. psi_max_degree(x) of the orthonormal polynomials
/// (unit norm against the probability measure; psi_0 == 1).
Eigen::VectorXd ortho_poly_values(BasisFamily family, int max_degree, double x);

}  // namespace fsens
