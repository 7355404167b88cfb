#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fsens/input_model.hpp"
#include "fsens/orthopoly.hpp"
#include "fsens/test_functions.hpp"

namespace fsens {

/// One expansion term: a variable subset and per-variable polynomial
/// degrees, every degree in [1, m].
struct MultiIndex {
  VariableSubset u;
  std::vector<int> degrees;
};

/// All terms (u, j) with 1 <= |u| <= S and degrees in [1, m]; the count is
/// sum_{s=1}^{S} C(N,s) m^s. Order: subsets by size then lexicographic,
/// degrees in odometer order.
std::vector<MultiIndex> enumerate_terms(int N, int S, int m);

struct SobolReport {
  double total_variance = 0.0;
  std::vector<std::pair<VariableSubset, double>> partial_variances;
  Eigen::VectorXd univariate;  // S_{i}, length N
  Eigen::VectorXd total;       // T_i, length N
};

/// Truncated orthonormal expansion of a response over an independent
/// input law: constant term plus coefficients over multi-indices, bases
/// chosen per coordinate to match the marginal measure.
class PddSurrogate {
 public:
  PddSurrogate(double y_mean, std::vector<MultiIndex> terms,
               Eigen::VectorXd coefficients, std::vector<BasisFamily> bases,
               InputModel input, int S, int m, int n);

  double y_mean() const { return y_mean_; }
  const std::vector<MultiIndex>& terms() const { return terms_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  const std::vector<BasisFamily>& bases() const { return bases_; }
  const InputModel& input() const { return input_; }
  int dimension() const { return input_.dimension(); }
  int S() const { return S_; }
  int m() const { return m_; }
  int n() const { return n_; }

  double eval(const Eigen::VectorXd& x) const;
  Eigen::VectorXd eval_batch(const Eigen::MatrixXd& rows) const;

  std::string to_json() const;
  static PddSurrogate from_json(const std::string& text);

 private:
  double y_mean_;
  std::vector<MultiIndex> terms_;
  Eigen::VectorXd coefficients_;
  std::vector<BasisFamily> bases_;
  InputModel input_;
  int S_, m_, n_;
};

/// Expansion coefficients by anchored dimension-reduction integration:
/// each full-dimension coefficient integral is reduced to tensor Gauss
/// quadratures over at most S coordinates, the others held at the
/// standard-space origin, with inclusion-exclusion weights
/// (-1)^{S-|v|} C(N-|v|-1, S-|v|) over anchored subsets v. Terms whose
/// subset is not contained in v integrate to zero against the zero-mean
/// basis and are skipped. Model evaluations are cached by input vector,
/// so an even n costs exactly N n + 1 (S=1) or N(N-1) n^2/2 + N n + 1
/// (S=2) evaluations.
///
/// Requires an independent input law, S in {1, 2}, degrees up to m, and n
/// quadrature points per axis (n >= m recommended).
PddSurrogate compute_coefficients(const ModelFunction& y, const InputModel& model,
                                  int S, int m, int n);

double eval_surrogate(const PddSurrogate& pdd, const Eigen::VectorXd& x);

/// Partial variances are coefficient square sums per subset; univariate
/// and total indices follow. Throws on zero total variance.
SobolReport sobol_from_pdd(const PddSurrogate& pdd);

}  // namespace fsens
