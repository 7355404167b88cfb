#include "fsens/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "fsens/orthopoly.hpp"
#include "fsens/parallel.hpp"

namespace fsens {

namespace {

constexpr double kSqrtTwoPi = 2.5066282746310005024;

bool is_gaussian_law(const InputModel& law) {
  if (!law.independent_law()) return true;  // correlated laws are Gaussian
  for (const auto& m : law.marginals())
    if (m.kind() != MarginalKind::kGaussian) return false;
  return true;
}

}  // namespace

GaussianLinearOracle::GaussianLinearOracle(Eigen::VectorXd coefficients,
                                           const InputModel& law)
    : coeff_(std::move(coefficients)), law_(law) {
  const int N = law_.dimension();
  if (coeff_.size() != N)
    throw std::invalid_argument("linear oracle: coefficient length mismatch");
  if (!is_gaussian_law(law_))
    throw std::invalid_argument("linear oracle: input law must be Gaussian");
  if (law_.independent_law()) {
    mean_.resize(N);
    cov_ = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
      mean_(i) = law_.marginals()[i].mean();
      const double s = law_.marginals()[i].stddev();
      cov_(i, i) = s * s;
    }
  } else {
    mean_ = law_.gaussian_mean();
    cov_ = law_.covariance();
  }
  y_mean_ = coeff_.dot(mean_);
  cov_xy_ = cov_ * coeff_;
  y_var_ = coeff_.dot(cov_xy_);
  if (!(y_var_ > 0.0))
    throw std::invalid_argument("linear oracle: output variance must be positive");
}

ExactDensityProvider GaussianLinearOracle::densities(
    const std::vector<VariableSubset>& subsets) const {
  ExactDensityProvider provider;
  const double mu = y_mean_;
  const double sd = std::sqrt(y_var_);
  provider.set_output_density(
      [mu, sd](double xi) {
        const double z = (xi - mu) / sd;
        return std::exp(-0.5 * z * z) / (kSqrtTwoPi * sd);
      },
      mu, sd);
  for (const auto& u : subsets) {
    if (u.size() > 2)
      throw std::invalid_argument("linear oracle: joints are limited to |u| <= 2");
    const auto& idx = u.indices();
    if (idx.back() > law_.dimension())
      throw std::invalid_argument("linear oracle: subset index out of range");
    const auto d = static_cast<Eigen::Index>(idx.size()) + 1;
    Eigen::VectorXd bm(d);
    Eigen::MatrixXd bc(d, d);
    for (Eigen::Index r = 0; r + 1 < d; ++r) {
      bm(r) = mean_(idx[r] - 1);
      for (Eigen::Index c = 0; c + 1 < d; ++c)
        bc(r, c) = cov_(idx[r] - 1, idx[c] - 1);
      bc(r, d - 1) = cov_xy_(idx[r] - 1);
      bc(d - 1, r) = cov_xy_(idx[r] - 1);
    }
    bm(d - 1) = y_mean_;
    bc(d - 1, d - 1) = y_var_;
    MvnDensity dens(std::move(bm), bc);
    provider.add_joint(u, [dens, d](const Eigen::VectorXd& xu, double xi) {
      Eigen::VectorXd p(d);
      p.head(d - 1) = xu;
      p(d - 1) = xi;
      return dens(p);
    });
  }
  return provider;
}

ExactDensityProvider exact_densities(const GaussianLinearOracle& oracle,
                                     const VariableSubset& u) {
  return oracle.densities({u});
}

namespace {

// Composite Gauss-Legendre nodes/weights for plain integration over
// [lo, hi] split into `panels` equal panels.
void composite_rule(double lo, double hi, int panels, const GaussRule& base,
                    std::vector<double>& nodes, std::vector<double>& weights) {
  const int g = static_cast<int>(base.nodes.size());
  nodes.resize(static_cast<std::size_t>(panels) * g);
  weights.resize(nodes.size());
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    for (int k = 0; k < g; ++k) {
      nodes[static_cast<std::size_t>(p) * g + k] = mid + 0.5 * width * base.nodes(k);
      // base weights sum to 1 over the uniform measure; times panel width
      // turns them into plain dx weights.
      weights[static_cast<std::size_t>(p) * g + k] = base.weights(k) * width;
    }
  }
}

struct Axis {
  double lo, hi;
};

double integrand_term(const GeneratingFunction& gf, double num, double den) {
  const double a = num < kDensityRatioFloor ? 0.0 : num;
  const double b = den < kDensityRatioFloor ? 0.0 : den;
  if (b == 0.0) return a == 0.0 ? 0.0 : a * gf.fstar0();
  double t = a / b;
  if (t < kDensityRatioFloor) t = 0.0;
  return gf(t) * b;
}

double tensor_pass(const ExactDensityProvider& dens,
                   const std::function<double(const Eigen::VectorXd&)>& f_xu,
                   const ExactDensityProvider::JointFn& joint,
                   const GeneratingFunction& gf, const std::vector<Axis>& axes,
                   int panels, const GaussRule& base) {
  const std::size_t dim_u = axes.size() - 1;
  std::vector<std::vector<double>> nodes(axes.size()), weights(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a)
    composite_rule(axes[a].lo, axes[a].hi, panels, base, nodes[a], weights[a]);
  const std::size_t nx = nodes[0].size();
  // Precompute the output-axis factors once; the outer loops walk x_u.
  const auto& ynodes = nodes[axes.size() - 1];
  const auto& yweights = weights[axes.size() - 1];
  std::vector<double> fy(ynodes.size());
  for (std::size_t k = 0; k < ynodes.size(); ++k) fy[k] = dens.f_y(ynodes[k]);

  std::vector<double> partial((dim_u == 1 ? nx : nx * nx), 0.0);
  const std::size_t outer = dim_u == 1 ? nx : nx * nx;
  for_each_chunk(outer, 64, [&](std::size_t, std::size_t lo, std::size_t hi) {
    Eigen::VectorXd xu(static_cast<Eigen::Index>(dim_u));
    for (std::size_t o = lo; o < hi; ++o) {
      double wx;
      if (dim_u == 1) {
        xu(0) = nodes[0][o];
        wx = weights[0][o];
      } else {
        const std::size_t i = o / nx, j = o % nx;
        xu(0) = nodes[0][i];
        xu(1) = nodes[1][j];
        wx = weights[0][i] * weights[1][j];
      }
      const double fxu = f_xu(xu);
      double acc = 0.0;
      for (std::size_t k = 0; k < ynodes.size(); ++k) {
        const double q = joint(xu, ynodes[k]);
        acc += yweights[k] * integrand_term(gf, fy[k] * fxu, q);
      }
      partial[o] = wx * acc;
    }
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace

double index_by_quadrature(const ExactDensityProvider& densities,
                           const InputModel& model, const VariableSubset& u,
                           const GeneratingFunction& gf,
                           const QuadratureConfig& config) {
  if (u.size() > 2)
    throw std::invalid_argument("index_by_quadrature: |u| <= 2 required");
  const auto f_xu = marginal_density(model, u);
  const auto& joint = densities.joint(u);
  std::vector<Axis> axes;
  for (int i : u.indices()) {
    const double m = model.coordinate_mean(i);
    const double s = model.coordinate_std(i);
    axes.push_back({m - config.box_sigmas * s, m + config.box_sigmas * s});
  }
  axes.push_back({densities.y_mean() - config.box_sigmas * densities.y_std(),
                  densities.y_mean() + config.box_sigmas * densities.y_std()});
  const GaussRule base = gauss_rule(BasisFamily::kLegendre, config.points_per_panel);
  double prev = tensor_pass(densities, f_xu, joint, gf, axes,
                            config.initial_panels, base);
  int panels = config.initial_panels;
  for (int r = 0; r < config.max_doublings; ++r) {
    panels *= 2;
    const double cur = tensor_pass(densities, f_xu, joint, gf, axes, panels, base);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-12});
    if (std::abs(cur - prev) <= config.rel_tol * scale) return cur;
    prev = cur;
  }
  throw std::runtime_error("index_by_quadrature: refinement did not converge");
}

double gaussian_divergence_closed_form(const std::string& divergence, double mean1,
                                       double var1, double mean2, double var2) {
  if (!(var1 > 0.0 && var2 > 0.0))
    throw std::invalid_argument("gaussian closed form: variances must be > 0");
  const double dmu = mean1 - mean2;
  if (divergence == "kl")
    return 0.5 * (std::log(var2 / var1) + var1 / var2 + dmu * dmu / var2 - 1.0);
  if (divergence == "rkl")
    return 0.5 * (std::log(var1 / var2) + var2 / var1 + dmu * dmu / var1 - 1.0);
  if (divergence == "tv") {
    if (std::abs(var1 - var2) > 1e-12 * std::max(var1, var2))
      throw std::invalid_argument(
          "gaussian closed form: tv requires equal variances");
    const double sd = std::sqrt(var1);
    return 2.0 * (2.0 * normal_cdf(std::abs(dmu) / (2.0 * sd)) - 1.0);
  }
  if (divergence == "hellinger") {
    const double s1 = std::sqrt(var1), s2 = std::sqrt(var2);
    const double bc = std::sqrt(2.0 * s1 * s2 / (var1 + var2)) *
                      std::exp(-dmu * dmu / (4.0 * (var1 + var2)));
    return 2.0 * (1.0 - bc);
  }
  throw std::invalid_argument("gaussian closed form: unsupported divergence '" +
                              divergence + "'");
}

}  // namespace fsens
