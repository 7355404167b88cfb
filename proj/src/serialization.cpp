#include "fsens/serialization.hpp"

#include <stdexcept>

namespace fsens {

using nlohmann::json;

MarginalDistribution marginal_from_json(const json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "gaussian")
    return MarginalDistribution::gaussian(spec.at("mean").get<double>(),
                                          spec.at("std").get<double>());
  if (kind == "uniform")
    return MarginalDistribution::uniform(spec.at("lower").get<double>(),
                                         spec.at("upper").get<double>());
  if (kind == "lognormal") {
    if (spec.contains("log_mean"))
      return MarginalDistribution::lognormal_log_params(
          spec.at("log_mean").get<double>(), spec.at("log_std").get<double>());
    if (spec.contains("error_factor"))
      return MarginalDistribution::lognormal_mean_error_factor(
          spec.at("mean").get<double>(), spec.at("error_factor").get<double>());
    return MarginalDistribution::lognormal_mean_std(spec.at("mean").get<double>(),
                                                    spec.at("std").get<double>());
  }
  throw std::invalid_argument("unknown marginal kind '" + kind + "'");
}

static json marginal_to_json(const MarginalDistribution& m) {
  switch (m.kind()) {
    case MarginalKind::kGaussian:
      return {{"kind", "gaussian"}, {"mean", m.a()}, {"std", m.b()}};
    case MarginalKind::kUniform:
      return {{"kind", "uniform"}, {"lower", m.a()}, {"upper", m.b()}};
    case MarginalKind::kLognormal:
      return {{"kind", "lognormal"}, {"log_mean", m.a()}, {"log_std", m.b()}};
  }
  throw std::logic_error("unreachable marginal kind");
}

json input_model_to_json(const InputModel& model) {
  if (model.independent_law()) {
    json arr = json::array();
    for (const auto& m : model.marginals()) arr.push_back(marginal_to_json(m));
    return arr;
  }
  json j;
  j["kind"] = "correlated_gaussian";
  j["mean"] = std::vector<double>(model.gaussian_mean().data(),
                                  model.gaussian_mean().data() +
                                      model.gaussian_mean().size());
  json cov = json::array();
  for (Eigen::Index r = 0; r < model.covariance().rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < model.covariance().cols(); ++c)
      row.push_back(model.covariance()(r, c));
    cov.push_back(row);
  }
  j["cov"] = cov;
  return j;
}

InputModel input_model_from_json(const json& spec) {
  if (spec.is_array()) {
    std::vector<MarginalDistribution> marginals;
    for (const auto& m : spec) marginals.push_back(marginal_from_json(m));
    return InputModel::independent(std::move(marginals));
  }
  if (!spec.is_object() || spec.value("kind", "") != "correlated_gaussian")
    throw std::invalid_argument(
        "input spec must be a marginal array or a correlated_gaussian object");
  const auto mean = spec.at("mean").get<std::vector<double>>();
  const auto rows = spec.at("cov").get<std::vector<std::vector<double>>>();
  const auto n = static_cast<Eigen::Index>(mean.size());
  Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(mean.data(), n);
  Eigen::MatrixXd cov(n, n);
  if (static_cast<Eigen::Index>(rows.size()) != n)
    throw std::invalid_argument("correlated_gaussian: cov has wrong row count");
  for (Eigen::Index r = 0; r < n; ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != n)
      throw std::invalid_argument("correlated_gaussian: cov has wrong column count");
    for (Eigen::Index c = 0; c < n; ++c) cov(r, c) = rows[r][c];
  }
  return InputModel::correlated_gaussian(std::move(mu), std::move(cov));
}

}  // namespace fsens
