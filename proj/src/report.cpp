#include "fsens/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <json.hpp>

#include "fsens/divergence.hpp"

namespace fsens {

namespace {

std::string fmt_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void SensitivityReport::derive_rankings() {
  ranks.clear();
  for (const auto& div : divergence_order) {
    std::vector<std::pair<std::size_t, double>> entries;  // subset pos, value
    for (std::size_t s = 0; s < subset_order.size(); ++s) {
      for (const auto& est : estimates)
        if (est.divergence == div && est.subset.label() == subset_order[s]) {
          const double v = std::isnan(est.value)
                               ? -std::numeric_limits<double>::infinity()
                               : est.value;
          entries.emplace_back(s, v);
          break;
        }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<int> rank(subset_order.size(), 0);
    for (std::size_t pos = 0; pos < entries.size(); ++pos)
      rank[entries[pos].first] = static_cast<int>(pos) + 1;
    ranks[div] = std::move(rank);
  }
}

int SensitivityReport::rank_of(const std::string& divergence,
                               const std::string& subset_label) const {
  const auto it = ranks.find(divergence);
  if (it == ranks.end()) return 0;
  for (std::size_t s = 0; s < subset_order.size(); ++s)
    if (subset_order[s] == subset_label) return it->second[s];
  return 0;
}

std::string SensitivityReport::to_csv() const {
  std::string csv =
      "subset,divergence,method,L,S,m,n,value,scaled_value,rank,"
      "inf_term_count,model_evals,seconds\n";
  for (const auto& div : divergence_order) {
    for (const auto& label : subset_order) {
      const SensitivityEstimate* est = nullptr;
      for (const auto& e : estimates)
        if (e.divergence == div && e.subset.label() == label) {
          est = &e;
          break;
        }
      if (!est) continue;
      csv += label;
      csv += ',' + div;
      csv += ',' + est->method;
      csv += ',';
      if (est->L > 0) csv += std::to_string(est->L);
      csv += ',';
      if (est->pdd_S > 0) csv += std::to_string(est->pdd_S);
      csv += ',';
      if (est->pdd_m > 0) csv += std::to_string(est->pdd_m);
      csv += ',';
      if (est->pdd_n > 0) csv += std::to_string(est->pdd_n);
      csv += ',' + fmt_value(est->value);
      csv += ',';
      const double bound = range_upper_bound(GeneratingFunction::parse(div));
      if (std::isfinite(bound)) csv += fmt_value(est->value / bound);
      csv += ',' + std::to_string(rank_of(div, label));
      csv += ',' + std::to_string(est->inf_terms);
      csv += ',' + std::to_string(est->model_evals);
      csv += ',';  // seconds: reproducibility over timing detail
      csv += '\n';
    }
  }
  return csv;
}

std::string SensitivityReport::to_json() const {
  nlohmann::json j;
  j["provenance"] = {
      {"config_hash", config_hash},   {"seed", seed},
      {"code_version", code_version}, {"rng_algorithm", rng_algorithm},
      {"model_evals", model_evals},   {"wall_seconds", wall_seconds},
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& est : estimates) {
    nlohmann::json e;
    e["subset"] = est.subset.indices();
    e["divergence"] = est.divergence;
    e["method"] = est.method;
    e["value"] = est.value;
    e["L"] = est.L;
    e["seed"] = est.seed;
    e["rank"] = rank_of(est.divergence, est.subset.label());
    e["inf_terms"] = est.inf_terms;
    e["zero_density_terms"] = est.zero_density_terms;
    e["unreliable"] = est.unreliable;
    e["model_evals"] = est.model_evals;
    if (std::isfinite(est.standard_error)) e["standard_error"] = est.standard_error;
    if (!est.bandwidths.empty()) e["bandwidths"] = est.bandwidths;
    if (est.pdd_S > 0)
      e["pdd"] = {{"S", est.pdd_S}, {"m", est.pdd_m}, {"n", est.pdd_n}};
    const double bound = range_upper_bound(GeneratingFunction::parse(est.divergence));
    if (std::isfinite(bound)) e["scaled_value"] = est.value / bound;
    arr.push_back(e);
  }
  j["estimates"] = arr;
  nlohmann::json jr;
  for (const auto& [div, rank] : ranks) jr[div] = rank;
  j["rankings"] = jr;
  j["subset_order"] = subset_order;
  return j.dump(2);
}

}  // namespace fsens
