#include "fsens/config.hpp"

#include <fstream>
#include <set>

#include "fsens/divergence.hpp"
#include "fsens/serialization.hpp"

namespace fsens {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

double number_at(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path + "." + key, "missing");
  if (!obj.at(key).is_number()) fail(path + "." + key, "expected a number");
  return obj.at(key).get<double>();
}

ModelSpec parse_model(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  reject_unknown(j, path, {"builtin", "external"});
  ModelSpec spec;
  if (j.contains("builtin") == j.contains("external"))
    fail(path, "exactly one of builtin/external is required");
  if (j.contains("builtin")) {
    spec.builtin = j.at("builtin").get<std::string>();
    if (spec.builtin != "linear6" && spec.builtin != "iman" &&
        spec.builtin != "ishigami")
      fail(path + ".builtin", "unknown builtin '" + spec.builtin + "'");
    return spec;
  }
  const json& e = j.at("external");
  reject_unknown(e, path + ".external", {"cmd", "dimension", "batch_size", "transport"});
  if (!e.contains("cmd")) fail(path + ".external.cmd", "missing");
  spec.external_cmd = e.at("cmd").get<std::string>();
  spec.external_dimension = static_cast<int>(number_at(e, path + ".external", "dimension"));
  if (spec.external_dimension < 1)
    fail(path + ".external.dimension", "must be >= 1");
  if (e.contains("batch_size")) {
    const double b = e.at("batch_size").get<double>();
    if (b < 1) fail(path + ".external.batch_size", "must be >= 1");
    spec.batch_size = static_cast<std::size_t>(b);
  }
  if (e.contains("transport")) {
    spec.transport = e.at("transport").get<std::string>();
    if (spec.transport != "stdin" && spec.transport != "file")
      fail(path + ".external.transport", "must be stdin or file");
  }
  return spec;
}

KdeSettings parse_kde(const json& j, const std::string& path) {
  reject_unknown(j, path, {"bandwidth", "cutoff", "mode", "split_fit"});
  KdeSettings kde;
  if (j.contains("bandwidth")) {
    const json& b = j.at("bandwidth");
    if (b.is_string()) {
      const std::string name = b.get<std::string>();
      if (name == "lscv")
        kde.policy = BandwidthPolicy::kLscv;
      else if (name == "silverman")
        kde.policy = BandwidthPolicy::kSilverman;
      else
        fail(path + ".bandwidth",
             "must be \"lscv\", \"silverman\" or {\"fixed\": [...]}");
    } else if (b.is_object() && b.contains("fixed") && b.size() == 1) {
      kde.policy = BandwidthPolicy::kFixed;
      kde.fixed_bandwidths = b.at("fixed").get<std::vector<double>>();
      for (double h : *kde.fixed_bandwidths)
        if (!(h > 0.0)) fail(path + ".bandwidth.fixed", "bandwidths must be > 0");
    } else {
      fail(path + ".bandwidth",
           "must be \"lscv\", \"silverman\" or {\"fixed\": [...]}");
    }
  }
  if (j.contains("cutoff")) {
    kde.cutoff = j.at("cutoff").get<double>();
    if (!(kde.cutoff > 0.0)) fail(path + ".cutoff", "must be > 0");
  }
  if (j.contains("mode")) {
    const std::string m = j.at("mode").get<std::string>();
    if (m == "exact")
      kde.mode = KdeEvalMode::kExact;
    else if (m == "truncated")
      kde.mode = KdeEvalMode::kTruncated;
    else
      fail(path + ".mode", "must be exact or truncated");
  }
  if (j.contains("split_fit")) kde.split_fit = j.at("split_fit").get<bool>();
  return kde;
}

PddSettings parse_pdd(const json& j, const std::string& path) {
  reject_unknown(j, path, {"S", "m", "n", "load"});
  PddSettings pdd;
  if (j.contains("S")) pdd.S = static_cast<int>(number_at(j, path, "S"));
  if (j.contains("m")) pdd.m = static_cast<int>(number_at(j, path, "m"));
  if (pdd.S < 1 || pdd.S > 2) fail(path + ".S", "must be 1 or 2");
  if (pdd.m < 1) fail(path + ".m", "must be >= 1");
  if (j.contains("n")) {
    const json& n = j.at("n");
    if (n.is_string()) {
      if (n.get<std::string>() != "m+1") fail(path + ".n", "must be \"m+1\" or an integer");
      pdd.n_spec = "m+1";
    } else if (n.is_number()) {
      const int v = n.get<int>();
      if (v < 1) fail(path + ".n", "must be >= 1");
      pdd.n_spec = std::to_string(v);
    } else {
      fail(path + ".n", "must be \"m+1\" or an integer");
    }
  }
  if (j.contains("load")) pdd.load_path = j.at("load").get<std::string>();
  return pdd;
}

}  // namespace

RunConfig RunConfig::parse(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config error at $: expected an object");
  reject_unknown(doc, "$",
                 {"model", "inputs", "method", "subsets", "divergences", "L",
                  "seed", "kde", "pdd", "output_dir", "reference"});
  RunConfig cfg;
  cfg.raw = doc;

  if (!doc.contains("model")) fail("$.model", "missing");
  cfg.model = parse_model(doc.at("model"), "$.model");

  if (!doc.contains("inputs")) fail("$.inputs", "missing");
  try {
    cfg.input = input_model_from_json(doc.at("inputs"));
  } catch (const std::exception& e) {
    fail("$.inputs", e.what());
  }
  const int N = cfg.input.dimension();
  const int model_dim = !cfg.model.builtin.empty()
                            ? (cfg.model.builtin == "linear6"   ? 6
                               : cfg.model.builtin == "iman"    ? 7
                                                                : 3)
                            : cfg.model.external_dimension;
  if (N != model_dim)
    fail("$.inputs", "dimension " + std::to_string(N) +
                         " does not match the model dimension " +
                         std::to_string(model_dim));

  if (!doc.contains("method")) fail("$.method", "missing");
  cfg.method = doc.at("method").get<std::string>();
  if (cfg.method != "mc" && cfg.method != "kde_mc" && cfg.method != "pdd_kde_mc" &&
      cfg.method != "oracle")
    fail("$.method", "must be one of mc, kde_mc, pdd_kde_mc, oracle");

  if (!doc.contains("subsets")) fail("$.subsets", "missing");
  if (!doc.at("subsets").is_array() || doc.at("subsets").empty())
    fail("$.subsets", "expected a non-empty array of index arrays");
  for (std::size_t k = 0; k < doc.at("subsets").size(); ++k) {
    const std::string path = "$.subsets[" + std::to_string(k) + "]";
    try {
      cfg.subsets.emplace_back(doc.at("subsets")[k].get<std::vector<int>>());
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
    if (cfg.subsets.back().indices().back() > N) fail(path, "index out of range");
    if (cfg.subsets.back().size() > 2)
      fail(path, "subsets are limited to |u| <= 2");
  }

  if (!doc.contains("divergences")) fail("$.divergences", "missing");
  for (std::size_t k = 0; k < doc.at("divergences").size(); ++k) {
    const std::string path = "$.divergences[" + std::to_string(k) + "]";
    const std::string name = doc.at("divergences")[k].get<std::string>();
    try {
      (void)GeneratingFunction::parse(name);
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
    cfg.divergences.push_back(name);
  }
  if (cfg.divergences.empty()) fail("$.divergences", "expected at least one entry");

  if (cfg.method != "oracle") {
    const double L = number_at(doc, "$", "L");
    if (L < 1 || L != std::floor(L)) fail("$.L", "must be a positive integer");
    cfg.L = static_cast<std::size_t>(L);
    cfg.seed = static_cast<std::uint64_t>(number_at(doc, "$", "seed"));
  } else {
    if (doc.contains("L")) cfg.L = static_cast<std::size_t>(number_at(doc, "$", "L"));
    if (doc.contains("seed"))
      cfg.seed = static_cast<std::uint64_t>(number_at(doc, "$", "seed"));
  }

  if (doc.contains("kde")) cfg.kde = parse_kde(doc.at("kde"), "$.kde");
  if (doc.contains("pdd")) {
    cfg.pdd = parse_pdd(doc.at("pdd"), "$.pdd");
    cfg.pdd_present = true;
  }
  if (cfg.method == "pdd_kde_mc" && !cfg.pdd_present)
    fail("$.pdd", "required when method is pdd_kde_mc");
  if (cfg.method == "pdd_kde_mc" && !cfg.input.independent_law())
    fail("$.inputs",
         "surrogate coefficients need independent input; use method mc for "
         "correlated laws");
  if ((cfg.method == "oracle" || cfg.method == "mc") && cfg.model.builtin != "linear6")
    fail("$.model", "exact densities are available for builtin linear6 only");

  if (doc.contains("output_dir"))
    cfg.output_dir = doc.at("output_dir").get<std::string>();
  if (doc.contains("reference")) {
    if (!doc.at("reference").is_object())
      fail("$.reference", "expected an object of \"subset:divergence\" values");
    for (const auto& [key, value] : doc.at("reference").items()) {
      if (!value.is_number()) fail("$.reference." + key, "expected a number");
      cfg.reference[key] = value.get<double>();
    }
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ConfigError("config error: '" + path + "' is not valid JSON: " + e.what());
  }
  return parse(doc);
}

std::uint64_t RunConfig::hash() const {
  const std::string canonical = raw.dump();  // object keys dump sorted
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fsens
