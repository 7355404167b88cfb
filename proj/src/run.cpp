#include "fsens/run.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "fsens/oracle.hpp"
#include "fsens/rng.hpp"
#include "fsens/serialization.hpp"

namespace fsens {

namespace fs = std::filesystem;

namespace {

ModelFunction make_model(const RunConfig& cfg) {
  if (!cfg.model.builtin.empty()) return builtin_model(cfg.model.builtin);
  ExternalModelOptions opt;
  opt.batch_size = cfg.model.batch_size;
  opt.transport = cfg.model.transport;
  return external_model(cfg.model.external_cmd, cfg.model.external_dimension, opt);
}

Eigen::VectorXd linear6_coefficients() {
  Eigen::VectorXd a(6);
  a << 1.0, 1.1, 1.2, 1.3, 1.4, 1.5;
  return a;
}

std::uint64_t input_spec_hash(const RunConfig& cfg) {
  const std::string dump = cfg.raw.at("inputs").dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Columnar sample cache: raw doubles (inputs column-major, then outputs)
// with a JSON sidecar describing the key. Reused across methods within
// one invocation and across invocations sharing an output directory.
class SampleCache {
 public:
  explicit SampleCache(fs::path dir) : dir_(std::move(dir)) {}

  SampleSet get(const ModelFunction& model, const InputModel& input,
                std::uint64_t input_hash, std::size_t L, std::uint64_t seed) {
    char name[128];
    std::snprintf(name, sizeof(name), "%s_%016llx_%zu_%llu",
                  sanitise(model.id()).c_str(),
                  static_cast<unsigned long long>(input_hash), L,
                  static_cast<unsigned long long>(seed));
    const fs::path bin = dir_ / (std::string(name) + ".bin");
    const fs::path sidecar = dir_ / (std::string(name) + ".json");
    const std::size_t N = static_cast<std::size_t>(model.dimension());
    if (fs::exists(bin) && fs::exists(sidecar)) {
      SampleSet s;
      if (load(bin, sidecar, model.id(), L, N, seed, s)) return s;
    }
    SampleSet s = draw_sample_set(model, input, L, seed);
    store(bin, sidecar, s);
    return s;
  }

 private:
  static std::string sanitise(const std::string& id) {
    std::string out;
    for (char c : id)
      out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out.substr(0, 48);
  }

  bool load(const fs::path& bin, const fs::path& sidecar, const std::string& id,
            std::size_t L, std::size_t N, std::uint64_t seed, SampleSet& out) {
    try {
      nlohmann::json meta;
      std::ifstream(sidecar) >> meta;
      if (meta.at("model").get<std::string>() != id ||
          meta.at("L").get<std::size_t>() != L ||
          meta.at("N").get<std::size_t>() != N ||
          meta.at("seed").get<std::uint64_t>() != seed)
        return false;
      std::ifstream f(bin, std::ios::binary);
      out.inputs.resize(L, N);
      out.outputs.resize(L);
      f.read(reinterpret_cast<char*>(out.inputs.data()),
             static_cast<std::streamsize>(sizeof(double) * L * N));
      f.read(reinterpret_cast<char*>(out.outputs.data()),
             static_cast<std::streamsize>(sizeof(double) * L));
      if (!f) return false;
      out.model_id = id;
      out.seed = seed;
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }

  void store(const fs::path& bin, const fs::path& sidecar, const SampleSet& s) {
    fs::create_directories(dir_);
    std::ofstream f(bin, std::ios::binary);
    f.write(reinterpret_cast<const char*>(s.inputs.data()),
            static_cast<std::streamsize>(sizeof(double) * s.inputs.size()));
    f.write(reinterpret_cast<const char*>(s.outputs.data()),
            static_cast<std::streamsize>(sizeof(double) * s.outputs.size()));
    nlohmann::json meta;
    meta["model"] = s.model_id;
    meta["L"] = s.size();
    meta["N"] = static_cast<std::size_t>(s.inputs.cols());
    meta["seed"] = s.seed;
    meta["columns"] = "inputs column-major, then outputs";
    std::ofstream(sidecar) << meta.dump(2) << '\n';
  }

  fs::path dir_;
};

std::vector<GeneratingFunction> parse_divergences(const RunConfig& cfg) {
  std::vector<GeneratingFunction> gfs;
  for (const auto& name : cfg.divergences)
    gfs.push_back(GeneratingFunction::parse(name));
  return gfs;
}

// Estimates for one configuration; shared by run() and the sweep.
std::vector<SensitivityEstimate> compute_estimates(const RunConfig& cfg,
                                                   std::size_t L,
                                                   std::uint64_t seed,
                                                   long long* model_evals) {
  const auto gfs = parse_divergences(cfg);
  std::vector<SensitivityEstimate> out;

  if (cfg.method == "oracle") {
    GaussianLinearOracle oracle(linear6_coefficients(), cfg.input);
    ExactDensityProvider provider = oracle.densities(cfg.subsets);
    for (const auto& gf : gfs)
      for (const auto& u : cfg.subsets) {
        SensitivityEstimate est;
        est.subset = u;
        est.divergence = gf.name();
        est.method = "oracle";
        try {
          est.value = index_by_quadrature(provider, cfg.input, u, gf);
        } catch (const std::runtime_error& e) {
          throw NumericError(e.what());
        }
        out.push_back(est);
      }
    return out;
  }

  ModelFunction model = make_model(cfg);

  if (cfg.method == "mc") {
    GaussianLinearOracle oracle(linear6_coefficients(), cfg.input);
    ExactDensityProvider provider = oracle.densities(cfg.subsets);
    SampleCache cache(fs::path(cfg.output_dir) / "cache");
    SampleSet samples = cache.get(model, cfg.input, input_spec_hash(cfg), L, seed);
    for (const auto& gf : gfs)
      for (const auto& u : cfg.subsets)
        out.push_back(estimate_mc(samples, provider, cfg.input, u, gf));
    if (model_evals) *model_evals += static_cast<long long>(L);
    return out;
  }

  if (cfg.method == "kde_mc") {
    SampleCache cache(fs::path(cfg.output_dir) / "cache");
    SampleSet samples = cache.get(model, cfg.input, input_spec_hash(cfg), L, seed);
    KdeMcEngine engine(samples, cfg.input, cfg.kde);
    for (const auto& gf : gfs)
      for (const auto& u : cfg.subsets) out.push_back(engine.estimate(u, gf));
    if (model_evals) *model_evals += static_cast<long long>(L);
    return out;
  }

  // pdd_kde_mc
  long long surrogate_cost = 0;
  PddSurrogate pdd = [&]() -> PddSurrogate {
    if (cfg.pdd.load_path) return build_surrogate(cfg);
    PddSurrogate built = compute_coefficients(model, cfg.input, cfg.pdd.S,
                                              cfg.pdd.m, cfg.pdd.n());
    surrogate_cost = model.eval_count();
    return built;
  }();
  SampleSet surrogate_samples;
  surrogate_samples.inputs = sample(cfg.input, L, seed);
  surrogate_samples.outputs = pdd.eval_batch(surrogate_samples.inputs);
  surrogate_samples.model_id = "pdd_" + model.id();
  surrogate_samples.seed = seed;
  KdeMcEngine engine(surrogate_samples, cfg.input, cfg.kde);
  for (const auto& gf : gfs)
    for (const auto& u : cfg.subsets) {
      SensitivityEstimate est = engine.estimate(u, gf);
      est.method = "pdd_kde_mc";
      est.pdd_S = pdd.S();
      est.pdd_m = pdd.m();
      est.pdd_n = pdd.n();
      est.model_evals = surrogate_cost;
      out.push_back(est);
    }
  if (model_evals) *model_evals += surrogate_cost;
  return out;
}

}  // namespace

PddSurrogate build_surrogate(const RunConfig& cfg) {
  if (cfg.pdd.load_path) {
    std::ifstream in(*cfg.pdd.load_path);
    if (!in)
      throw ConfigError("config error at $.pdd.load: cannot open '" +
                        *cfg.pdd.load_path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return PddSurrogate::from_json(text);
  }
  ModelFunction model = make_model(cfg);
  try {
    return compute_coefficients(model, cfg.input, cfg.pdd.S, cfg.pdd.m,
                                cfg.pdd.n());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config error at $.pdd: ") + e.what());
  }
}

SensitivityReport run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SensitivityReport report;
  report.config_hash = cfg.hash();
  report.seed = cfg.seed;
  report.code_version = kCodeVersion;
  report.rng_algorithm = kRngAlgorithm;
  for (const auto& u : cfg.subsets) report.subset_order.push_back(u.label());
  for (const auto& d : cfg.divergences) report.divergence_order.push_back(d);

  long long evals = 0;
  try {
    report.estimates = compute_estimates(cfg, cfg.L, cfg.seed, &evals);
  } catch (const std::invalid_argument& e) {
    throw NumericError(e.what());
  }
  report.model_evals = evals;
  report.derive_rankings();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fs::create_directories(cfg.output_dir);
  std::ofstream(fs::path(cfg.output_dir) / "report.csv") << report.to_csv();
  std::ofstream(fs::path(cfg.output_dir) / "report.json") << report.to_json()
                                                          << '\n';
  return report;
}

std::vector<SweepCell> convergence_sweep(const RunConfig& cfg,
                                         const SweepOptions& options) {
  if (options.L_values.empty())
    throw ConfigError("sweep: at least one L value is required");
  if (options.replicates < 1) throw ConfigError("sweep: replicates must be >= 1");
  if (cfg.method == "oracle")
    throw ConfigError("sweep: pick a sampling method; oracle is the reference");

  // Reference values: pinned in the config, otherwise oracle quadrature
  // (linear6 over a Gaussian law).
  const auto gfs = parse_divergences(cfg);
  std::map<std::string, double> reference = cfg.reference;
  const bool oracle_capable = cfg.model.builtin == "linear6";
  if (reference.empty() && !oracle_capable)
    throw ConfigError(
        "sweep: no $.reference block and no oracle reference for this model");
  if (reference.empty()) {
    GaussianLinearOracle oracle(linear6_coefficients(), cfg.input);
    ExactDensityProvider provider = oracle.densities(cfg.subsets);
    for (const auto& gf : gfs)
      for (const auto& u : cfg.subsets)
        reference[u.label() + ":" + gf.name()] =
            index_by_quadrature(provider, cfg.input, u, gf);
  }
  for (const auto& gf : gfs)
    for (const auto& u : cfg.subsets)
      if (!reference.count(u.label() + ":" + gf.name()))
        throw ConfigError("sweep: missing reference for " + u.label() + ":" +
                          gf.name());

  std::vector<SweepCell> cells;
  for (std::size_t L : options.L_values) {
    for (int r = 0; r < options.replicates; ++r) {
      const std::uint64_t seed_r = rng_substream(cfg.seed, static_cast<std::uint64_t>(r));
      const auto estimates = compute_estimates(cfg, L, seed_r, nullptr);
      for (const auto& est : estimates) {
        SweepCell cell;
        cell.subset = est.subset.label();
        cell.divergence = est.divergence;
        cell.L = L;
        cell.replicate = r;
        cell.value = est.value;
        cell.reference = reference.at(cell.subset + ":" + cell.divergence);
        cell.rel_error = std::abs(est.value - cell.reference) /
                         std::max(std::abs(cell.reference), 1e-300);
        cells.push_back(cell);
      }
    }
  }

  fs::create_directories(cfg.output_dir);
  {
    std::ofstream csv(fs::path(cfg.output_dir) / "sweep.csv");
    csv << "subset,divergence,L,replicate,value,reference,rel_error\n";
    char buf[160];
    for (const auto& c : cells) {
      std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%d,%.12g,%.12g,%.12g\n",
                    c.subset.c_str(), c.divergence.c_str(), c.L, c.replicate,
                    c.value, c.reference, c.rel_error);
      csv << buf;
    }
  }
  {
    std::ofstream csv(fs::path(cfg.output_dir) / "sweep_summary.csv");
    csv << "subset,divergence,L,mean_rel_error,min_rel_error,max_rel_error\n";
    for (const auto& gf : gfs)
      for (const auto& u : cfg.subsets)
        for (std::size_t L : options.L_values) {
          double sum = 0, lo = 1e300, hi = -1e300;
          int n = 0;
          for (const auto& c : cells)
            if (c.L == L && c.subset == u.label() && c.divergence == gf.name()) {
              sum += c.rel_error;
              lo = std::min(lo, c.rel_error);
              hi = std::max(hi, c.rel_error);
              ++n;
            }
          char buf[160];
          std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%.12g,%.12g,%.12g\n",
                        u.label().c_str(), gf.name().c_str(), L, sum / n, lo, hi);
          csv << buf;
        }
  }
  return cells;
}

}  // namespace fsens
