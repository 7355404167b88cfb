#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fsens/config.hpp"
#include "fsens/run.hpp"

namespace {

// Exit codes: 0 success, 2 configuration error, 3 numeric failure.
constexpr int kConfigExit = 2;
constexpr int kNumericExit = 3;

std::vector<std::size_t> parse_L_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(pos, comma - pos);
    const double v = std::stod(tok);  // accepts 1e4 style
    if (v < 1) throw fsens::ConfigError("sweep: L values must be >= 1");
    out.push_back(static_cast<std::size_t>(v));
    pos = comma + 1;
  }
  return out;
}

void print_report(const fsens::SensitivityReport& report,
                  const std::string& out_dir) {
  std::printf("%-10s %-12s %14s %6s\n", "subset", "divergence", "value", "rank");
  for (const auto& div : report.divergence_order)
    for (const auto& label : report.subset_order)
      for (const auto& est : report.estimates)
        if (est.divergence == div && est.subset.label() == label)
          std::printf("%-10s %-12s %14.6g %6d\n", label.c_str(), div.c_str(),
                      est.value, report.rank_of(div, label));
  std::printf("report written to %s/report.{csv,json} (%.1fs, %lld model evals)\n",
              out_dir.c_str(), report.wall_seconds, report.model_evals);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"density-based global sensitivity indices"};
  app.require_subcommand(1);

  std::string config_path;
  std::string L_list = "1e3,1e4,1e5";
  int replicates = 3;
  std::string surrogate_out = "pdd.json";

  auto* cmd_run = app.add_subcommand("run", "execute a run config");
  cmd_run->add_option("config", config_path, "config JSON path")->required();

  auto* cmd_sweep = app.add_subcommand("sweep", "convergence sweep over sample sizes");
  cmd_sweep->add_option("config", config_path, "config JSON path")->required();
  cmd_sweep->add_option("--L", L_list, "comma-separated sample sizes");
  cmd_sweep->add_option("--replicates", replicates, "replicate seed substreams");

  auto* cmd_surrogate = app.add_subcommand("surrogate", "build and save a surrogate");
  cmd_surrogate->add_option("config", config_path, "config JSON path")->required();
  cmd_surrogate->add_option("--out", surrogate_out, "output JSON path");

  auto* cmd_validate = app.add_subcommand("validate", "schema-check a config");
  cmd_validate->add_option("config", config_path, "config JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (cmd_validate->parsed()) {
      (void)fsens::RunConfig::parse_file(config_path);
      std::printf("ok\n");
      return 0;
    }
    fsens::RunConfig cfg = fsens::RunConfig::parse_file(config_path);
    if (cmd_run->parsed()) {
      const auto report = fsens::run(cfg);
      print_report(report, cfg.output_dir);
      return 0;
    }
    if (cmd_sweep->parsed()) {
      fsens::SweepOptions opt;
      opt.L_values = parse_L_list(L_list);
      opt.replicates = replicates;
      const auto cells = fsens::convergence_sweep(cfg, opt);
      std::printf("sweep wrote %zu cells to %s/sweep.csv\n", cells.size(),
                  cfg.output_dir.c_str());
      return 0;
    }
    if (cmd_surrogate->parsed()) {
      if (cfg.method != "pdd_kde_mc" && !cfg.pdd_present)
        throw fsens::ConfigError("config error at $.pdd: required to build a surrogate");
      const auto pdd = fsens::build_surrogate(cfg);
      std::ofstream out(surrogate_out);
      if (!out)
        throw fsens::ConfigError("cannot write surrogate to '" + surrogate_out + "'");
      out << pdd.to_json() << '\n';
      std::printf("surrogate with %zu terms written to %s\n", pdd.terms().size(),
                  surrogate_out.c_str());
      return 0;
    }
  } catch (const fsens::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kConfigExit;
  } catch (const fsens::NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kNumericExit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericExit;
  }
  return 0;
}
