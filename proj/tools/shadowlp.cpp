// shadowlp: solve one instance, run experiment grids, or run the acceptance battery.

#include "shadowlp/instance_io.hpp"
#include "shadowlp/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace shadowlp;

constexpr int kExitNumeric = 1;
constexpr int kExitParse = 2;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct ExperimentFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> threads;
  bool no_timing = false;
};

ExperimentConfig resolve(const ExperimentFlags& f) {
  ExperimentConfig cfg = load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (!f.out.empty()) cfg.out = f.out;
  if (f.threads) cfg.threads = *f.threads;
  if (f.no_timing) cfg.timing = false;
  cfg.validate();
  return cfg;
}

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config")->required();
  cmd->add_option("--seed", f.seed, "Override the config seed");
  cmd->add_option("--out", f.out, "CSV output path (default: config 'out' or stdout)");
  cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-timing", f.no_timing, "Leave the wall_ms column empty");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shadow-vertex simplex for smoothed linear programs"};
  app.require_subcommand(1);

  std::string instance_path;
  std::uint64_t solve_seed = 0;
  auto* solve = app.add_subcommand("solve", "Solve max <z, x> s.t. Ax <= b from a JSON instance");
  solve->add_option("instance", instance_path, "Instance file")->required();
  solve->add_option("--seed", solve_seed, "Seed for the randomized phase-I");

  ExperimentFlags pivots_flags, sections_flags;
  auto* pivots = app.add_subcommand("experiment-pivots", "Pivot counts over an (n, d, sigma) grid");
  add_experiment_flags(pivots, pivots_flags);
  auto* sections = app.add_subcommand("experiment-sections", "Edge counts of random planar sections");
  add_experiment_flags(sections, sections_flags);

  VerifyConfig vcfg;
  std::string verify_config, verify_out;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suites");
  verify->add_option("--config", verify_config, "JSON file with optional seed, suites, threads, pivot_centers");
  verify->add_option("--seed", vcfg.seed, "Base seed");
  verify->add_option("--suites", vcfg.suites, "Suite ids to run (default: all)")->delimiter(',');
  verify->add_option("--threads", vcfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--out", verify_out, "Write the JSON summary here (default: stdout)");
  verify->add_flag("--inject-pivot-fault", vcfg.invert_ratio_test, "Invert the ratio test (mutation smoke test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*solve) {
      const LP lp = load_instance(instance_path);
      RandomStream rng(solve_seed);
      const LPResult res = solve_lp(lp, rng);
      std::cout << format_report(lp, res);
      return 0;
    }
    if (*pivots) {
      const ExperimentConfig cfg = resolve(pivots_flags);
      write_output(cfg.out, pivots_csv(run_pivot_experiment(cfg), cfg.timing));
      return 0;
    }
    if (*sections) {
      const ExperimentConfig cfg = resolve(sections_flags);
      write_output(cfg.out, sections_csv(run_section_experiment(cfg), cfg.timing));
      return 0;
    }
    if (*verify) {
      if (!verify_config.empty()) {
        const auto doc = nlohmann::json::parse(read_file(verify_config));
        if (doc.contains("seed") && !verify->count("--seed")) vcfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("suites") && !verify->count("--suites")) vcfg.suites = doc["suites"].get<std::vector<int>>();
        if (doc.contains("threads") && !verify->count("--threads")) vcfg.threads = doc["threads"].get<int>();
        if (doc.contains("pivot_centers"))
          vcfg.pivot_centers = parse_center_family(doc["pivot_centers"].get<std::string>());
      }
      const VerifyReport report =
          run_verify(vcfg, [](const SuiteResult& r) { std::cerr << format_line(r) << std::endl; });
      write_output(verify_out, report.json() + "\n");
      return report.passed() ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
