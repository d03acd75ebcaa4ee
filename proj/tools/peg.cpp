#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "peg/runner.hpp"

namespace {

int exit_code_for(const peg::Error& e) {
  switch (e.code()) {
    case peg::ErrorCode::ParseError:
    case peg::ErrorCode::ValidationError:
      return 2;
    default:
      return 3;
  }
}

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  CLI::Option* seed_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    seed_opt = cmd->add_option("--seed", seed, "override the config seed");
    cmd->add_option("--jobs", jobs, "max concurrent replications")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", out_dir, "output directory override");
  }

  peg::ExperimentConfig resolve() const {
    std::string text = "{}";
    if (!config_path.empty()) text = peg::read_file(config_path);
    peg::ExperimentConfig config = peg::parse_config(text);
    if (const char* env = std::getenv("PEG_SEED")) {
      char* end = nullptr;
      const unsigned long long value = std::strtoull(env, &end, 10);
      peg::require(end != env && *end == '\0', peg::ErrorCode::ValidationError,
                   std::string("PEG_SEED: not an integer: ") + env);
      config.seed = value;
    }
    if (seed_opt != nullptr && seed_opt->count() > 0) config.seed = seed;
    if (!out_dir.empty()) config.out_dir = out_dir;
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peer elicitation game simulation lab"};
  app.require_subcommand(1);

  CommonOptions simulate_opts;
  CLI::App* simulate =
      app.add_subcommand("simulate", "run the two-phase PEG loop");
  simulate_opts.attach(simulate);

  CommonOptions verify_opts;
  CLI::App* verify =
      app.add_subcommand("verify", "run the brute-force oracle suite");
  verify_opts.attach(verify);

  CommonOptions sweep_opts;
  int k_min = 0;
  int k_max = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "batch-size sweep");
  sweep_opts.attach(sweep);
  CLI::Option* k_min_opt = sweep->add_option("--k-min", k_min, "smallest K");
  CLI::Option* k_max_opt = sweep->add_option("--k-max", k_max, "largest K");

  CommonOptions regret_opts;
  CLI::App* regret = app.add_subcommand(
      "regret", "deterministic online-mirror-descent regret run");
  regret_opts.attach(regret);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const peg::ExperimentConfig config = simulate_opts.resolve();
      const peg::SimulateResult result =
          peg::cmd_simulate(config, simulate_opts.jobs);
      std::cout << "wrote " << result.files.size() << " files to "
                << config.out_dir << " in " << result.wall_clock_seconds
                << "s\n";
      return 0;
    }
    if (verify->parsed()) {
      const peg::ExperimentConfig config = verify_opts.resolve();
      const peg::VerifyReport report = peg::cmd_verify(config);
      for (const auto& check : report.checks) {
        std::cout << "[" << check.status << "] " << check.name
                  << " measured=" << peg::format_double(check.measured) << " ("
                  << check.detail << ")\n";
      }
      return report.all_pass() ? 0 : 1;
    }
    if (sweep->parsed()) {
      const peg::ExperimentConfig config = sweep_opts.resolve();
      const int lo = k_min_opt->count() > 0 ? k_min : config.sweep_k_min;
      const int hi = k_max_opt->count() > 0 ? k_max : config.sweep_k_max;
      const auto rows = peg::cmd_sweep(config, lo, hi, sweep_opts.jobs);
      std::cout << "wrote " << rows.size() << " sweep rows to "
                << config.out_dir << "/sweep.csv\n";
      return 0;
    }
    if (regret->parsed()) {
      const peg::ExperimentConfig config = regret_opts.resolve();
      const peg::RegretRunResult result = peg::cmd_regret(config);
      std::cout << "T=" << result.record.regret.size()
                << " final_regret=" << peg::format_double(result.final_regret)
                << " bound=" << peg::format_double(result.record.bound_sqrt_t.back())
                << " slope=" << peg::format_double(result.slope) << "\n";
      return 0;
    }
  } catch (const peg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
