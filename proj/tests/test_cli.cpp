#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "peg/runner.hpp"

using namespace peg;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("peg_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(PEG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig cfg = parse_config(R"({"T": 6, "replications": 2})");
  cfg.out_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("simulate writes the full file set") {
  const fs::path out = fresh_dir("simulate");
  const SimulateResult result = cmd_simulate(small_config(out));
  CHECK(result.replications.size() == 2);
  for (const char* name :
       {"payments.csv", "policies.csv", "votes.csv", "regret.csv",
        "convergence.csv", "summary.json"}) {
    CHECK(fs::exists(out / name));
    CHECK_FALSE(fs::exists(out / (std::string(name) + ".tmp")));
  }
  const std::string payments = read_file(out / "payments.csv");
  CHECK(payments.find("config_hash=") != std::string::npos);
  CHECK(payments.find("seed=42") != std::string::npos);
  CHECK(payments.find("rep,t,agent,payment,normalized") != std::string::npos);
}

TEST_CASE("simulate is byte-identical across runs and job counts") {
  const fs::path out_a = fresh_dir("sim_a");
  const fs::path out_b = fresh_dir("sim_b");
  const fs::path out_c = fresh_dir("sim_c");
  ExperimentConfig cfg = parse_config(R"({"T": 5, "replications": 3})");

  cfg.out_dir = out_a.string();
  cmd_simulate(cfg, 1);
  cfg.out_dir = out_b.string();
  cmd_simulate(cfg, 1);
  cfg.out_dir = out_c.string();
  cmd_simulate(cfg, 3);

  for (const char* name : {"payments.csv", "policies.csv", "votes.csv",
                           "regret.csv", "convergence.csv"}) {
    const std::string a = read_file(out_a / name);
    CHECK(a == read_file(out_b / name));
    CHECK(a == read_file(out_c / name));
  }
}

TEST_CASE("different seeds produce different runs") {
  const fs::path out_a = fresh_dir("seed_a");
  const fs::path out_b = fresh_dir("seed_b");
  ExperimentConfig cfg = small_config(out_a);
  cmd_simulate(cfg);
  cfg.seed = 4243;
  cfg.out_dir = out_b.string();
  cmd_simulate(cfg);
  CHECK(read_file(out_a / "votes.csv") != read_file(out_b / "votes.csv"));
}

TEST_CASE("verify passes on the default informative world") {
  const fs::path out = fresh_dir("verify");
  ExperimentConfig cfg = parse_config(R"({"verify": {"samples": 4000}})");
  cfg.out_dir = out.string();
  const VerifyReport report = cmd_verify(cfg);
  REQUIRE(report.checks.size() == 6);
  for (const auto& check : report.checks) {
    INFO(check.name, " measured=", check.measured);
    CHECK(check.status == "PASS");
  }
  CHECK(report.all_pass());
  CHECK(fs::exists(out / "verify_report.json"));
}

TEST_CASE("verify skips dominance for an uninformative world") {
  const fs::path out = fresh_dir("verify_skip");
  // Coin-flip discriminators make every peer pair uninformative.
  ExperimentConfig cfg = parse_config(R"({
    "n": 2,
    "confusion_accuracies": [0.5, 0.5],
    "verify": {"samples": 1000}
  })");
  cfg.out_dir = out.string();
  const VerifyReport report = cmd_verify(cfg);
  bool saw_skip = false;
  for (const auto& check : report.checks) {
    if (check.name == "dominance") {
      CHECK(check.status == "SKIPPED(UninformativePeer)");
      saw_skip = true;
    }
  }
  CHECK(saw_skip);
}

TEST_CASE("sweep emits one row per batch size and replication") {
  const fs::path out = fresh_dir("sweep");
  ExperimentConfig cfg = parse_config(R"({"T": 4, "replications": 2})");
  cfg.out_dir = out.string();
  const std::vector<SweepRow> rows = cmd_sweep(cfg, 4, 6, 2);
  CHECK(rows.size() == 6);
  CHECK(rows.front().task_count == 4);
  CHECK(rows.back().task_count == 6);
  CHECK(fs::exists(out / "sweep.csv"));

  const std::vector<SweepRow> single = cmd_sweep(cfg, 5, 5, 1);
  CHECK(single.size() == 2);

  CHECK_THROWS_WITH_AS(cmd_sweep(cfg, 3, 6, 1), doctest::Contains("k_min"),
                       Error);
  CHECK_THROWS_WITH_AS(batch_size_sweep(cfg, {3}),
                       doctest::Contains("BatchTooSmall"), Error);
}

TEST_CASE("sweep rows are deterministic in the seed") {
  ExperimentConfig cfg = parse_config(R"({"T": 4})");
  cfg.out_dir = fresh_dir("sweep_det").string();
  const auto a = batch_size_sweep(cfg, {4, 8});
  const auto b = batch_size_sweep(cfg, {4, 8});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].vote_accuracy == b[i].vote_accuracy);
    CHECK(a[i].mean_payment == b[i].mean_payment);
  }
}

TEST_CASE("regret run stays under the surrogate bound") {
  const fs::path out = fresh_dir("regret");
  ExperimentConfig cfg = parse_config(R"({
    "T": 256,
    "schedule": {"kind": "doubling", "grad_bound": 1.0}
  })");
  cfg.out_dir = out.string();
  const RegretRunResult result = cmd_regret(cfg);
  REQUIRE(result.record.regret.size() == 256);
  for (std::size_t t = 0; t < result.record.regret.size(); ++t) {
    CHECK(result.record.regret[t] <= result.record.bound_sqrt_t[t]);
    CHECK(result.record.regret[t] >= -1e-9);
  }
  CHECK(fs::exists(out / "regret_run.csv"));
  CHECK(fs::exists(out / "regret_summary.json"));

  ExperimentConfig constant = parse_config("{}");
  constant.out_dir = out.string();
  CHECK_THROWS_WITH_AS(cmd_regret(constant), doctest::Contains("schedule"),
                       Error);
}

TEST_CASE("binary: subcommands, exit codes, and seed overrides") {
  const fs::path dir = fresh_dir("binary");
  const fs::path config_path = dir / "config.json";
  write_file_atomic(config_path,
                    R"({"T": 4, "replications": 1, "seed": 7})");

  CHECK(run_cli("simulate --config " + config_path.string() + " --out " +
                (dir / "a").string()) == 0);
  CHECK(fs::exists(dir / "a" / "payments.csv"));

  // Same config and seed: byte-identical CSVs.
  CHECK(run_cli("simulate --config " + config_path.string() + " --out " +
                (dir / "b").string() + " --jobs 2") == 0);
  CHECK(read_file(dir / "a" / "votes.csv") ==
        read_file(dir / "b" / "votes.csv"));

  // Flag override changes the stream.
  CHECK(run_cli("simulate --config " + config_path.string() + " --seed 8 " +
                "--out " + (dir / "c").string()) == 0);
  CHECK(read_file(dir / "a" / "votes.csv") !=
        read_file(dir / "c" / "votes.csv"));

  // Env override behaves like the flag.
  setenv("PEG_SEED", "8", 1);
  CHECK(run_cli("simulate --config " + config_path.string() + " --out " +
                (dir / "d").string()) == 0);
  unsetenv("PEG_SEED");
  CHECK(read_file(dir / "c" / "votes.csv") ==
        read_file(dir / "d" / "votes.csv"));

  // Config errors exit 2.
  const fs::path bad = dir / "bad.json";
  write_file_atomic(bad, R"({"K": 3})");
  CHECK(run_cli("simulate --config " + bad.string()) == 2);
  const fs::path malformed = dir / "malformed.json";
  write_file_atomic(malformed, "{oops");
  CHECK(run_cli("simulate --config " + malformed.string()) == 2);

  // Sweep range errors exit 2.
  CHECK(run_cli("sweep --config " + config_path.string() +
                " --k-min 2 --k-max 6 --out " + (dir / "s").string()) == 2);
}

TEST_CASE("binary: verify exits zero on the default world") {
  const fs::path dir = fresh_dir("binary_verify");
  const fs::path config_path = dir / "config.json";
  write_file_atomic(config_path, R"({"verify": {"samples": 2000}})");
  CHECK(run_cli("verify --config " + config_path.string() + " --out " +
                (dir / "v").string()) == 0);
  CHECK(fs::exists(dir / "v" / "verify_report.json"));
}
