#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "peg/analysis.hpp"
#include "peg/config.hpp"
#include "peg/csv.hpp"
#include "peg/oracle.hpp"

namespace peg {

// Everything recorded while replaying one seeded replication of the
// two-phase loop. Agents are indexed discriminators first, generator last.
struct ReplicationResult {
  int replication = 0;
  int task_count = 0;
  int discriminators = 0;

  std::vector<PaymentVector> payments;                // T x n raw
  std::vector<std::vector<double>> normalized_payments;
  std::vector<std::vector<Label>> votes;              // T x K
  std::vector<std::vector<Label>> truths;
  std::vector<std::vector<Label>> targets;
  std::vector<double> vote_accuracy_series;

  std::vector<std::vector<PolicyPoint>> played;   // policy entering round t
  std::vector<std::vector<PolicyPoint>> updated;  // policy after round t
  std::vector<std::vector<PolicyGrad>> gradients;

  std::vector<RegretRecord> regrets;            // per agent
  std::vector<ConvergenceRecord> convergence;   // per discriminator
  std::vector<double> initial_report_accuracy;  // per discriminator
  std::vector<double> final_report_accuracy;
  double initial_vote_accuracy = 0.0;
  double final_vote_accuracy = 0.0;
};

ReplicationResult run_replication(const ExperimentConfig& config,
                                  int replication);

struct SimulateResult {
  std::vector<ReplicationResult> replications;
  std::vector<std::filesystem::path> files;
  double wall_clock_seconds = 0.0;
};

// Runs R replications (at most `jobs` concurrently) and writes
// payments.csv, policies.csv, votes.csv, regret.csv, convergence.csv and
// summary.json under config.out_dir. CSV bytes depend only on (config,
// seed), never on jobs.
SimulateResult cmd_simulate(const ExperimentConfig& config, int jobs = 1);

struct VerifyCheck {
  std::string name;
  std::string status;  // PASS, FAIL, or SKIPPED(reason)
  double measured = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

// Oracle suite: unbiasedness, payment expectation (DMI squared), dominance,
// information monotonicity, and gradient agreement. Writes
// verify_report.json under config.out_dir.
VerifyReport cmd_verify(const ExperimentConfig& config);

// Full PEG loop per batch size with common per-replication seeds.
std::vector<SweepRow> batch_size_sweep(const ExperimentConfig& config,
                                       const std::vector<int>& k_values,
                                       int jobs = 1);

// Sweep over K = k_min..k_max; writes sweep.csv under config.out_dir.
std::vector<SweepRow> cmd_sweep(const ExperimentConfig& config, int k_min,
                                int k_max, int jobs = 1);

struct RegretRunResult {
  RegretRecord record;
  double slope = 0.0;
  double grad_bound = 0.0;   // exact environment bound used for the schedule
  double final_regret = 0.0;
  std::filesystem::path csv_path;
};

// Deterministic online-mirror-descent regret run: agent 0 learns from exact
// expected-payment gradients against truthful peers and an ideal generator.
// Requires a doubling or power-decay schedule. Writes regret_run.csv and
// regret_summary.json under config.out_dir.
RegretRunResult cmd_regret(const ExperimentConfig& config);

}  // namespace peg
