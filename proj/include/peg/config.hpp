#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "peg/learning.hpp"

namespace peg {

// Trust region declaration; the reference policy is always the truthful one
// (identity strategy for discriminators, ideal policy for the generator).
// Enabled by default: with raw-payment rewards the score estimator's kicks
// can reach several logits per round, and without the local constraint the
// dynamics can latch onto the flip optimum.
struct TrustSpec {
  bool enabled = true;
  double radius = 0.25;
};

struct ExperimentConfig {
  int agents = 3;                // n discriminators
  int task_count = 8;            // K
  std::int64_t iterations = 10;  // T
  int replications = 1;          // R
  std::uint64_t seed = 42;

  double truth_prior = 0.5;
  std::vector<double> confusion_accuracies = {0.90, 0.70, 0.76};

  // Initial conditionals; rows are [given 0; given 1]. Defaults sit inside
  // the default trust ball around the truthful reference.
  Matrix2 discriminator_initial = (Matrix2() << 0.9, 0.1, 0.1, 0.9).finished();
  Matrix2 generator_initial = (Matrix2() << 0.9, 0.1, 0.1, 0.9).finished();

  Schedule schedule;                      // discriminators
  std::vector<Schedule> agent_schedules;  // optional per-agent override
  Schedule generator_schedule;

  SplitPolicy split_policy = SplitPolicy::Half;
  TieRule tie_rule = TieRule::Zero;
  bool payment_baseline = false;
  double policy_floor = kPolicyFloor;
  TrustSpec trust;

  int sweep_k_min = 4;
  int sweep_k_max = 15;

  double verify_grid_step = 0.05;
  std::int64_t verify_samples = 20000;

  std::string out_dir = "peg_out";

  WorldModel world() const;
  GeneratorModel initial_generator() const;
  Schedule schedule_for_agent(int agent) const;
  std::vector<AgentState> initial_states() const;
  RoundOptions round_options() const;
};

// Parses a JSON document into a validated config. Unknown keys and violated
// constraints raise ValidationError naming the field; malformed documents
// raise ParseError. An empty document yields the full defaults.
ExperimentConfig parse_config(const std::string& text);

// Canonical serialization (sorted keys, round-trip numbers) used for the
// output-file header hash.
std::string canonical_json(const ExperimentConfig& config);

std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace peg
