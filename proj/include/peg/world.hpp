#pragma once

#include <vector>

#include "peg/core.hpp"
#include "peg/mechanism.hpp"
#include "peg/rng.hpp"

namespace peg {

// Ground-truth prior plus one row-stochastic confusion matrix per agent.
// Row v of confusions[i] is the signal distribution given truth v; signals
// are drawn independently per agent given the truth.
class WorldModel {
 public:
  WorldModel(double truth_prior, std::vector<Matrix2> confusions);

  // n agents with symmetric binary channels: P(signal = truth) = accuracy[i].
  static WorldModel symmetric(double truth_prior,
                              const std::vector<double>& accuracies);

  double truth_prior() const { return truth_prior_; }
  int agent_count() const { return static_cast<int>(confusions_.size()); }
  const Matrix2& confusion(int agent) const;

 private:
  double truth_prior_;
  std::vector<Matrix2> confusions_;
};

// Generator policy over produced-correctness, conditioned on the target
// label it is asked to realize.
class GeneratorModel {
 public:
  explicit GeneratorModel(PolicyPoint policy);

  // Always realizes the requested target.
  static GeneratorModel ideal();

  const PolicyPoint& policy() const { return policy_; }

 private:
  PolicyPoint policy_;
};

// One round's sampled tasks. Reports are empty until apply_strategies runs.
struct TaskBatch {
  int task_count = 0;
  LabelVector generator_targets;  // V requested of the generator
  LabelVector generator_correct;  // realized correctness of the response
  LabelVector truths;             // defined as generator_correct
  LabelMatrix signals;            // agents x tasks
  LabelMatrix reports;            // agents x tasks, empty before strategies

  bool has_reports() const { return reports.size() > 0; }
};

TaskBatch sample_batch(const WorldModel& world, const GeneratorModel& generator,
                       int task_count, Rng& rng);

// Draws reports[i][k] ~ strategies[i].row(signals[i][k]); the same strategy
// applies to every task in the batch.
TaskBatch apply_strategies(const TaskBatch& batch,
                           const std::vector<Strategy>& strategies, Rng& rng);

// Exact joint distribution of the pair's reports:
// U(r, r') = sum_v P(truth = v) [Q_i S_i](v, r) [Q_j S_j](v, r').
JointDist joint_report_distribution(const WorldModel& world,
                                    const Strategy& strat_i,
                                    const Strategy& strat_j,
                                    const GeneratorModel& generator, int i,
                                    int j);

// Same computation on raw matrices, without stochasticity validation. The
// oracle differentiates through this polynomial extension.
Matrix2 joint_report_matrix_raw(const WorldModel& world, const Matrix2& strat_i,
                                const Matrix2& strat_j,
                                const GeneratorModel& generator, int i, int j);

// Marginal P(truth = 1) induced by the target prior and generator policy.
double induced_truth_prob(const WorldModel& world,
                          const GeneratorModel& generator);

bool informative_peer_check(const JointDist& u, double tol);

}  // namespace peg
