#include "peg/world.hpp"

#include <cmath>

namespace peg {

WorldModel::WorldModel(double truth_prior, std::vector<Matrix2> confusions)
    : truth_prior_(truth_prior), confusions_(std::move(confusions)) {
  require(truth_prior_ >= 0.0 && truth_prior_ <= 1.0,
          ErrorCode::ValidationError, "truth_prior outside [0, 1]");
  require(!confusions_.empty(), ErrorCode::TooFewAgents,
          "world needs at least one agent");
  for (const auto& q : confusions_) {
    for (int r = 0; r < 2; ++r) validate_prob_vector(q.row(r).transpose());
  }
}

WorldModel WorldModel::symmetric(double truth_prior,
                                 const std::vector<double>& accuracies) {
  std::vector<Matrix2> qs;
  qs.reserve(accuracies.size());
  for (double acc : accuracies) {
    Matrix2 q;
    q << acc, 1.0 - acc, 1.0 - acc, acc;
    qs.push_back(q);
  }
  return WorldModel(truth_prior, std::move(qs));
}

const Matrix2& WorldModel::confusion(int agent) const {
  require(agent >= 0 && agent < agent_count(), ErrorCode::IndexOutOfRange,
          "agent index out of range");
  return confusions_[static_cast<std::size_t>(agent)];
}

GeneratorModel::GeneratorModel(PolicyPoint policy)
    : policy_(std::move(policy)) {
  require(policy_.outputs() == 2, ErrorCode::LengthMismatch,
          "generator policy must be binary");
}

GeneratorModel GeneratorModel::ideal() {
  return GeneratorModel(
      PolicyPoint(ProbVector::vertex(2, 0), ProbVector::vertex(2, 1)));
}

TaskBatch sample_batch(const WorldModel& world, const GeneratorModel& generator,
                       int task_count, Rng& rng) {
  require(task_count >= 4, ErrorCode::BatchTooSmall,
          "need at least 4 tasks, got " + std::to_string(task_count));
  const int n = world.agent_count();
  TaskBatch batch;
  batch.task_count = task_count;
  batch.generator_targets.resize(task_count);
  batch.generator_correct.resize(task_count);
  batch.truths.resize(task_count);
  batch.signals.resize(n, task_count);
  for (int k = 0; k < task_count; ++k) {
    const Label target = rng.bernoulli_label(world.truth_prior());
    batch.generator_targets(k) = target;
    const Label correct = rng.sample_label(generator.policy().given(target));
    batch.generator_correct(k) = correct;
    batch.truths(k) = correct;
    for (int i = 0; i < n; ++i) {
      const double p_signal_one = world.confusion(i)(correct, 1);
      batch.signals(i, k) = rng.bernoulli_label(p_signal_one);
    }
  }
  return batch;
}

TaskBatch apply_strategies(const TaskBatch& batch,
                           const std::vector<Strategy>& strategies, Rng& rng) {
  const int n = static_cast<int>(batch.signals.rows());
  require(static_cast<int>(strategies.size()) == n, ErrorCode::ArityMismatch,
          "need one strategy per agent");
  TaskBatch out = batch;
  out.reports.resize(n, batch.task_count);
  for (int k = 0; k < batch.task_count; ++k) {
    for (int i = 0; i < n; ++i) {
      const Label signal = batch.signals(i, k);
      const double p_report_one =
          strategies[static_cast<std::size_t>(i)].matrix()(signal, 1);
      out.reports(i, k) = rng.bernoulli_label(p_report_one);
    }
  }
  return out;
}

double induced_truth_prob(const WorldModel& world,
                          const GeneratorModel& generator) {
  const double p_target_one = world.truth_prior();
  return (1.0 - p_target_one) * generator.policy().given(0)[1] +
         p_target_one * generator.policy().given(1)[1];
}

Matrix2 joint_report_matrix_raw(const WorldModel& world, const Matrix2& strat_i,
                                const Matrix2& strat_j,
                                const GeneratorModel& generator, int i, int j) {
  require(i != j, ErrorCode::SameAgent,
          "joint report distribution needs distinct agents");
  const double p1 = induced_truth_prob(world, generator);
  const Matrix2 report_given_truth_i = world.confusion(i) * strat_i;
  const Matrix2 report_given_truth_j = world.confusion(j) * strat_j;
  Matrix2 weights = Matrix2::Zero();
  weights(0, 0) = 1.0 - p1;
  weights(1, 1) = p1;
  return report_given_truth_i.transpose() * weights * report_given_truth_j;
}

JointDist joint_report_distribution(const WorldModel& world,
                                    const Strategy& strat_i,
                                    const Strategy& strat_j,
                                    const GeneratorModel& generator, int i,
                                    int j) {
  return JointDist(joint_report_matrix_raw(world, strat_i.matrix(),
                                           strat_j.matrix(), generator, i, j));
}

bool informative_peer_check(const JointDist& u, double tol) {
  return dmi(u) > tol;
}

}  // namespace peg
