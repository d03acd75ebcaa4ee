#include "peg/learning.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace peg {

void Schedule::validate() const {
  switch (kind) {
    case ScheduleKind::Constant:
      require(base_rate >= 0.0, ErrorCode::InvalidSchedule,
              "constant rate must be >= 0");
      break;
    case ScheduleKind::PowerDecay:
      require(base_rate > 0.0, ErrorCode::InvalidSchedule,
              "power decay needs base_rate > 0");
      require(decay_exponent > 0.5 && decay_exponent < 1.0,
              ErrorCode::InvalidSchedule,
              "decay exponent must lie in (0.5, 1)");
      break;
    case ScheduleKind::Doubling:
    case ScheduleKind::DoublingStated:
      require(grad_bound > 0.0, ErrorCode::InvalidSchedule,
              "doubling schedule needs grad_bound > 0");
      require(kl_radius >= 0.0, ErrorCode::InvalidSchedule,
              "kl_radius must be >= 0");
      break;
  }
}

double schedule_rate(const Schedule& schedule, std::int64_t iteration) {
  require(iteration >= 1, ErrorCode::InvalidSchedule,
          "iterations are 1-based");
  schedule.validate();
  switch (schedule.kind) {
    case ScheduleKind::Constant:
      return schedule.base_rate;
    case ScheduleKind::PowerDecay:
      return schedule.base_rate /
             std::pow(static_cast<double>(iteration), schedule.decay_exponent);
    case ScheduleKind::Doubling: {
      const int epoch = 63 - std::countl_zero(static_cast<std::uint64_t>(iteration));
      const double denom = schedule.grad_bound * schedule.grad_bound *
                           std::ldexp(1.0, epoch);
      return std::sqrt(2.0 * schedule.kl_radius / denom);
    }
    case ScheduleKind::DoublingStated: {
      const int epoch = 63 - std::countl_zero(static_cast<std::uint64_t>(iteration));
      const double denom = schedule.grad_bound * schedule.grad_bound *
                           static_cast<double>(std::max(epoch, 1));
      return std::sqrt(2.0 * schedule.kl_radius / denom);
    }
  }
  fail(ErrorCode::InvalidSchedule, "unknown schedule kind");
}

ProbVector omd_step(const ProbVector& policy, const Vector& gradient,
                    double rate) {
  require(policy.size() == gradient.size(), ErrorCode::LengthMismatch,
          "policy and gradient differ in length");
  require(rate >= 0.0, ErrorCode::InvalidSchedule, "rate must be >= 0");
  for (Eigen::Index i = 0; i < policy.size(); ++i) {
    require(policy[i] > 0.0, ErrorCode::ZeroSupport,
            "multiplicative update cannot revive a zero coordinate");
  }
  const double shift = gradient.maxCoeff();
  Vector weights(policy.size());
  for (Eigen::Index i = 0; i < policy.size(); ++i) {
    weights(i) = policy[i] * std::exp(rate * (gradient(i) - shift));
  }
  return ProbVector(weights / weights.sum());
}

ProbVector floor_policy(const ProbVector& policy, double floor) {
  Vector v = policy.vec().cwiseMax(floor);
  return ProbVector(v / v.sum());
}

PolicyGrad reinforce_gradient_discriminator(const TaskBatch& batch, int agent,
                                            double reward,
                                            const PolicyPoint& policy) {
  require(batch.task_count > 0 && batch.has_reports(), ErrorCode::EmptyBatch,
          "batch has no reports");
  require(agent >= 0 && agent < batch.reports.rows(),
          ErrorCode::IndexOutOfRange, "agent index out of range");
  PolicyGrad grad = PolicyGrad::Zero();
  for (int k = 0; k < batch.task_count; ++k) {
    const Label s = batch.signals(agent, k);
    const Label r = batch.reports(agent, k);
    for (int out = 0; out < 2; ++out) {
      const double indicator = (r == out) ? 1.0 : 0.0;
      grad(s, out) += reward * (indicator - policy.given(s)[out]);
    }
  }
  return grad;
}

PolicyGrad reinforce_gradient_generator(const TaskBatch& batch,
                                        const std::vector<Label>& votes,
                                        const PolicyPoint& policy) {
  require(batch.task_count > 0, ErrorCode::EmptyBatch, "batch is empty");
  require(static_cast<int>(votes.size()) == batch.task_count,
          ErrorCode::LengthMismatch, "one vote per task required");
  PolicyGrad grad = PolicyGrad::Zero();
  for (int k = 0; k < batch.task_count; ++k) {
    const Label target = batch.generator_targets(k);
    if (votes[static_cast<std::size_t>(k)] != target) continue;
    const Label produced = batch.generator_correct(k);
    for (int out = 0; out < 2; ++out) {
      const double indicator = (produced == out) ? 1.0 : 0.0;
      grad(target, out) += indicator - policy.given(target)[out];
    }
  }
  return grad;
}

Vector logit_pullback(const Vector& prob_gradient, const ProbVector& policy) {
  require(prob_gradient.size() == policy.size(), ErrorCode::LengthMismatch,
          "gradient and policy differ in length");
  const double mean = policy.vec().dot(prob_gradient);
  Vector out(policy.size());
  for (Eigen::Index i = 0; i < policy.size(); ++i) {
    out(i) = policy[i] * (prob_gradient(i) - mean);
  }
  return out;
}

Label majority_vote(const std::vector<Label>& reports_for_task, TieRule tie,
                    Rng* rng) {
  require(!reports_for_task.empty(), ErrorCode::EmptySequence,
          "majority vote needs at least one report");
  int ones = 0;
  for (Label r : reports_for_task) {
    require(r <= 1, ErrorCode::InvalidLabel, "reports must be 0 or 1");
    ones += r;
  }
  const int n = static_cast<int>(reports_for_task.size());
  if (2 * ones > n) return 1;
  if (2 * ones < n) return 0;
  if (tie == TieRule::Random) {
    require(rng != nullptr, ErrorCode::ValidationError,
            "random tie rule needs a stream");
    return rng->bernoulli_label(0.5);
  }
  return 0;
}

std::vector<Label> majority_votes(const LabelMatrix& reports, TieRule tie,
                                  Rng* rng) {
  std::vector<Label> votes(static_cast<std::size_t>(reports.cols()));
  std::vector<Label> column(static_cast<std::size_t>(reports.rows()));
  for (int k = 0; k < reports.cols(); ++k) {
    for (int i = 0; i < reports.rows(); ++i) {
      column[static_cast<std::size_t>(i)] = reports(i, k);
    }
    votes[static_cast<std::size_t>(k)] = majority_vote(column, tie, rng);
  }
  return votes;
}

PolicyPoint trust_project(const PolicyPoint& policy, const TrustRegion& trust) {
  if (!trust.enabled) return policy;
  require(trust.radius > 0.0, ErrorCode::ValidationError,
          "enabled trust region needs radius > 0");
  double lambda = 1.0;
  for (Label s : {Label{0}, Label{1}}) {
    const double dist = l1_distance(policy.given(s), trust.reference.given(s));
    if (dist > trust.radius) lambda = std::min(lambda, trust.radius / dist);
  }
  if (lambda >= 1.0) return policy;
  PolicyPoint out = policy;
  for (Label s : {Label{0}, Label{1}}) {
    const Vector blended = lambda * policy.given(s).vec() +
                           (1.0 - lambda) * trust.reference.given(s).vec();
    out.set(s, ProbVector(blended));
  }
  return out;
}

namespace {

void apply_policy_update(AgentState& state, const PolicyGrad& grad, double rate,
                         double floor) {
  for (Label s : {Label{0}, Label{1}}) {
    // Floor on entry too: a vertex-initialized policy (e.g. exactly
    // truthful) could never move under a pure multiplicative update.
    const ProbVector current = floor_policy(state.policy.given(s), floor);
    ProbVector updated = omd_step(current, grad.row(s).transpose(), rate);
    state.policy.set(s, floor_policy(updated, floor));
  }
  state.policy = trust_project(state.policy, state.trust);
}

}  // namespace

RoundResult run_peg_round(std::vector<AgentState>& states,
                          const WorldModel& world, int task_count,
                          const RoundOptions& options, Rng& rng,
                          std::int64_t iteration) {
  int generator_index = -1;
  std::vector<int> discriminators;
  for (int i = 0; i < static_cast<int>(states.size()); ++i) {
    if (states[static_cast<std::size_t>(i)].role == Role::Generator) {
      require(generator_index < 0, ErrorCode::ArityMismatch,
              "exactly one generator state expected");
      generator_index = i;
    } else {
      discriminators.push_back(i);
    }
  }
  require(generator_index >= 0, ErrorCode::ArityMismatch,
          "a generator state is required");
  require(static_cast<int>(discriminators.size()) >= 2,
          ErrorCode::TooFewAgents, "need at least 2 discriminators");
  require(static_cast<int>(discriminators.size()) == world.agent_count(),
          ErrorCode::ArityMismatch,
          "one discriminator per world agent expected");

  AgentState& generator = states[static_cast<std::size_t>(generator_index)];

  RoundResult result;
  const GeneratorModel generator_model(generator.policy);
  result.batch = sample_batch(world, generator_model, task_count, rng);

  std::vector<Strategy> strategies;
  strategies.reserve(discriminators.size());
  for (int idx : discriminators) {
    strategies.push_back(states[static_cast<std::size_t>(idx)].policy.to_strategy());
  }
  result.batch = apply_strategies(result.batch, strategies, rng);

  const TaskSplit split = split_tasks(task_count, options.split_policy, &rng);
  result.subset_one_size = static_cast<int>(split.one().size());
  result.subset_two_size = static_cast<int>(split.two().size());
  result.payments = payments_all(result.batch.reports, split);

  result.discriminator_gradients.reserve(discriminators.size());
  result.discriminator_rates.reserve(discriminators.size());
  for (std::size_t d = 0; d < discriminators.size(); ++d) {
    AgentState& state = states[static_cast<std::size_t>(discriminators[d])];
    const double raw = result.payments[d];
    const double reward =
        options.payment_baseline ? raw - state.payment_mean : raw;
    const PolicyGrad grad = reinforce_gradient_discriminator(
        result.batch, static_cast<int>(d), reward, state.policy);
    const double rate = schedule_rate(state.schedule, iteration);
    apply_policy_update(state, grad, rate, options.policy_floor);
    state.rounds_seen += 1;
    state.payment_mean +=
        (raw - state.payment_mean) / static_cast<double>(state.rounds_seen);
    result.discriminator_gradients.push_back(grad);
    result.discriminator_rates.push_back(rate);
  }

  result.votes = majority_votes(result.batch.reports, options.tie_rule, &rng);
  for (int k = 0; k < task_count; ++k) {
    if (result.votes[static_cast<std::size_t>(k)] ==
        result.batch.generator_targets(k)) {
      result.vote_matches += 1;
    }
  }

  result.generator_gradient =
      reinforce_gradient_generator(result.batch, result.votes, generator.policy);
  result.generator_rate = schedule_rate(generator.schedule, iteration);
  apply_policy_update(generator, result.generator_gradient,
                      result.generator_rate, options.policy_floor);
  generator.rounds_seen += 1;

  return result;
}

}  // namespace peg
