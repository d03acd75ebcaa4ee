#pragma once

#include <cstdint>
#include <vector>

#include "peg/core.hpp"
#include "peg/mechanism.hpp"
#include "peg/rng.hpp"
#include "peg/world.hpp"

namespace peg {

enum class ScheduleKind {
  Constant,
  PowerDecay,
  // Piecewise-constant rate sqrt(2 D / (M^2 2^i)) on epochs [2^i, 2^{i+1}).
  Doubling,
  // Comparison variant with the epoch index i in the denominator instead of
  // 2^i; only the 2^i form yields the anytime sqrt(T) bound.
  DoublingStated,
};

struct Schedule {
  ScheduleKind kind = ScheduleKind::Constant;
  double base_rate = 0.1;
  double decay_exponent = 0.6;  // p, must lie in (0.5, 1) for PowerDecay
  double grad_bound = 1.0;      // M, gradient norm bound for Doubling
  double kl_radius = 0.6931471805599453;  // D, defaults to ln 2

  void validate() const;
};

double schedule_rate(const Schedule& schedule, std::int64_t iteration);

struct TrustRegion {
  bool enabled = false;
  double radius = 0.0;
  PolicyPoint reference = PolicyPoint::uniform_binary();
};

enum class Role { Discriminator, Generator };

struct AgentState {
  Role role = Role::Discriminator;
  PolicyPoint policy = PolicyPoint::uniform_binary();
  PolicyPoint initial_policy = PolicyPoint::uniform_binary();
  Schedule schedule;
  TrustRegion trust;
  // Running mean payment, subtracted from the reward when the
  // variance-reduction baseline is switched on.
  double payment_mean = 0.0;
  std::int64_t rounds_seen = 0;
};

// Gradient over PolicyPoint coordinates: row = condition, column = output.
using PolicyGrad = Matrix2;

// Multiplicative-weights step: new_i proportional to policy_i exp(rate g_i),
// computed with max-subtraction so large gradients cannot overflow.
ProbVector omd_step(const ProbVector& policy, const Vector& gradient,
                    double rate);

// Clamps each coordinate at `floor` and renormalizes; multiplicative updates
// cannot revive an exact zero.
ProbVector floor_policy(const ProbVector& policy, double floor = kPolicyFloor);

// Score-function estimate of the payment gradient in logit coordinates:
// grad(s, r) = reward * sum_{k: signal = s} (1(report_k = r) - policy(r|s)).
PolicyGrad reinforce_gradient_discriminator(const TaskBatch& batch, int agent,
                                            double reward,
                                            const PolicyPoint& policy);

// Score-function estimate for the generator with per-task indicator reward
// 1(vote_k = target_k).
PolicyGrad reinforce_gradient_generator(const TaskBatch& batch,
                                        const std::vector<Label>& votes,
                                        const PolicyPoint& policy);

// Maps a gradient taken with respect to the probabilities themselves into
// the logit coordinates the score estimator lives in:
// out_r = p_r (g_r - <p, g>).
Vector logit_pullback(const Vector& prob_gradient, const ProbVector& policy);

enum class TieRule { Zero, Random };

// Label reported by strictly more than half the agents; exact ties resolve
// to 0 (or uniformly with the Random rule).
Label majority_vote(const std::vector<Label>& reports_for_task,
                    TieRule tie = TieRule::Zero, Rng* rng = nullptr);

// Column-wise majority votes over an agents-x-tasks report matrix.
std::vector<Label> majority_votes(const LabelMatrix& reports,
                                  TieRule tie = TieRule::Zero,
                                  Rng* rng = nullptr);

// Largest lambda in [0, 1] with every conditional of
// lambda policy + (1 - lambda) reference within L1 radius of the reference.
PolicyPoint trust_project(const PolicyPoint& policy, const TrustRegion& trust);

struct RoundOptions {
  SplitPolicy split_policy = SplitPolicy::Half;
  TieRule tie_rule = TieRule::Zero;
  bool payment_baseline = false;
  double policy_floor = kPolicyFloor;
};

struct RoundResult {
  TaskBatch batch;
  int subset_one_size = 0;
  int subset_two_size = 0;
  PaymentVector payments;  // indexed by discriminator order
  std::vector<Label> votes;
  int vote_matches = 0;  // tasks whose vote equals the generator target
  std::vector<PolicyGrad> discriminator_gradients;
  PolicyGrad generator_gradient = PolicyGrad::Zero();
  std::vector<double> discriminator_rates;
  double generator_rate = 0.0;
};

// One two-phase PEG round: sample batch, apply strategies, pay, update each
// discriminator, vote, update the generator. Consumes rng in that order and
// mutates the policies in `states`; deterministic given (states, world,
// seed, iteration).
RoundResult run_peg_round(std::vector<AgentState>& states,
                          const WorldModel& world, int task_count,
                          const RoundOptions& options, Rng& rng,
                          std::int64_t iteration);

}  // namespace peg
