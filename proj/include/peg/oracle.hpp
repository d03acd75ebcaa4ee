#pragma once

#include <functional>
#include <vector>

#include "peg/learning.hpp"
#include "peg/world.hpp"

namespace peg {

// Exact E[det M] for a co-report matrix built from `subset_size` i.i.d.
// tasks with pairwise outcome distribution u, by enumerating all
// 4^subset_size joint report sequences. Equals
// pair_count_constant(subset_size) * det(u); the enumeration route is kept
// independent so the identity stays testable.
double expected_det_exact(const JointDist& u, int subset_size);

// Same enumeration on a raw (possibly unnormalized) matrix; the polynomial
// extension used by finite-difference checks.
double expected_det_enumeration_raw(const Matrix2& u, int subset_size);

// Exact E[det M1 * det M2] for one agent pair by enumerating all 4^K joint
// report sequences over the full split, without assuming the subsets are
// independent.
double expected_pair_payment_enumeration(const JointDist& u,
                                         const TaskSplit& split);

// Exact expected payment to `agent`: sum over peers of
// E[det M1] * E[det M2], each factor via expected_det_exact on the exact
// joint report distribution (disjoint subsets are independent).
double expected_payment_exact(const WorldModel& world,
                              const GeneratorModel& generator,
                              const std::vector<Strategy>& strategies,
                              const TaskSplit& split, int agent);

// Closed-form payment polynomial sum_j a1 a2 det(U_ij(S))^2, evaluated on a
// raw strategy matrix for `agent`. Agrees with expected_payment_exact on
// row-stochastic inputs and extends smoothly off the simplex, which is what
// central differences need.
double expected_payment_closed_raw(const WorldModel& world,
                                   const GeneratorModel& generator,
                                   const Matrix2& agent_strategy,
                                   const std::vector<Strategy>& strategies,
                                   const TaskSplit& split, int agent);

// Analytic gradient of the closed-form expected payment with respect to
// agent's four strategy entries. Verified against central differences of
// expected_payment_closed_raw.
Matrix2 exact_gradient(const WorldModel& world, const GeneratorModel& generator,
                       const std::vector<Strategy>& strategies,
                       const TaskSplit& split, int agent);

// Central-difference gradient (step h) of expected_payment_closed_raw; the
// second, independent route for gradient verification.
Matrix2 finite_difference_gradient(const WorldModel& world,
                                   const GeneratorModel& generator,
                                   const std::vector<Strategy>& strategies,
                                   const TaskSplit& split, int agent,
                                   double h = 1e-6);

// Upper bound on |d E[payment] / d strategy entry| valid for every
// row-stochastic strategy of `agent`, with the peer strategies fixed. Used
// to pin the doubling-schedule constant M before a regret run.
double payment_entry_gradient_bound(const WorldModel& world,
                                    const GeneratorModel& generator,
                                    const std::vector<Strategy>& strategies,
                                    const TaskSplit& split, int agent);

// P(majority vote = v | truth = y) for every (y, v), enumerating all report
// combinations of the given strategies.
Matrix2 vote_probability_matrix(const WorldModel& world,
                                const std::vector<Strategy>& strategies,
                                TieRule tie = TieRule::Zero);

// Exact per-task generator utility E[1(vote = target)] under the world,
// discriminator strategies, and a generator policy.
double exact_generator_utility(const WorldModel& world,
                               const std::vector<Strategy>& strategies,
                               const PolicyPoint& generator_policy,
                               TieRule tie = TieRule::Zero);

// Gradient of exact_generator_utility with respect to the generator policy
// entries; the utility is linear in them.
Matrix2 exact_generator_gradient(const WorldModel& world,
                                 const std::vector<Strategy>& strategies,
                                 TieRule tie = TieRule::Zero);

// P(report = truth) for one agent under a fixed strategy.
double exact_report_accuracy(const WorldModel& world,
                             const GeneratorModel& generator, int agent,
                             const Strategy& strategy);

// P(majority vote = truth) under fixed strategies.
double exact_vote_accuracy(const WorldModel& world,
                           const GeneratorModel& generator,
                           const std::vector<Strategy>& strategies,
                           TieRule tie = TieRule::Zero);

struct DominanceReport {
  double truthful_value = 0.0;
  double max_deviation_value = 0.0;  // best grid value excluding truthful
  double worst_gap = 0.0;  // truthful minus best non-permutation deviation
  bool permutation_tie = false;  // only (a,b)=(1,1) ties the truthful value
  double best_nonperm_a = 0.0;  // argmax non-permutation deviation
  double best_nonperm_b = 0.0;
  double grid_step = 0.0;
};

// Grid search over deviation strategies with rows [(1-a, a), (b, 1-b)];
// value_fn(a, b) is the deviator's expected payment.
DominanceReport dominance_grid(
    const std::function<double(double, double)>& value_fn, double grid_step);

// Checks that truthful reporting of agent 0 maximizes expected payment over
// the deviation grid, against fixed peer strategies (agents 1..n-1). Throws
// UninformativePeer when any peer's joint determinant with the truthful
// agent falls below `informative_tol`.
DominanceReport check_dominance(const WorldModel& world,
                                const GeneratorModel& generator,
                                const std::vector<Strategy>& peer_strategies,
                                int task_count, SplitPolicy split_policy,
                                double grid_step,
                                double informative_tol = 1e-9);

struct BestFixedPolicy {
  Eigen::Index vertex = 0;
  double value = 0.0;
};

// Per-round utility is linear in the policy, so the hindsight-optimal fixed
// policy is a simplex vertex: the argmax coordinate of the summed gradients
// (lowest index on ties).
BestFixedPolicy best_fixed_policy(const std::vector<Vector>& utility_gradients);

}  // namespace peg
