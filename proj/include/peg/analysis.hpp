#pragma once

#include <span>
#include <vector>

#include "peg/learning.hpp"

namespace peg {

// Surrogate constants for the regret bound overlay. A non-positive
// grad_bound means "use the running max of observed gradient L2 norms,
// floored at 1".
struct BoundParams {
  double grad_bound = 0.0;
  double kl_radius = 0.6931471805599453;  // ln 2
  int task_count = 1;
  int conditions = 1;
};

struct RegretRecord {
  std::vector<double> realized;       // per-iteration <gradient_t, policy_t>
  std::vector<double> baseline;       // cumulative best-fixed-vertex value
  std::vector<double> regret;         // baseline - cumulative realized
  std::vector<double> bound_sqrt_t;   // C M sqrt(2 D t) overlay
  std::vector<double> bound_sqrt_kt;  // sqrt(K) times the above
};

// Linearized regret of a single-simplex trajectory: realized utility is the
// linear form against the played policy, the hindsight baseline is the best
// fixed vertex of the summed gradients. Regret is oriented nonnegative
// (baseline minus realized) so it compares directly with the upper bound.
RegretRecord regret_curve(const std::vector<Vector>& gradient_history,
                          const std::vector<ProbVector>& policy_history,
                          const BoundParams& params = {});

// Conditional-policy variant: realized utility and baseline sum over the
// per-condition simplices.
RegretRecord regret_curve_policy(const std::vector<PolicyGrad>& gradient_history,
                                 const std::vector<PolicyPoint>& policy_history,
                                 BoundParams params = {});

struct ConvergenceRecord {
  std::vector<double> dist_given_zero;  // L1 distance per condition
  std::vector<double> dist_given_one;
  std::vector<double> dist_max;  // max over conditions
  std::vector<double> window_avg;  // moving average of dist_max
  int window = 100;
};

ConvergenceRecord convergence_curve(const std::vector<PolicyPoint>& policy_history,
                                    const PolicyPoint& reference,
                                    int window = 100);

// Fraction of tasks where the vote equals the truth.
double vote_accuracy(std::span<const Label> votes, std::span<const Label> truths);

// Least-squares slope of log(series_t) against log(t), over entries with
// positive value; used for regret growth-rate estimates.
double loglog_slope(const std::vector<double>& series);

struct SweepRow {
  int task_count = 0;
  int replication = 0;
  double vote_accuracy = 0.0;
  double mean_payment = 0.0;
  double final_distance = 0.0;
};

}  // namespace peg
