#include "peg/oracle.hpp"

#include <cmath>
#include <limits>

namespace peg {

namespace {

constexpr int kMaxEnumSubset = 6;  // 4^6 = 4096 outcome pairs

// d det(m) / d m as a 2x2 of partials.
Matrix2 det_partials(const Matrix2& m) {
  Matrix2 d;
  d << m(1, 1), -m(1, 0), -m(0, 1), m(0, 0);
  return d;
}

}  // namespace

double expected_det_enumeration_raw(const Matrix2& u, int subset_size) {
  require(subset_size >= 2, ErrorCode::SubsetTooSmall,
          "enumeration needs subset size >= 2");
  require(subset_size <= kMaxEnumSubset, ErrorCode::SubsetTooLarge,
          "enumeration capped at subset size " + std::to_string(kMaxEnumSubset));
  const std::int64_t sequences = std::int64_t{1} << (2 * subset_size);
  double total = 0.0;
  for (std::int64_t seq = 0; seq < sequences; ++seq) {
    CountMatrix2 counts = CountMatrix2::Zero();
    double prob = 1.0;
    std::int64_t rest = seq;
    for (int k = 0; k < subset_size; ++k) {
      const int pair = static_cast<int>(rest & 3);
      rest >>= 2;
      const int a = pair >> 1;
      const int b = pair & 1;
      prob *= u(a, b);
      counts(a, b) += 1;
    }
    total += prob * static_cast<double>(det2(CoReportCounts(counts)));
  }
  return total;
}

double expected_det_exact(const JointDist& u, int subset_size) {
  return expected_det_enumeration_raw(u.matrix(), subset_size);
}

double expected_pair_payment_enumeration(const JointDist& u,
                                         const TaskSplit& split) {
  const int k_total = split.task_count();
  require(k_total <= 2 * kMaxEnumSubset, ErrorCode::SubsetTooLarge,
          "full enumeration capped at " + std::to_string(2 * kMaxEnumSubset) +
              " tasks");
  std::vector<int> membership(static_cast<std::size_t>(k_total), 0);
  for (int idx : split.two()) membership[static_cast<std::size_t>(idx)] = 1;
  const std::int64_t sequences = std::int64_t{1} << (2 * k_total);
  double total = 0.0;
  for (std::int64_t seq = 0; seq < sequences; ++seq) {
    CountMatrix2 counts[2] = {CountMatrix2::Zero(), CountMatrix2::Zero()};
    double prob = 1.0;
    std::int64_t rest = seq;
    for (int k = 0; k < k_total; ++k) {
      const int pair = static_cast<int>(rest & 3);
      rest >>= 2;
      const int a = pair >> 1;
      const int b = pair & 1;
      prob *= u.matrix()(a, b);
      counts[membership[static_cast<std::size_t>(k)]](a, b) += 1;
    }
    total += prob *
             static_cast<double>(det2(CoReportCounts(counts[0]))) *
             static_cast<double>(det2(CoReportCounts(counts[1])));
  }
  return total;
}

double expected_payment_exact(const WorldModel& world,
                              const GeneratorModel& generator,
                              const std::vector<Strategy>& strategies,
                              const TaskSplit& split, int agent) {
  const int n = static_cast<int>(strategies.size());
  require(n == world.agent_count(), ErrorCode::ArityMismatch,
          "one strategy per agent expected");
  require(n >= 2, ErrorCode::TooFewAgents, "payments need at least 2 agents");
  require(agent >= 0 && agent < n, ErrorCode::IndexOutOfRange,
          "agent index out of range");
  const int s1 = static_cast<int>(split.one().size());
  const int s2 = static_cast<int>(split.two().size());
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == agent) continue;
    const JointDist u = joint_report_distribution(
        world, strategies[static_cast<std::size_t>(agent)],
        strategies[static_cast<std::size_t>(j)], generator, agent, j);
    total += expected_det_exact(u, s1) * expected_det_exact(u, s2);
  }
  return total;
}

double expected_payment_closed_raw(const WorldModel& world,
                                   const GeneratorModel& generator,
                                   const Matrix2& agent_strategy,
                                   const std::vector<Strategy>& strategies,
                                   const TaskSplit& split, int agent) {
  const int n = static_cast<int>(strategies.size());
  require(n == world.agent_count(), ErrorCode::ArityMismatch,
          "one strategy per agent expected");
  const double a1 = static_cast<double>(
      pair_count_constant(static_cast<int>(split.one().size())));
  const double a2 = static_cast<double>(
      pair_count_constant(static_cast<int>(split.two().size())));
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == agent) continue;
    const Matrix2 u = joint_report_matrix_raw(
        world, agent_strategy,
        strategies[static_cast<std::size_t>(j)].matrix(), generator, agent, j);
    const double d = det2(u);
    total += a1 * a2 * d * d;
  }
  return total;
}

Matrix2 exact_gradient(const WorldModel& world, const GeneratorModel& generator,
                       const std::vector<Strategy>& strategies,
                       const TaskSplit& split, int agent) {
  const int n = static_cast<int>(strategies.size());
  require(n == world.agent_count(), ErrorCode::ArityMismatch,
          "one strategy per agent expected");
  require(agent >= 0 && agent < n, ErrorCode::IndexOutOfRange,
          "agent index out of range");
  const double a1 = static_cast<double>(
      pair_count_constant(static_cast<int>(split.one().size())));
  const double a2 = static_cast<double>(
      pair_count_constant(static_cast<int>(split.two().size())));
  const double p1 = induced_truth_prob(world, generator);
  Matrix2 weights = Matrix2::Zero();
  weights(0, 0) = 1.0 - p1;
  weights(1, 1) = p1;
  const Matrix2& own = strategies[static_cast<std::size_t>(agent)].matrix();

  Matrix2 grad = Matrix2::Zero();
  for (int j = 0; j < n; ++j) {
    if (j == agent) continue;
    // U = own^T A with A = Q_i^T W Q_j S_j, so dU(r,r')/dS(s,r) = A(s,r').
    const Matrix2 a = world.confusion(agent).transpose() * weights *
                      world.confusion(j) *
                      strategies[static_cast<std::size_t>(j)].matrix();
    const Matrix2 u = own.transpose() * a;
    const Matrix2 du = det_partials(u);
    const double d = det2(u);
    for (int s = 0; s < 2; ++s) {
      for (int r = 0; r < 2; ++r) {
        double ddet = 0.0;
        for (int rp = 0; rp < 2; ++rp) ddet += du(r, rp) * a(s, rp);
        grad(s, r) += 2.0 * a1 * a2 * d * ddet;
      }
    }
  }
  return grad;
}

Matrix2 finite_difference_gradient(const WorldModel& world,
                                   const GeneratorModel& generator,
                                   const std::vector<Strategy>& strategies,
                                   const TaskSplit& split, int agent,
                                   double h) {
  const Matrix2& own = strategies[static_cast<std::size_t>(agent)].matrix();
  Matrix2 grad = Matrix2::Zero();
  for (int s = 0; s < 2; ++s) {
    for (int r = 0; r < 2; ++r) {
      Matrix2 plus = own;
      Matrix2 minus = own;
      plus(s, r) += h;
      minus(s, r) -= h;
      const double up = expected_payment_closed_raw(world, generator, plus,
                                                    strategies, split, agent);
      const double down = expected_payment_closed_raw(world, generator, minus,
                                                      strategies, split, agent);
      grad(s, r) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

double payment_entry_gradient_bound(const WorldModel& world,
                                    const GeneratorModel& generator,
                                    const std::vector<Strategy>& strategies,
                                    const TaskSplit& split, int agent) {
  const int n = static_cast<int>(strategies.size());
  require(n == world.agent_count(), ErrorCode::ArityMismatch,
          "one strategy per agent expected");
  const double a1 = static_cast<double>(
      pair_count_constant(static_cast<int>(split.one().size())));
  const double a2 = static_cast<double>(
      pair_count_constant(static_cast<int>(split.two().size())));
  const double p1 = induced_truth_prob(world, generator);
  Matrix2 weights = Matrix2::Zero();
  weights(0, 0) = 1.0 - p1;
  weights(1, 1) = p1;
  double bound = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == agent) continue;
    // Entry gradient is 2 a1 a2 det(U) sum_rp du(r,rp) A(s,rp) with
    // U = S^T A; |det U| <= |det A| and every U entry is at most the largest
    // column sum of A because S is row-stochastic.
    const Matrix2 a = world.confusion(agent).transpose() * weights *
                      world.confusion(j) *
                      strategies[static_cast<std::size_t>(j)].matrix();
    const double det_a = std::abs(det2(a));
    const double u_max =
        std::max(a(0, 0) + a(1, 0), a(0, 1) + a(1, 1));
    const double row_max =
        std::max(a(0, 0) + a(0, 1), a(1, 0) + a(1, 1));
    bound += 2.0 * a1 * a2 * det_a * u_max * row_max;
  }
  return bound;
}

Matrix2 vote_probability_matrix(const WorldModel& world,
                                const std::vector<Strategy>& strategies,
                                TieRule tie) {
  const int n = static_cast<int>(strategies.size());
  require(n == world.agent_count(), ErrorCode::ArityMismatch,
          "one strategy per agent expected");
  require(n <= 20, ErrorCode::SubsetTooLarge,
          "vote enumeration capped at 20 agents");
  std::vector<Matrix2> report_given_truth;
  report_given_truth.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    report_given_truth.push_back(
        world.confusion(i) * strategies[static_cast<std::size_t>(i)].matrix());
  }
  Matrix2 out = Matrix2::Zero();
  const std::int64_t combos = std::int64_t{1} << n;
  for (int truth = 0; truth < 2; ++truth) {
    for (std::int64_t combo = 0; combo < combos; ++combo) {
      double prob = 1.0;
      int ones = 0;
      for (int i = 0; i < n; ++i) {
        const int r = static_cast<int>((combo >> i) & 1);
        prob *= report_given_truth[static_cast<std::size_t>(i)](truth, r);
        ones += r;
      }
      if (2 * ones > n) {
        out(truth, 1) += prob;
      } else if (2 * ones < n) {
        out(truth, 0) += prob;
      } else if (tie == TieRule::Random) {
        out(truth, 0) += 0.5 * prob;
        out(truth, 1) += 0.5 * prob;
      } else {
        out(truth, 0) += prob;
      }
    }
  }
  return out;
}

double exact_generator_utility(const WorldModel& world,
                               const std::vector<Strategy>& strategies,
                               const PolicyPoint& generator_policy,
                               TieRule tie) {
  const Matrix2 vote_given_truth = vote_probability_matrix(world, strategies, tie);
  const double p_target_one = world.truth_prior();
  double total = 0.0;
  for (int v = 0; v < 2; ++v) {
    const double p_target = (v == 1) ? p_target_one : 1.0 - p_target_one;
    for (int y = 0; y < 2; ++y) {
      total += p_target * generator_policy.given(static_cast<Label>(v))[y] *
               vote_given_truth(y, v);
    }
  }
  return total;
}

Matrix2 exact_generator_gradient(const WorldModel& world,
                                 const std::vector<Strategy>& strategies,
                                 TieRule tie) {
  const Matrix2 vote_given_truth = vote_probability_matrix(world, strategies, tie);
  const double p_target_one = world.truth_prior();
  Matrix2 grad = Matrix2::Zero();
  for (int v = 0; v < 2; ++v) {
    const double p_target = (v == 1) ? p_target_one : 1.0 - p_target_one;
    for (int y = 0; y < 2; ++y) {
      grad(v, y) = p_target * vote_given_truth(y, v);
    }
  }
  return grad;
}

double exact_report_accuracy(const WorldModel& world,
                             const GeneratorModel& generator, int agent,
                             const Strategy& strategy) {
  const double p1 = induced_truth_prob(world, generator);
  const Matrix2 report_given_truth = world.confusion(agent) * strategy.matrix();
  return (1.0 - p1) * report_given_truth(0, 0) + p1 * report_given_truth(1, 1);
}

double exact_vote_accuracy(const WorldModel& world,
                           const GeneratorModel& generator,
                           const std::vector<Strategy>& strategies,
                           TieRule tie) {
  const Matrix2 vote_given_truth = vote_probability_matrix(world, strategies, tie);
  const double p1 = induced_truth_prob(world, generator);
  return (1.0 - p1) * vote_given_truth(0, 0) + p1 * vote_given_truth(1, 1);
}

DominanceReport dominance_grid(
    const std::function<double(double, double)>& value_fn, double grid_step) {
  require(grid_step > 0.0 && grid_step <= 0.5, ErrorCode::ValidationError,
          "grid step must lie in (0, 0.5]");
  std::vector<double> axis;
  for (double x = 0.0; x < 1.0 - 1e-12; x += grid_step) axis.push_back(x);
  axis.push_back(1.0);

  DominanceReport report;
  report.grid_step = grid_step;
  report.truthful_value = value_fn(0.0, 0.0);
  const double tie_tol = 1e-9 * std::max(1.0, std::abs(report.truthful_value));

  double best_deviation = -std::numeric_limits<double>::infinity();
  double best_nonperm = -std::numeric_limits<double>::infinity();
  bool flip_ties = false;
  bool other_ties = false;
  for (double a : axis) {
    for (double b : axis) {
      const bool truthful = (a == 0.0 && b == 0.0);
      const bool flip = (a == 1.0 && b == 1.0);
      if (truthful) continue;
      const double value = value_fn(a, b);
      best_deviation = std::max(best_deviation, value);
      if (flip) {
        flip_ties = std::abs(value - report.truthful_value) <= tie_tol;
        continue;
      }
      if (value > best_nonperm) {
        best_nonperm = value;
        report.best_nonperm_a = a;
        report.best_nonperm_b = b;
      }
      if (std::abs(value - report.truthful_value) <= tie_tol) other_ties = true;
    }
  }
  report.max_deviation_value = best_deviation;
  report.worst_gap = report.truthful_value - best_nonperm;
  report.permutation_tie = flip_ties && !other_ties;
  return report;
}

DominanceReport check_dominance(const WorldModel& world,
                                const GeneratorModel& generator,
                                const std::vector<Strategy>& peer_strategies,
                                int task_count, SplitPolicy split_policy,
                                double grid_step, double informative_tol) {
  const int n = world.agent_count();
  require(static_cast<int>(peer_strategies.size()) == n - 1,
          ErrorCode::ArityMismatch, "expected n-1 peer strategies");
  require(split_policy == SplitPolicy::Half, ErrorCode::ValidationError,
          "dominance uses the deterministic half split");
  const TaskSplit split = split_tasks(task_count);

  std::vector<Strategy> all;
  all.reserve(static_cast<std::size_t>(n));
  all.push_back(Strategy::truthful());
  for (const auto& s : peer_strategies) all.push_back(s);

  for (int j = 1; j < n; ++j) {
    const JointDist u = joint_report_distribution(
        world, all[0], all[static_cast<std::size_t>(j)], generator, 0, j);
    require(informative_peer_check(u, informative_tol),
            ErrorCode::UninformativePeer,
            "peer " + std::to_string(j) + " joint determinant below tolerance");
  }

  auto value_fn = [&](double a, double b) {
    Matrix2 m;
    m << 1.0 - a, a, b, 1.0 - b;
    std::vector<Strategy> with_deviation = all;
    with_deviation[0] = Strategy(m);
    return expected_payment_exact(world, generator, with_deviation, split, 0);
  };
  return dominance_grid(value_fn, grid_step);
}

BestFixedPolicy best_fixed_policy(
    const std::vector<Vector>& utility_gradients) {
  require(!utility_gradients.empty(), ErrorCode::EmptySequence,
          "need at least one gradient");
  Vector total = utility_gradients.front();
  for (std::size_t t = 1; t < utility_gradients.size(); ++t) {
    require(utility_gradients[t].size() == total.size(),
            ErrorCode::LengthMismatch, "gradient lengths differ");
    total += utility_gradients[t];
  }
  BestFixedPolicy best;
  best.vertex = 0;
  best.value = total(0);
  for (Eigen::Index i = 1; i < total.size(); ++i) {
    if (total(i) > best.value) {
      best.value = total(i);
      best.vertex = i;
    }
  }
  return best;
}

}  // namespace peg
