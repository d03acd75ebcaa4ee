#include "peg/analysis.hpp"

#include <cmath>

namespace peg {

namespace {

constexpr double kBoundConstant = 3.414213562373095;  // sqrt(2)/(sqrt(2)-1)

void append_bounds(RegretRecord& record, double grad_norm_running_max,
                   const BoundParams& params, std::int64_t t) {
  const double m = params.grad_bound > 0.0
                       ? params.grad_bound
                       : std::max(1.0, grad_norm_running_max);
  const double base = static_cast<double>(params.conditions) * kBoundConstant *
                      m *
                      std::sqrt(2.0 * params.kl_radius * static_cast<double>(t));
  record.bound_sqrt_t.push_back(base);
  record.bound_sqrt_kt.push_back(
      base * std::sqrt(static_cast<double>(params.task_count)));
}

}  // namespace

RegretRecord regret_curve(const std::vector<Vector>& gradient_history,
                          const std::vector<ProbVector>& policy_history,
                          const BoundParams& params) {
  require(gradient_history.size() == policy_history.size(),
          ErrorCode::LengthMismatch, "histories differ in length");
  require(!gradient_history.empty(), ErrorCode::EmptySequence,
          "empty gradient history");
  RegretRecord record;
  Vector cumulative = Vector::Zero(gradient_history.front().size());
  double realized_sum = 0.0;
  double grad_max = 0.0;
  for (std::size_t t = 0; t < gradient_history.size(); ++t) {
    const Vector& g = gradient_history[t];
    require(g.size() == cumulative.size(), ErrorCode::LengthMismatch,
            "gradient lengths differ");
    require(g.size() == policy_history[t].size(), ErrorCode::LengthMismatch,
            "gradient and policy lengths differ");
    cumulative += g;
    realized_sum += g.dot(policy_history[t].vec());
    grad_max = std::max(grad_max, g.norm());
    record.realized.push_back(g.dot(policy_history[t].vec()));
    record.baseline.push_back(cumulative.maxCoeff());
    record.regret.push_back(cumulative.maxCoeff() - realized_sum);
    append_bounds(record, grad_max, params, static_cast<std::int64_t>(t) + 1);
  }
  return record;
}

RegretRecord regret_curve_policy(const std::vector<PolicyGrad>& gradient_history,
                                 const std::vector<PolicyPoint>& policy_history,
                                 BoundParams params) {
  require(gradient_history.size() == policy_history.size(),
          ErrorCode::LengthMismatch, "histories differ in length");
  require(!gradient_history.empty(), ErrorCode::EmptySequence,
          "empty gradient history");
  params.conditions = 2;
  RegretRecord record;
  PolicyGrad cumulative = PolicyGrad::Zero();
  double realized_sum = 0.0;
  double grad_max = 0.0;
  for (std::size_t t = 0; t < gradient_history.size(); ++t) {
    const PolicyGrad& g = gradient_history[t];
    cumulative += g;
    double realized = 0.0;
    for (Label s : {Label{0}, Label{1}}) {
      realized += g.row(s).transpose().dot(policy_history[t].given(s).vec());
    }
    realized_sum += realized;
    grad_max = std::max(grad_max, g.norm());
    const double baseline =
        cumulative.row(0).maxCoeff() + cumulative.row(1).maxCoeff();
    record.realized.push_back(realized);
    record.baseline.push_back(baseline);
    record.regret.push_back(baseline - realized_sum);
    append_bounds(record, grad_max, params, static_cast<std::int64_t>(t) + 1);
  }
  return record;
}

ConvergenceRecord convergence_curve(const std::vector<PolicyPoint>& policy_history,
                                    const PolicyPoint& reference, int window) {
  require(!policy_history.empty(), ErrorCode::EmptySequence,
          "empty policy history");
  require(window >= 1, ErrorCode::ValidationError, "window must be >= 1");
  ConvergenceRecord record;
  record.window = window;
  double window_sum = 0.0;
  for (std::size_t t = 0; t < policy_history.size(); ++t) {
    const double d0 =
        l1_distance(policy_history[t].given(0), reference.given(0));
    const double d1 =
        l1_distance(policy_history[t].given(1), reference.given(1));
    const double dmax = std::max(d0, d1);
    record.dist_given_zero.push_back(d0);
    record.dist_given_one.push_back(d1);
    record.dist_max.push_back(dmax);
    window_sum += dmax;
    if (t >= static_cast<std::size_t>(window)) {
      window_sum -= record.dist_max[t - static_cast<std::size_t>(window)];
    }
    const auto effective =
        std::min<std::size_t>(t + 1, static_cast<std::size_t>(window));
    record.window_avg.push_back(window_sum / static_cast<double>(effective));
  }
  return record;
}

double vote_accuracy(std::span<const Label> votes,
                     std::span<const Label> truths) {
  require(votes.size() == truths.size(), ErrorCode::LengthMismatch,
          "votes and truths differ in length");
  require(!votes.empty(), ErrorCode::EmptySequence, "no votes");
  std::size_t hits = 0;
  for (std::size_t k = 0; k < votes.size(); ++k) {
    if (votes[k] == truths[k]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(votes.size());
}

double loglog_slope(const std::vector<double>& series) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (series[t] <= 0.0) continue;
    const double x = std::log(static_cast<double>(t) + 1.0);
    const double y = std::log(series[t]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  require(m >= 2, ErrorCode::EmptySequence,
          "need at least two positive entries for a slope");
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

}  // namespace peg
