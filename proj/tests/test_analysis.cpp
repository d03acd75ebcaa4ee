#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "peg/analysis.hpp"
#include "test_util.hpp"

using namespace peg;

namespace {

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

}  // namespace

TEST_CASE("regret is zero when the policy sits on the hindsight vertex") {
  std::vector<Vector> grads(10, vec2(1.0, 0.0));
  std::vector<ProbVector> policies(10, ProbVector{1.0, 0.0});
  const RegretRecord record = regret_curve(grads, policies);
  CHECK(record.regret.back() == doctest::Approx(0.0).epsilon(1e-12));
  for (double r : record.regret) CHECK(r >= -1e-9);
}

TEST_CASE("frozen uniform policy against a constant gradient") {
  std::vector<Vector> grads(10, vec2(1.0, 0.0));
  std::vector<ProbVector> policies(10, ProbVector::uniform(2));
  const RegretRecord record = regret_curve(grads, policies);
  CHECK(record.baseline.back() == doctest::Approx(10.0));
  CHECK(record.regret.back() == doctest::Approx(5.0).epsilon(1e-12));
  // Linear growth: log-log slope close to one.
  CHECK(loglog_slope(record.regret) >= 0.95);
}

TEST_CASE("bound overlay scales as sqrt(T)") {
  std::vector<Vector> grads(64, vec2(0.5, -0.5));
  std::vector<ProbVector> policies(64, ProbVector::uniform(2));
  BoundParams params;
  params.grad_bound = 1.0;
  params.task_count = 8;
  const RegretRecord record = regret_curve(grads, policies, params);
  CHECK(record.bound_sqrt_t[63] / record.bound_sqrt_t[15] ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(record.bound_sqrt_kt[63] ==
        doctest::Approx(record.bound_sqrt_t[63] * std::sqrt(8.0)).epsilon(1e-12));
}

TEST_CASE("running-max bound uses the gradient history") {
  std::vector<Vector> grads{vec2(0.25, 0.0), vec2(2.0, 0.0)};
  std::vector<ProbVector> policies(2, ProbVector::uniform(2));
  const RegretRecord record = regret_curve(grads, policies);
  // Floors at 1.0 on the first step, then tracks the observed max norm.
  const double c = 3.414213562373095;
  CHECK(record.bound_sqrt_t[0] ==
        doctest::Approx(c * std::sqrt(2.0 * std::log(2.0))).epsilon(1e-12));
  CHECK(record.bound_sqrt_t[1] ==
        doctest::Approx(2.0 * c * std::sqrt(2.0 * std::log(2.0) * 2.0))
            .epsilon(1e-12));
}

TEST_CASE("policy-point regret sums the per-condition simplices") {
  PolicyGrad g = PolicyGrad::Zero();
  g(0, 0) = 1.0;
  g(1, 1) = 2.0;
  std::vector<PolicyGrad> grads(4, g);
  std::vector<PolicyPoint> policies(4, PolicyPoint::uniform_binary());
  const RegretRecord record = regret_curve_policy(grads, policies);
  // Realized 1.5 per round, baseline 3 per round.
  CHECK(record.realized[0] == doctest::Approx(1.5));
  CHECK(record.baseline[3] == doctest::Approx(12.0));
  CHECK(record.regret[3] == doctest::Approx(6.0));
}

TEST_CASE("omd trajectory satisfies the Hannan property") {
  // Fixed linear environment; OMD with the doubling schedule.
  Schedule schedule;
  schedule.kind = ScheduleKind::Doubling;
  schedule.grad_bound = 1.0;
  const Vector g = vec2(1.0, 0.2);
  ProbVector policy = ProbVector::uniform(2);
  std::vector<Vector> grads;
  std::vector<ProbVector> policies;
  const int total = 1024;
  for (int t = 1; t <= total; ++t) {
    grads.push_back(g);
    policies.push_back(policy);
    policy = omd_step(policy, g, schedule_rate(schedule, t));
  }
  const RegretRecord record = regret_curve(grads, policies);
  for (double r : record.regret) CHECK(r >= -1e-9);
  // Average regret nonincreasing beyond the first doubling epoch.
  for (std::size_t t = 2; t + 1 < record.regret.size(); ++t) {
    const double avg_now = record.regret[t + 1] / static_cast<double>(t + 2);
    const double avg_prev = record.regret[t] / static_cast<double>(t + 1);
    CHECK(avg_now <= avg_prev + 1e-12);
  }
  CHECK(record.regret.back() <= record.bound_sqrt_t.back());
}

TEST_CASE("convergence record on a constant history") {
  const PolicyPoint reference = PolicyPoint::uniform_binary();
  std::vector<PolicyPoint> history(5, reference);
  const ConvergenceRecord record = convergence_curve(history, reference);
  for (double d : record.dist_max) CHECK(d == 0.0);
  for (double w : record.window_avg) CHECK(w == 0.0);
}

TEST_CASE("convergence distances and window averages") {
  const PolicyPoint reference = PolicyPoint::uniform_binary();
  const PolicyPoint off(ProbVector{0.9, 0.1}, ProbVector{0.5, 0.5});
  const ConvergenceRecord record =
      convergence_curve({off, reference}, reference, 2);
  CHECK(record.dist_given_zero[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(record.dist_given_one[0] == doctest::Approx(0.0));
  CHECK(record.dist_max[0] == doctest::Approx(0.8));
  CHECK(record.window_avg[1] == doctest::Approx(0.4).epsilon(1e-12));
  for (double d : record.dist_max) {
    CHECK(d >= 0.0);
    CHECK(d <= 2.0);
  }
}

TEST_CASE("vote accuracy") {
  const std::vector<Label> votes{1, 0, 1};
  const std::vector<Label> all_right{1, 0, 1};
  const std::vector<Label> all_wrong{0, 1, 0};
  const std::vector<Label> two_thirds{1, 1, 1};
  CHECK(vote_accuracy(votes, all_right) == doctest::Approx(1.0));
  CHECK(vote_accuracy(votes, all_wrong) == doctest::Approx(0.0));
  CHECK(vote_accuracy(votes, two_thirds) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_WITH_AS(
      vote_accuracy(votes, std::vector<Label>{1}),
      doctest::Contains("LengthMismatch"), Error);
}

TEST_CASE("vote accuracy is invariant under a shared permutation") {
  Rng rng(200);
  std::vector<Label> votes(50), truths(50);
  for (int k = 0; k < 50; ++k) {
    votes[static_cast<std::size_t>(k)] = rng.bernoulli_label(0.5);
    truths[static_cast<std::size_t>(k)] = rng.bernoulli_label(0.5);
  }
  const double base = vote_accuracy(votes, truths);
  std::vector<Label> votes_r(votes.rbegin(), votes.rend());
  std::vector<Label> truths_r(truths.rbegin(), truths.rend());
  CHECK(vote_accuracy(votes_r, truths_r) == doctest::Approx(base));
}

TEST_CASE("loglog slope of a clean power law") {
  std::vector<double> series;
  for (int t = 1; t <= 1000; ++t)
    series.push_back(3.0 * std::pow(static_cast<double>(t), 0.5));
  CHECK(loglog_slope(series) == doctest::Approx(0.5).epsilon(1e-9));
}
