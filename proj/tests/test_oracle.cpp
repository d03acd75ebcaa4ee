#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "peg/oracle.hpp"
#include "test_util.hpp"

using namespace peg;

namespace {

JointDist diag_half() {
  Matrix2 m;
  m << 0.5, 0.0, 0.0, 0.5;
  return JointDist(m);
}

WorldModel informative_world() {
  return WorldModel::symmetric(0.5, {0.9, 0.8});
}

}  // namespace

TEST_CASE("expected determinant by enumeration: frozen values") {
  CHECK(expected_det_exact(diag_half(), 2) == doctest::Approx(0.5).epsilon(1e-13));

  Matrix2 indep;
  indep << 0.25, 0.25, 0.25, 0.25;
  CHECK(expected_det_exact(JointDist(indep), 3) ==
        doctest::Approx(0.0).epsilon(1e-13));

  Matrix2 corr;
  corr << 0.41, 0.09, 0.09, 0.41;
  CHECK(expected_det_exact(JointDist(corr), 4) ==
        doctest::Approx(1.92).epsilon(1e-12));
}

TEST_CASE("unbiasedness: enumeration equals the pair-count closed form") {
  Rng rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const JointDist u = test::random_joint(rng);
    for (int size = 2; size <= 5; ++size) {
      const double enumerated = expected_det_exact(u, size);
      const double closed =
          static_cast<double>(pair_count_constant(size)) * det2(u);
      CHECK(std::abs(enumerated - closed) <= 1e-12);
    }
  }
}

TEST_CASE("enumeration size limits") {
  CHECK_THROWS_WITH_AS(expected_det_exact(diag_half(), 1),
                       doctest::Contains("SubsetTooSmall"), Error);
  CHECK_THROWS_WITH_AS(expected_det_exact(diag_half(), 7),
                       doctest::Contains("SubsetTooLarge"), Error);
}

TEST_CASE("expected payment of a perfect truthful pair") {
  const WorldModel world = WorldModel::symmetric(0.5, {1.0, 1.0});
  const std::vector<Strategy> truthful(2, Strategy::truthful());
  const double value = expected_payment_exact(
      world, GeneratorModel::ideal(), truthful, split_tasks(4), 0);
  CHECK(value == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("constant strategies earn nothing in expectation") {
  const std::vector<Strategy> strategies{Strategy::truthful(),
                                         Strategy::constant(1)};
  CHECK(expected_payment_exact(informative_world(), GeneratorModel::ideal(),
                               strategies, split_tasks(4), 0) ==
        doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("flip deviation earns exactly the truthful payment") {
  const WorldModel world = informative_world();
  const GeneratorModel gen = GeneratorModel::ideal();
  const TaskSplit split = split_tasks(8);
  const std::vector<Strategy> truthful(2, Strategy::truthful());
  std::vector<Strategy> flipped = truthful;
  flipped[0] = Strategy::flip();
  CHECK(expected_payment_exact(world, gen, truthful, split, 0) ==
        doctest::Approx(expected_payment_exact(world, gen, flipped, split, 0))
            .epsilon(1e-12));
}

TEST_CASE("independence factorization matches full enumeration at K=4") {
  Rng rng(103);
  const TaskSplit split = split_tasks(4);
  for (int trial = 0; trial < 20; ++trial) {
    const JointDist u = test::random_joint(rng);
    const double full = expected_pair_payment_enumeration(u, split);
    const double factored =
        expected_det_exact(u, 2) * expected_det_exact(u, 2);
    CHECK(std::abs(full - factored) <= 1e-12);
    CHECK(full >= -1e-12);  // equals (a det U)^2
    CHECK(full == doctest::Approx(4.0 * det2(u) * det2(u)).epsilon(1e-10));
  }

  // Same identity at the payment level for a two-agent world.
  const WorldModel world = WorldModel::symmetric(0.45, {0.9, 0.75});
  Matrix2 tilt;
  tilt << 0.8, 0.2, 0.25, 0.75;
  const std::vector<Strategy> strategies{Strategy(tilt), Strategy::truthful()};
  const JointDist u = joint_report_distribution(
      world, strategies[0], strategies[1], GeneratorModel::ideal(), 0, 1);
  const double payment_route = expected_payment_exact(
      world, GeneratorModel::ideal(), strategies, split, 0);
  CHECK(payment_route ==
        doctest::Approx(expected_pair_payment_enumeration(u, split))
            .epsilon(1e-12));
}

TEST_CASE("closed-form payment agrees with the enumeration route") {
  Rng rng(104);
  const TaskSplit split = split_tasks(8);
  for (int trial = 0; trial < 20; ++trial) {
    const WorldModel world = WorldModel::symmetric(
        0.2 + 0.6 * rng.uniform01(),
        {0.6 + 0.3 * rng.uniform01(), 0.6 + 0.3 * rng.uniform01(),
         0.6 + 0.3 * rng.uniform01()});
    const std::vector<Strategy> strategies{test::random_strategy(rng),
                                           test::random_strategy(rng),
                                           test::random_strategy(rng)};
    const double enumerated = expected_payment_exact(
        world, GeneratorModel::ideal(), strategies, split, 0);
    const double closed = expected_payment_closed_raw(
        world, GeneratorModel::ideal(), strategies[0].matrix(), strategies,
        split, 0);
    CHECK(enumerated == doctest::Approx(closed).epsilon(1e-11));
  }
}

TEST_CASE("exact gradient vanishes against an uninformative peer") {
  const std::vector<Strategy> strategies{Strategy::truthful(),
                                         Strategy::constant(0)};
  const Matrix2 grad =
      exact_gradient(informative_world(), GeneratorModel::ideal(), strategies,
                     split_tasks(4), 0);
  CHECK(grad.cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("exact gradient is symmetric under label swap") {
  Matrix2 symmetric;
  symmetric << 0.7, 0.3, 0.3, 0.7;
  const std::vector<Strategy> strategies(2, Strategy(symmetric));
  const WorldModel world = WorldModel::symmetric(0.5, {0.85, 0.85});
  const Matrix2 grad = exact_gradient(world, GeneratorModel::ideal(),
                                      strategies, split_tasks(8), 0);
  CHECK(grad(0, 0) == doctest::Approx(grad(1, 1)).epsilon(1e-12));
  CHECK(grad(0, 1) == doctest::Approx(grad(1, 0)).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(105);
  for (int trial = 0; trial < 20; ++trial) {
    const WorldModel world = WorldModel::symmetric(
        0.25 + 0.5 * rng.uniform01(),
        {0.6 + 0.35 * rng.uniform01(), 0.6 + 0.35 * rng.uniform01()});
    const std::vector<Strategy> strategies{test::random_strategy(rng),
                                           test::random_strategy(rng)};
    const TaskSplit split = split_tasks(4 + 2 * static_cast<int>(rng.below(3)));
    const Matrix2 analytic = exact_gradient(world, GeneratorModel::ideal(),
                                            strategies, split, 0);
    const Matrix2 fd = finite_difference_gradient(
        world, GeneratorModel::ideal(), strategies, split, 0);
    for (int s = 0; s < 2; ++s) {
      for (int r = 0; r < 2; ++r) {
        const double scale =
            std::max({std::abs(analytic(s, r)), std::abs(fd(s, r)), 1e-9});
        CHECK(std::abs(analytic(s, r) - fd(s, r)) / scale < 1e-4);
      }
    }
  }
}

TEST_CASE("discriminator estimator mean matches the exact gradient") {
  const WorldModel world = WorldModel::symmetric(0.5, {0.9, 0.8});
  const GeneratorModel gen = GeneratorModel::ideal();
  Matrix2 tilt;
  tilt << 0.65, 0.35, 0.3, 0.7;
  const std::vector<Strategy> strategies{Strategy(tilt),
                                         Strategy::truthful()};
  const PolicyPoint policy = PolicyPoint::from_strategy(strategies[0]);
  const TaskSplit split = split_tasks(8);

  Rng rng(106);
  const int samples = 30000;
  Matrix2 mean = Matrix2::Zero();
  Matrix2 m2 = Matrix2::Zero();
  for (int s = 0; s < samples; ++s) {
    TaskBatch batch = sample_batch(world, gen, 8, rng);
    batch = apply_strategies(batch, strategies, rng);
    const double pay = payment(batch.reports, split, 0);
    const Matrix2 grad = reinforce_gradient_discriminator(batch, 0, pay, policy);
    const Matrix2 delta = grad - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta.cwiseProduct(grad - mean);
  }

  const Matrix2 exact = exact_gradient(world, gen, strategies, split, 0);
  for (Label cond : {Label{0}, Label{1}}) {
    const Vector target =
        logit_pullback(exact.row(cond).transpose(), policy.given(cond));
    for (int r = 0; r < 2; ++r) {
      const double se = std::sqrt(m2(cond, r) / (samples - 1) / samples);
      CHECK(std::abs(mean(cond, r) - target(r)) <= 3.0 * se + 1e-12);
    }
  }
}

TEST_CASE("generator estimator mean matches the exact utility gradient") {
  const WorldModel world = WorldModel::symmetric(0.5, {0.9, 0.8, 0.85});
  Matrix2 gen_tilt;
  gen_tilt << 0.7, 0.3, 0.35, 0.65;
  const PolicyPoint gen_policy = PolicyPoint::from_strategy(Strategy(gen_tilt));
  const GeneratorModel gen(gen_policy);
  const std::vector<Strategy> strategies(3, Strategy::truthful());

  Rng rng(107);
  const int samples = 30000;
  const int tasks = 8;
  Matrix2 mean = Matrix2::Zero();
  Matrix2 m2 = Matrix2::Zero();
  for (int s = 0; s < samples; ++s) {
    TaskBatch batch = sample_batch(world, gen, tasks, rng);
    batch = apply_strategies(batch, strategies, rng);
    const std::vector<Label> votes = majority_votes(batch.reports);
    const Matrix2 grad = reinforce_gradient_generator(batch, votes, gen_policy);
    const Matrix2 delta = grad - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta.cwiseProduct(grad - mean);
  }

  // Tasks are i.i.d., so the batch estimator mean is K times the per-task
  // logit gradient.
  const Matrix2 exact = exact_generator_gradient(world, strategies);
  for (Label cond : {Label{0}, Label{1}}) {
    const Vector target =
        logit_pullback(exact.row(cond).transpose(), gen_policy.given(cond)) *
        static_cast<double>(tasks);
    for (int r = 0; r < 2; ++r) {
      const double se = std::sqrt(m2(cond, r) / (samples - 1) / samples);
      CHECK(std::abs(mean(cond, r) - target(r)) <= 3.0 * se + 1e-12);
    }
  }
}

TEST_CASE("exact generator utility is the linear form of its gradient") {
  const WorldModel world = WorldModel::symmetric(0.4, {0.9, 0.75, 0.8});
  const std::vector<Strategy> strategies{Strategy::truthful(),
                                         Strategy::truthful(),
                                         Strategy::flip()};
  const Matrix2 coeff = exact_generator_gradient(world, strategies);
  Rng rng(108);
  for (int trial = 0; trial < 20; ++trial) {
    const PolicyPoint policy(test::random_simplex(rng), test::random_simplex(rng));
    double linear = 0.0;
    for (int v = 0; v < 2; ++v) {
      for (int y = 0; y < 2; ++y) {
        linear += coeff(v, y) * policy.given(static_cast<Label>(v))[y];
      }
    }
    CHECK(exact_generator_utility(world, strategies, policy) ==
          doctest::Approx(linear).epsilon(1e-12));
  }
}

TEST_CASE("truthful vertex is a one-sided maximum") {
  const WorldModel world = informative_world();
  const GeneratorModel gen = GeneratorModel::ideal();
  const TaskSplit split = split_tasks(8);
  std::vector<Strategy> strategies(2, Strategy::truthful());
  const double truthful_value =
      expected_payment_exact(world, gen, strategies, split, 0);
  for (double h : {1e-4, 1e-2, 0.1}) {
    Matrix2 off_a;
    off_a << 1.0 - h, h, 0.0, 1.0;
    strategies[0] = Strategy(off_a);
    CHECK(expected_payment_exact(world, gen, strategies, split, 0) <=
          truthful_value + 1e-12);
    Matrix2 off_b;
    off_b << 1.0, 0.0, h, 1.0 - h;
    strategies[0] = Strategy(off_b);
    CHECK(expected_payment_exact(world, gen, strategies, split, 0) <=
          truthful_value + 1e-12);
  }
}

TEST_CASE("dominance on an informative world") {
  const std::vector<Strategy> peers{Strategy::truthful()};
  const DominanceReport report =
      check_dominance(informative_world(), GeneratorModel::ideal(), peers, 4,
                      SplitPolicy::Half, 0.1);
  CHECK(report.worst_gap > 1e-6);
  CHECK(report.permutation_tie);
  CHECK(report.truthful_value >= report.max_deviation_value - 1e-9);
}

TEST_CASE("dominance holds against a lying peer") {
  Matrix2 liar;
  liar << 0.3, 0.7, 0.6, 0.4;
  const std::vector<Strategy> peers{Strategy(liar)};
  const DominanceReport report =
      check_dominance(informative_world(), GeneratorModel::ideal(), peers, 8,
                      SplitPolicy::Half, 0.1);
  CHECK(report.worst_gap >= -1e-9);
  CHECK(report.permutation_tie);
}

TEST_CASE("uninformative peer is rejected") {
  const std::vector<Strategy> peers{Strategy::constant(1)};
  CHECK_THROWS_WITH_AS(
      check_dominance(informative_world(), GeneratorModel::ideal(), peers, 4,
                      SplitPolicy::Half, 0.1),
      doctest::Contains("UninformativePeer"), Error);
}

TEST_CASE("a sign-flipped payment breaks dominance") {
  const WorldModel world = informative_world();
  const GeneratorModel gen = GeneratorModel::ideal();
  const TaskSplit split = split_tasks(4);
  const std::vector<Strategy> all{Strategy::truthful(), Strategy::truthful()};
  const auto flipped = [&](double a, double b) {
    Matrix2 m;
    m << 1.0 - a, a, b, 1.0 - b;
    return -expected_payment_closed_raw(world, gen, m, all, split, 0);
  };
  const DominanceReport report = dominance_grid(flipped, 0.1);
  CHECK(report.worst_gap < 0.0);
}

TEST_CASE("gradient entry bound dominates observed gradients") {
  Rng rng(109);
  for (int trial = 0; trial < 50; ++trial) {
    const WorldModel world = WorldModel::symmetric(
        0.2 + 0.6 * rng.uniform01(),
        {0.55 + 0.4 * rng.uniform01(), 0.55 + 0.4 * rng.uniform01()});
    std::vector<Strategy> strategies{test::random_strategy(rng),
                                     test::random_strategy(rng)};
    const TaskSplit split = split_tasks(4 + 2 * static_cast<int>(rng.below(3)));
    const double bound = payment_entry_gradient_bound(
        world, GeneratorModel::ideal(), strategies, split, 0);
    const Matrix2 grad = exact_gradient(world, GeneratorModel::ideal(),
                                        strategies, split, 0);
    CHECK(grad.cwiseAbs().maxCoeff() <= bound + 1e-12);
  }
}

TEST_CASE("best fixed policy is a vertex of the summed gradients") {
  const std::vector<Vector> repeated{(Vector(2) << 1.0, 0.0).finished(),
                                     (Vector(2) << 1.0, 0.0).finished()};
  const BestFixedPolicy a = best_fixed_policy(repeated);
  CHECK(a.vertex == 0);
  CHECK(a.value == doctest::Approx(2.0));

  const std::vector<Vector> tied{(Vector(2) << 1.0, 0.0).finished(),
                                 (Vector(2) << 0.0, 1.0).finished()};
  const BestFixedPolicy b = best_fixed_policy(tied);
  CHECK(b.vertex == 0);  // tie resolves to the lowest index
  CHECK(b.value == doctest::Approx(1.0));

  CHECK_THROWS_WITH_AS(best_fixed_policy({}),
                       doctest::Contains("EmptySequence"), Error);

  Rng rng(110);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vector> grads;
    Vector total = Vector::Zero(2);
    for (int t = 0; t < 20; ++t) {
      Vector g(2);
      g << rng.uniform01() - 0.5, rng.uniform01() - 0.5;
      total += g;
      grads.push_back(g);
    }
    const BestFixedPolicy best = best_fixed_policy(grads);
    CHECK(best.value == doctest::Approx(std::max(total(0), total(1))));
  }
}

TEST_CASE("vote probability matrix rows are distributions") {
  const WorldModel world = WorldModel::symmetric(0.5, {0.9, 0.7, 0.76});
  const std::vector<Strategy> strategies(3, Strategy::truthful());
  const Matrix2 votes = vote_probability_matrix(world, strategies);
  CHECK(votes.row(0).sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(votes.row(1).sum() == doctest::Approx(1.0).epsilon(1e-12));
  // Truthful majority of (0.9, 0.7, 0.76): direct sum over report combos.
  const double expected = 0.9 * 0.7 * 0.76 + 0.9 * 0.7 * 0.24 +
                          0.9 * 0.3 * 0.76 + 0.1 * 0.7 * 0.76;
  CHECK(votes(1, 1) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(exact_vote_accuracy(world, GeneratorModel::ideal(), strategies) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("report accuracy under truthful and garbled strategies") {
  const WorldModel world = WorldModel::symmetric(0.5, {0.9, 0.7});
  const GeneratorModel gen = GeneratorModel::ideal();
  CHECK(exact_report_accuracy(world, gen, 0, Strategy::truthful()) ==
        doctest::Approx(0.9).epsilon(1e-12));
  CHECK(exact_report_accuracy(world, gen, 0, Strategy::flip()) ==
        doctest::Approx(0.1).epsilon(1e-12));
  Matrix2 tilt;
  tilt << 0.6, 0.4, 0.4, 0.6;
  // 0.9*0.6 + 0.1*0.4 mass on the truth.
  CHECK(exact_report_accuracy(world, gen, 0, Strategy(tilt)) ==
        doctest::Approx(0.58).epsilon(1e-12));
}
