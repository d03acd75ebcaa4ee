#include "peg/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace peg {

namespace {

using nlohmann::json;

std::string hex_u64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

std::string file_comment(const ExperimentConfig& config) {
  return "config_hash=" + hex_u64(config_hash(config)) +
         " seed=" + std::to_string(config.seed);
}

std::vector<Label> to_labels(const LabelVector& v) {
  return std::vector<Label>(v.data(), v.data() + v.size());
}

const char* role_name(Role role) {
  return role == Role::Generator ? "generator" : "discriminator";
}

void run_indexed_jobs(int total, int jobs,
                      const std::function<void(int)>& work) {
  if (jobs <= 1 || total <= 1) {
    for (int i = 0; i < total; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      try {
        work(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int threads = std::min(jobs, total);
  pool.reserve(static_cast<std::size_t>(threads));
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ReplicationResult run_replication(const ExperimentConfig& config,
                                  int replication) {
  ReplicationResult result;
  result.replication = replication;
  result.task_count = config.task_count;
  result.discriminators = config.agents;

  const WorldModel world = config.world();
  std::vector<AgentState> states = config.initial_states();
  const int n = config.agents;

  std::vector<Strategy> initial_strategies;
  initial_strategies.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    initial_strategies.push_back(
        states[static_cast<std::size_t>(i)].policy.to_strategy());
  }
  const GeneratorModel initial_generator(
      states[static_cast<std::size_t>(n)].policy);
  for (int i = 0; i < n; ++i) {
    result.initial_report_accuracy.push_back(exact_report_accuracy(
        world, initial_generator, i,
        initial_strategies[static_cast<std::size_t>(i)]));
  }
  result.initial_vote_accuracy = exact_vote_accuracy(
      world, initial_generator, initial_strategies, config.tie_rule);

  Rng rng(derive_seed(config.seed, StreamTag::Replication,
                      static_cast<std::uint64_t>(replication)));
  const RoundOptions options = config.round_options();

  for (std::int64_t t = 1; t <= config.iterations; ++t) {
    std::vector<PolicyPoint> before;
    before.reserve(states.size());
    for (const auto& s : states) before.push_back(s.policy);
    result.played.push_back(std::move(before));

    RoundResult round =
        run_peg_round(states, world, config.task_count, options, rng, t);

    std::vector<double> normalized(round.payments.size());
    const double a1 = static_cast<double>(
        pair_count_constant(round.subset_one_size));
    const double a2 = static_cast<double>(
        pair_count_constant(round.subset_two_size));
    for (std::size_t i = 0; i < round.payments.size(); ++i) {
      normalized[i] = round.payments[i] / (a1 * a2 * static_cast<double>(n - 1));
    }
    result.payments.push_back(round.payments);
    result.normalized_payments.push_back(std::move(normalized));
    result.votes.push_back(round.votes);
    result.truths.push_back(to_labels(round.batch.truths));
    result.targets.push_back(to_labels(round.batch.generator_targets));
    result.vote_accuracy_series.push_back(
        vote_accuracy(round.votes, result.truths.back()));

    std::vector<PolicyPoint> after;
    after.reserve(states.size());
    for (const auto& s : states) after.push_back(s.policy);
    result.updated.push_back(std::move(after));

    std::vector<PolicyGrad> grads = round.discriminator_gradients;
    grads.push_back(round.generator_gradient);
    result.gradients.push_back(std::move(grads));
  }

  for (int a = 0; a <= n; ++a) {
    std::vector<PolicyGrad> grad_hist;
    std::vector<PolicyPoint> policy_hist;
    grad_hist.reserve(result.gradients.size());
    policy_hist.reserve(result.played.size());
    for (std::size_t t = 0; t < result.gradients.size(); ++t) {
      grad_hist.push_back(result.gradients[t][static_cast<std::size_t>(a)]);
      policy_hist.push_back(result.played[t][static_cast<std::size_t>(a)]);
    }
    BoundParams params;
    params.kl_radius = (a == n) ? config.generator_schedule.kl_radius
                                : config.schedule_for_agent(a).kl_radius;
    params.task_count = config.task_count;
    result.regrets.push_back(
        regret_curve_policy(grad_hist, policy_hist, params));
  }

  const PolicyPoint truthful = PolicyPoint::from_strategy(Strategy::truthful());
  for (int a = 0; a < n; ++a) {
    std::vector<PolicyPoint> policy_hist;
    policy_hist.reserve(result.updated.size());
    for (std::size_t t = 0; t < result.updated.size(); ++t) {
      policy_hist.push_back(result.updated[t][static_cast<std::size_t>(a)]);
    }
    result.convergence.push_back(convergence_curve(policy_hist, truthful));
  }

  std::vector<Strategy> final_strategies;
  final_strategies.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    final_strategies.push_back(
        states[static_cast<std::size_t>(i)].policy.to_strategy());
  }
  const GeneratorModel final_generator(states[static_cast<std::size_t>(n)].policy);
  for (int i = 0; i < n; ++i) {
    result.final_report_accuracy.push_back(exact_report_accuracy(
        world, final_generator, i, final_strategies[static_cast<std::size_t>(i)]));
  }
  result.final_vote_accuracy = exact_vote_accuracy(
      world, final_generator, final_strategies, config.tie_rule);
  return result;
}

SimulateResult cmd_simulate(const ExperimentConfig& config, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  SimulateResult out;
  out.replications.resize(static_cast<std::size_t>(config.replications));
  run_indexed_jobs(config.replications, jobs, [&](int rep) {
    out.replications[static_cast<std::size_t>(rep)] =
        run_replication(config, rep);
  });

  const std::filesystem::path dir(config.out_dir);
  const std::string comment = file_comment(config);
  const int n = config.agents;

  CsvBuilder payments(comment, {"rep", "t", "agent", "payment", "normalized"});
  CsvBuilder policies(comment,
                      {"rep", "t", "agent", "role", "cond", "p0", "p1"});
  CsvBuilder votes(comment, {"rep", "t", "task", "vote", "truth", "target"});
  CsvBuilder regret(comment, {"rep", "agent", "t", "realized", "baseline",
                              "regret", "bound_sqrt_t", "bound_sqrt_kt"});
  CsvBuilder convergence(comment, {"rep", "agent", "t", "dist_given_zero",
                                   "dist_given_one", "dist_max", "window_avg"});

  for (const auto& rep : out.replications) {
    const std::string r = std::to_string(rep.replication);
    for (std::size_t t = 0; t < rep.payments.size(); ++t) {
      const std::string ts = std::to_string(t + 1);
      for (int a = 0; a < n; ++a) {
        payments.add_row(
            {r, ts, std::to_string(a),
             format_double(rep.payments[t][static_cast<std::size_t>(a)]),
             format_double(
                 rep.normalized_payments[t][static_cast<std::size_t>(a)])});
      }
      for (int a = 0; a <= n; ++a) {
        const PolicyPoint& p = rep.updated[t][static_cast<std::size_t>(a)];
        const Role role = (a == n) ? Role::Generator : Role::Discriminator;
        for (Label cond : {Label{0}, Label{1}}) {
          policies.add_row({r, ts, std::to_string(a), role_name(role),
                            std::to_string(int(cond)),
                            format_double(p.given(cond)[0]),
                            format_double(p.given(cond)[1])});
        }
      }
      for (std::size_t k = 0; k < rep.votes[t].size(); ++k) {
        votes.add_row({r, ts, std::to_string(k),
                       std::to_string(int(rep.votes[t][k])),
                       std::to_string(int(rep.truths[t][k])),
                       std::to_string(int(rep.targets[t][k]))});
      }
      for (int a = 0; a <= n; ++a) {
        const RegretRecord& rec = rep.regrets[static_cast<std::size_t>(a)];
        regret.add_row({r, std::to_string(a), ts,
                        format_double(rec.realized[t]),
                        format_double(rec.baseline[t]),
                        format_double(rec.regret[t]),
                        format_double(rec.bound_sqrt_t[t]),
                        format_double(rec.bound_sqrt_kt[t])});
      }
      for (int a = 0; a < n; ++a) {
        const ConvergenceRecord& rec =
            rep.convergence[static_cast<std::size_t>(a)];
        convergence.add_row({r, std::to_string(a), ts,
                             format_double(rec.dist_given_zero[t]),
                             format_double(rec.dist_given_one[t]),
                             format_double(rec.dist_max[t]),
                             format_double(rec.window_avg[t])});
      }
    }
  }

  write_file_atomic(dir / "payments.csv", payments.content());
  write_file_atomic(dir / "policies.csv", policies.content());
  write_file_atomic(dir / "votes.csv", votes.content());
  write_file_atomic(dir / "regret.csv", regret.content());
  write_file_atomic(dir / "convergence.csv", convergence.content());
  out.files = {dir / "payments.csv", dir / "policies.csv", dir / "votes.csv",
               dir / "regret.csv", dir / "convergence.csv"};

  const auto elapsed = std::chrono::steady_clock::now() - start;
  out.wall_clock_seconds =
      std::chrono::duration<double>(elapsed).count();

  json summary;
  summary["config"] = json::parse(canonical_json(config));
  summary["config_hash"] = hex_u64(config_hash(config));
  summary["seed"] = config.seed;
  summary["wall_clock_seconds"] = out.wall_clock_seconds;
  json reps = json::array();
  for (const auto& rep : out.replications) {
    json entry;
    entry["replication"] = rep.replication;
    entry["initial_report_accuracy"] = rep.initial_report_accuracy;
    entry["final_report_accuracy"] = rep.final_report_accuracy;
    entry["initial_vote_accuracy"] = rep.initial_vote_accuracy;
    entry["final_vote_accuracy"] = rep.final_vote_accuracy;
    json finals = json::array();
    for (const auto& rec : rep.regrets) finals.push_back(rec.regret.back());
    entry["final_regret"] = finals;
    reps.push_back(entry);
  }
  summary["replications"] = reps;
  write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");
  out.files.push_back(dir / "summary.json");
  return out;
}

bool VerifyReport::all_pass() const {
  for (const auto& check : checks) {
    if (check.status == "FAIL") return false;
  }
  return true;
}

namespace {

JointDist random_joint(Rng& rng) {
  Matrix2 m;
  double sum = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      m(a, b) = rng.uniform01() + 1e-3;
      sum += m(a, b);
    }
  }
  return JointDist(m / sum);
}

Strategy random_strategy(Rng& rng) {
  Matrix2 m;
  const double a = rng.uniform01();
  const double b = rng.uniform01();
  m << 1.0 - a, a, b, 1.0 - b;
  return Strategy(m);
}

double permutation_distance(const Matrix2& g) {
  const double from_identity = (g - Matrix2::Identity()).cwiseAbs().sum();
  Matrix2 flip;
  flip << 0, 1, 1, 0;
  const double from_flip = (g - flip).cwiseAbs().sum();
  return std::min(from_identity, from_flip);
}

}  // namespace

VerifyReport cmd_verify(const ExperimentConfig& config) {
  VerifyReport report;
  const Rng root(derive_seed(config.seed, StreamTag::Verify));

  {  // Unbiasedness: enumeration vs pair-count closed form.
    Rng rng = root.child(StreamTag::Verify, 1);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const JointDist u = random_joint(rng);
      for (int size = 2; size <= 5; ++size) {
        const double enumerated = expected_det_exact(u, size);
        const double closed =
            static_cast<double>(pair_count_constant(size)) * det2(u);
        worst = std::max(worst, std::abs(enumerated - closed));
      }
    }
    report.checks.push_back({"unbiasedness", worst <= 1e-12 ? "PASS" : "FAIL",
                             worst,
                             "max |enumeration - a_l det(U)| over 20 joints, "
                             "sizes 2-5"});
  }

  {  // Payment expectation equals a1 a2 det(U)^2 and is nonnegative.
    Rng rng = root.child(StreamTag::Verify, 2);
    const TaskSplit split = split_tasks(4);
    double worst = 0.0;
    double most_negative = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const WorldModel world = WorldModel::symmetric(
          0.2 + 0.6 * rng.uniform01(),
          {0.6 + 0.35 * rng.uniform01(), 0.6 + 0.35 * rng.uniform01()});
      const Strategy s0 = random_strategy(rng);
      const Strategy s1 = random_strategy(rng);
      const JointDist u = joint_report_distribution(
          world, s0, s1, GeneratorModel::ideal(), 0, 1);
      const double enumerated = expected_pair_payment_enumeration(u, split);
      const double closed = 4.0 * det2(u) * det2(u);
      worst = std::max(worst, std::abs(enumerated - closed));
      most_negative = std::min(most_negative, enumerated);
    }
    const bool pass = worst <= 1e-12 && most_negative >= -1e-12;
    report.checks.push_back({"payment_expectation", pass ? "PASS" : "FAIL",
                             worst,
                             "max |full enumeration - a1 a2 det(U)^2| over 20 "
                             "random worlds, K=4"});
  }

  {  // Dominant truthfulness on the configured world.
    std::vector<Strategy> peers(
        static_cast<std::size_t>(config.agents - 1),
        Strategy(config.discriminator_initial));
    try {
      const DominanceReport dom = check_dominance(
          config.world(), config.initial_generator(), peers,
          config.task_count, SplitPolicy::Half, config.verify_grid_step);
      const bool pass = dom.worst_gap >= -1e-9 && dom.permutation_tie;
      report.checks.push_back(
          {"dominance", pass ? "PASS" : "FAIL", dom.worst_gap,
           "worst gap to best non-permutation deviation, grid step " +
               format_double(config.verify_grid_step)});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UninformativePeer) {
        report.checks.push_back(
            {"dominance", "SKIPPED(UninformativePeer)", 0.0, e.what()});
      } else {
        throw;
      }
    }
  }

  {  // Information monotonicity of DMI under garbling.
    Rng rng = root.child(StreamTag::Verify, 3);
    double worst_violation = 0.0;
    double min_strict_gap = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 1000; ++trial) {
      const JointDist u = random_joint(rng);
      const Strategy g = random_strategy(rng);
      const Matrix2 garbled_m = g.matrix().transpose() * u.matrix();
      const JointDist garbled(garbled_m);
      const double gap = dmi(u) - dmi(garbled);
      worst_violation = std::max(worst_violation, -gap);
      if (std::abs(det2(u)) > 0.01 &&
          permutation_distance(g.matrix()) > 0.05) {
        min_strict_gap = std::min(min_strict_gap, gap);
      }
    }
    const bool pass = worst_violation <= 1e-12 && min_strict_gap > 1e-9;
    report.checks.push_back({"information_monotonicity",
                             pass ? "PASS" : "FAIL", worst_violation,
                             "max dmi increase under garbling over 1000 "
                             "pairs; min strict gap " +
                                 format_double(min_strict_gap)});
  }

  {  // REINFORCE estimator mean against the exact gradient.
    Rng rng = root.child(StreamTag::Verify, 4);
    const WorldModel world = config.world();
    const GeneratorModel generator = config.initial_generator();
    std::vector<Strategy> strategies(
        static_cast<std::size_t>(config.agents),
        Strategy(config.discriminator_initial));
    const PolicyPoint policy =
        PolicyPoint::from_strategy(strategies[0]);
    const TaskSplit split = split_tasks(config.task_count);

    Matrix2 mean = Matrix2::Zero();
    Matrix2 m2 = Matrix2::Zero();
    const std::int64_t samples = config.verify_samples;
    for (std::int64_t s = 0; s < samples; ++s) {
      TaskBatch batch = sample_batch(world, generator, config.task_count, rng);
      batch = apply_strategies(batch, strategies, rng);
      const double pay = payment(batch.reports, split, 0);
      const Matrix2 grad =
          reinforce_gradient_discriminator(batch, 0, pay, policy);
      const Matrix2 delta = grad - mean;
      mean += delta / static_cast<double>(s + 1);
      m2 += delta.cwiseProduct(grad - mean);
    }
    const Matrix2 exact = exact_gradient(world, generator, strategies, split, 0);
    Matrix2 target;
    for (Label cond : {Label{0}, Label{1}}) {
      target.row(cond) = logit_pullback(exact.row(cond).transpose(),
                                        policy.given(cond))
                             .transpose();
    }
    double max_z = 0.0;
    for (int s = 0; s < 2; ++s) {
      for (int r = 0; r < 2; ++r) {
        const double var = m2(s, r) / static_cast<double>(samples - 1);
        const double se =
            std::sqrt(var / static_cast<double>(samples)) + 1e-15;
        max_z = std::max(max_z, std::abs(mean(s, r) - target(s, r)) / se);
      }
    }
    report.checks.push_back({"gradient_estimator",
                             max_z <= 3.0 ? "PASS" : "FAIL", max_z,
                             "max |mean - exact| in standard errors over " +
                                 std::to_string(samples) + " batches"});

    const Matrix2 fd =
        finite_difference_gradient(world, generator, strategies, split, 0);
    double max_rel = 0.0;
    for (int s = 0; s < 2; ++s) {
      for (int r = 0; r < 2; ++r) {
        const double scale =
            std::max({std::abs(exact(s, r)), std::abs(fd(s, r)), 1e-9});
        max_rel = std::max(max_rel, std::abs(exact(s, r) - fd(s, r)) / scale);
      }
    }
    report.checks.push_back({"gradient_finite_difference",
                             max_rel <= 1e-4 ? "PASS" : "FAIL", max_rel,
                             "max relative error, central differences h=1e-6"});
  }

  json j;
  j["config_hash"] = hex_u64(config_hash(config));
  j["seed"] = config.seed;
  json checks = json::array();
  for (const auto& check : report.checks) {
    checks.push_back({{"name", check.name},
                      {"status", check.status},
                      {"measured", check.measured},
                      {"detail", check.detail}});
  }
  j["checks"] = checks;
  j["all_pass"] = report.all_pass();
  write_file_atomic(std::filesystem::path(config.out_dir) /
                        "verify_report.json",
                    j.dump(2) + "\n");
  return report;
}

std::vector<SweepRow> batch_size_sweep(const ExperimentConfig& config,
                                       const std::vector<int>& k_values,
                                       int jobs) {
  for (int k : k_values) {
    require(k >= 4, ErrorCode::BatchTooSmall,
            "sweep batch size " + std::to_string(k) + " below 4");
  }
  std::vector<std::vector<SweepRow>> per_k(k_values.size());
  run_indexed_jobs(static_cast<int>(k_values.size()), jobs, [&](int ki) {
    const int k = k_values[static_cast<std::size_t>(ki)];
    ExperimentConfig swept = config;
    swept.task_count = k;
    std::vector<SweepRow> rows;
    for (int rep = 0; rep < config.replications; ++rep) {
      const ReplicationResult result = run_replication(swept, rep);
      SweepRow row;
      row.task_count = k;
      row.replication = rep;
      row.vote_accuracy = result.final_vote_accuracy;
      double total = 0.0;
      std::size_t count = 0;
      for (const auto& payments : result.payments) {
        for (double p : payments) {
          total += p;
          ++count;
        }
      }
      row.mean_payment = count > 0 ? total / static_cast<double>(count) : 0.0;
      double final_distance = 0.0;
      for (const auto& rec : result.convergence) {
        final_distance = std::max(final_distance, rec.dist_max.back());
      }
      row.final_distance = final_distance;
      rows.push_back(row);
    }
    per_k[static_cast<std::size_t>(ki)] = std::move(rows);
  });
  std::vector<SweepRow> out;
  for (auto& rows : per_k) {
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<SweepRow> cmd_sweep(const ExperimentConfig& config, int k_min,
                                int k_max, int jobs) {
  require(k_min >= 4, ErrorCode::ValidationError, "k_min: need K >= 4");
  require(k_max >= k_min, ErrorCode::ValidationError,
          "k_max: must be >= k_min");
  std::vector<int> ks;
  for (int k = k_min; k <= k_max; ++k) ks.push_back(k);
  const std::vector<SweepRow> rows = batch_size_sweep(config, ks, jobs);

  CsvBuilder csv(file_comment(config),
                 {"K", "replication", "vote_accuracy", "mean_payment",
                  "final_distance"});
  for (const auto& row : rows) {
    csv.add_row({std::to_string(row.task_count),
                 std::to_string(row.replication),
                 format_double(row.vote_accuracy),
                 format_double(row.mean_payment),
                 format_double(row.final_distance)});
  }
  write_file_atomic(std::filesystem::path(config.out_dir) / "sweep.csv",
                    csv.content());
  return rows;
}

RegretRunResult cmd_regret(const ExperimentConfig& config) {
  require(config.schedule.kind == ScheduleKind::Doubling ||
              config.schedule.kind == ScheduleKind::DoublingStated ||
              config.schedule.kind == ScheduleKind::PowerDecay,
          ErrorCode::ValidationError,
          "schedule: regret runs need a doubling or power_decay schedule");

  const WorldModel world = config.world();
  const GeneratorModel generator = GeneratorModel::ideal();
  const TaskSplit split = split_tasks(config.task_count);

  std::vector<Strategy> strategies(static_cast<std::size_t>(config.agents),
                                   Strategy::truthful());
  // A learner at exactly uniform sits on the zero-gradient saddle between
  // the truthful and flip optima; start from the configured initial policy.
  PolicyPoint policy =
      PolicyPoint::from_strategy(Strategy(config.discriminator_initial));
  for (Label cond : {Label{0}, Label{1}}) {
    policy.set(cond, floor_policy(policy.given(cond), config.policy_floor));
  }
  strategies[0] = policy.to_strategy();

  const double bound =
      payment_entry_gradient_bound(world, generator, strategies, split, 0);
  // Largest KL from the initial policy to any vertex comparator, so the
  // schedule constant covers whichever vertex hindsight picks.
  double kl_cap = 0.0;
  for (Label cond : {Label{0}, Label{1}}) {
    kl_cap = std::max(kl_cap, -std::log(policy.given(cond).vec().minCoeff()));
  }
  Schedule schedule = config.schedule;
  schedule.grad_bound = bound;
  schedule.kl_radius = kl_cap;

  std::vector<PolicyGrad> gradients;
  std::vector<PolicyPoint> played;
  gradients.reserve(static_cast<std::size_t>(config.iterations));
  played.reserve(static_cast<std::size_t>(config.iterations));
  for (std::int64_t t = 1; t <= config.iterations; ++t) {
    strategies[0] = policy.to_strategy();
    const Matrix2 grad =
        exact_gradient(world, generator, strategies, split, 0);
    gradients.push_back(grad);
    played.push_back(policy);
    const double rate = schedule_rate(schedule, t);
    for (Label cond : {Label{0}, Label{1}}) {
      ProbVector updated =
          omd_step(policy.given(cond), grad.row(cond).transpose(), rate);
      policy.set(cond, floor_policy(updated, config.policy_floor));
    }
  }

  RegretRunResult out;
  BoundParams params;
  params.grad_bound = bound;
  params.kl_radius = kl_cap;
  params.task_count = config.task_count;
  out.record = regret_curve_policy(gradients, played, params);
  out.slope = loglog_slope(out.record.regret);
  out.grad_bound = bound;
  out.final_regret = out.record.regret.back();

  const std::filesystem::path dir(config.out_dir);
  CsvBuilder csv(file_comment(config),
                 {"t", "realized", "baseline", "regret", "surrogate_bound",
                  "surrogate_bound_kt"});
  for (std::size_t t = 0; t < out.record.regret.size(); ++t) {
    csv.add_row({std::to_string(t + 1), format_double(out.record.realized[t]),
                 format_double(out.record.baseline[t]),
                 format_double(out.record.regret[t]),
                 format_double(out.record.bound_sqrt_t[t]),
                 format_double(out.record.bound_sqrt_kt[t])});
  }
  out.csv_path = dir / "regret_run.csv";
  write_file_atomic(out.csv_path, csv.content());

  json summary;
  summary["config_hash"] = hex_u64(config_hash(config));
  summary["seed"] = config.seed;
  summary["grad_bound"] = bound;
  summary["loglog_slope"] = out.slope;
  summary["final_regret"] = out.final_regret;
  summary["final_bound"] = out.record.bound_sqrt_t.back();
  write_file_atomic(dir / "regret_summary.json", summary.dump(2) + "\n");
  return out;
}

}  // namespace peg
