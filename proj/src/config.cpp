#include "peg/config.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace peg {

namespace {

using nlohmann::json;

ScheduleKind schedule_kind_from_name(const std::string& name) {
  if (name == "constant") return ScheduleKind::Constant;
  if (name == "power_decay") return ScheduleKind::PowerDecay;
  if (name == "doubling") return ScheduleKind::Doubling;
  if (name == "doubling_stated") return ScheduleKind::DoublingStated;
  fail(ErrorCode::ValidationError, "schedule.kind: unknown kind '" + name + "'");
}

const char* schedule_kind_name(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Constant: return "constant";
    case ScheduleKind::PowerDecay: return "power_decay";
    case ScheduleKind::Doubling: return "doubling";
    case ScheduleKind::DoublingStated: return "doubling_stated";
  }
  return "constant";
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& scope) {
  for (const auto& item : j.items()) {
    require(known.count(item.key()) > 0, ErrorCode::ValidationError,
            scope + ": unknown field '" + item.key() + "'");
  }
}

Schedule parse_schedule(const json& j, const std::string& scope,
                        const Schedule& base) {
  reject_unknown_keys(
      j, {"kind", "base_rate", "decay_exponent", "grad_bound", "kl_radius"},
      scope);
  Schedule s = base;
  if (j.contains("kind")) s.kind = schedule_kind_from_name(j.at("kind"));
  if (j.contains("base_rate")) s.base_rate = j.at("base_rate").get<double>();
  if (j.contains("decay_exponent"))
    s.decay_exponent = j.at("decay_exponent").get<double>();
  if (j.contains("grad_bound")) s.grad_bound = j.at("grad_bound").get<double>();
  if (j.contains("kl_radius")) s.kl_radius = j.at("kl_radius").get<double>();
  try {
    s.validate();
  } catch (const Error& e) {
    fail(ErrorCode::ValidationError, scope + ": " + e.what());
  }
  return s;
}

Matrix2 parse_conditional(const json& j, const std::string& scope) {
  require(j.is_array() && j.size() == 2, ErrorCode::ValidationError,
          scope + ": expected two rows");
  Matrix2 m;
  for (int r = 0; r < 2; ++r) {
    const json& row = j.at(static_cast<std::size_t>(r));
    require(row.is_array() && row.size() == 2, ErrorCode::ValidationError,
            scope + ": each row needs two entries");
    m(r, 0) = row.at(0).get<double>();
    m(r, 1) = row.at(1).get<double>();
  }
  try {
    Strategy check(m);
  } catch (const Error& e) {
    fail(ErrorCode::ValidationError, scope + ": " + e.what());
  }
  return m;
}

json schedule_to_json(const Schedule& s) {
  json j;
  j["kind"] = schedule_kind_name(s.kind);
  j["base_rate"] = s.base_rate;
  j["decay_exponent"] = s.decay_exponent;
  j["grad_bound"] = s.grad_bound;
  j["kl_radius"] = s.kl_radius;
  return j;
}

json conditional_to_json(const Matrix2& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}),
                      json::array({m(1, 0), m(1, 1)})});
}

}  // namespace

WorldModel ExperimentConfig::world() const {
  return WorldModel::symmetric(truth_prior, confusion_accuracies);
}

GeneratorModel ExperimentConfig::initial_generator() const {
  return GeneratorModel(PolicyPoint::from_strategy(Strategy(generator_initial)));
}

Schedule ExperimentConfig::schedule_for_agent(int agent) const {
  if (agent >= 0 && agent < static_cast<int>(agent_schedules.size())) {
    return agent_schedules[static_cast<std::size_t>(agent)];
  }
  return schedule;
}

std::vector<AgentState> ExperimentConfig::initial_states() const {
  std::vector<AgentState> states;
  states.reserve(static_cast<std::size_t>(agents) + 1);
  for (int i = 0; i < agents; ++i) {
    AgentState s;
    s.role = Role::Discriminator;
    s.policy = PolicyPoint::from_strategy(Strategy(discriminator_initial));
    s.initial_policy = s.policy;
    s.schedule = schedule_for_agent(i);
    s.trust.enabled = trust.enabled;
    s.trust.radius = trust.radius;
    s.trust.reference = PolicyPoint::from_strategy(Strategy::truthful());
    states.push_back(std::move(s));
  }
  AgentState g;
  g.role = Role::Generator;
  g.policy = PolicyPoint::from_strategy(Strategy(generator_initial));
  g.initial_policy = g.policy;
  g.schedule = generator_schedule;
  g.trust.enabled = trust.enabled;
  g.trust.radius = trust.radius;
  g.trust.reference = GeneratorModel::ideal().policy();
  states.push_back(std::move(g));
  return states;
}

RoundOptions ExperimentConfig::round_options() const {
  RoundOptions opts;
  opts.split_policy = split_policy;
  opts.tie_rule = tie_rule;
  opts.payment_baseline = payment_baseline;
  opts.policy_floor = policy_floor;
  return opts;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = text.empty() ? json::object() : json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  require(j.is_object(), ErrorCode::ParseError,
          "config document must be a JSON object");

  ExperimentConfig cfg;
  cfg.generator_schedule = cfg.schedule;

  reject_unknown_keys(
      j,
      {"n", "K", "T", "replications", "seed", "truth_prior",
       "confusion_accuracies", "discriminator_initial", "generator_initial",
       "schedule", "agent_schedules", "generator_schedule", "split_policy",
       "tie_rule", "payment_baseline", "policy_floor", "trust", "sweep",
       "verify", "out"},
      "config");

  try {
    if (j.contains("n")) cfg.agents = j.at("n").get<int>();
    if (j.contains("K")) cfg.task_count = j.at("K").get<int>();
    if (j.contains("T")) cfg.iterations = j.at("T").get<std::int64_t>();
    if (j.contains("replications"))
      cfg.replications = j.at("replications").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("truth_prior"))
      cfg.truth_prior = j.at("truth_prior").get<double>();
    if (j.contains("confusion_accuracies")) {
      cfg.confusion_accuracies =
          j.at("confusion_accuracies").get<std::vector<double>>();
    }
    if (j.contains("policy_floor"))
      cfg.policy_floor = j.at("policy_floor").get<double>();
    if (j.contains("payment_baseline"))
      cfg.payment_baseline = j.at("payment_baseline").get<bool>();
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  } catch (const json::type_error& e) {
    fail(ErrorCode::ParseError, e.what());
  }

  require(cfg.agents >= 2, ErrorCode::ValidationError, "n: need n >= 2");
  require(cfg.task_count >= 4, ErrorCode::ValidationError, "K: need K >= 4");
  require(cfg.iterations >= 1, ErrorCode::ValidationError, "T: need T >= 1");
  require(cfg.replications >= 1, ErrorCode::ValidationError,
          "replications: need R >= 1");
  require(cfg.truth_prior >= 0.0 && cfg.truth_prior <= 1.0,
          ErrorCode::ValidationError, "truth_prior: outside [0, 1]");
  require(cfg.policy_floor > 0.0 && cfg.policy_floor < 0.5,
          ErrorCode::ValidationError, "policy_floor: outside (0, 0.5)");

  if (!j.contains("confusion_accuracies")) {
    require(cfg.agents <= 3, ErrorCode::ValidationError,
            "confusion_accuracies: required when n > 3");
    cfg.confusion_accuracies.resize(static_cast<std::size_t>(cfg.agents));
  }
  require(static_cast<int>(cfg.confusion_accuracies.size()) == cfg.agents,
          ErrorCode::ValidationError,
          "confusion_accuracies: need one accuracy per agent");
  for (double acc : cfg.confusion_accuracies) {
    require(acc >= 0.0 && acc <= 1.0, ErrorCode::ValidationError,
            "confusion_accuracies: entries must lie in [0, 1]");
  }

  if (j.contains("discriminator_initial")) {
    cfg.discriminator_initial =
        parse_conditional(j.at("discriminator_initial"), "discriminator_initial");
  }
  if (j.contains("generator_initial")) {
    cfg.generator_initial =
        parse_conditional(j.at("generator_initial"), "generator_initial");
  }

  if (j.contains("schedule")) {
    cfg.schedule = parse_schedule(j.at("schedule"), "schedule", Schedule{});
    cfg.generator_schedule = cfg.schedule;
  }
  if (j.contains("generator_schedule")) {
    cfg.generator_schedule = parse_schedule(j.at("generator_schedule"),
                                            "generator_schedule", cfg.schedule);
  }
  if (j.contains("agent_schedules")) {
    const json& arr = j.at("agent_schedules");
    require(arr.is_array(), ErrorCode::ValidationError,
            "agent_schedules: expected an array");
    require(static_cast<int>(arr.size()) == cfg.agents,
            ErrorCode::ValidationError,
            "agent_schedules: need one schedule per agent");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      cfg.agent_schedules.push_back(parse_schedule(
          arr.at(i), "agent_schedules[" + std::to_string(i) + "]",
          cfg.schedule));
    }
  }

  if (j.contains("split_policy")) {
    const std::string name = j.at("split_policy").get<std::string>();
    if (name == "half") {
      cfg.split_policy = SplitPolicy::Half;
    } else if (name == "random") {
      cfg.split_policy = SplitPolicy::Random;
    } else {
      fail(ErrorCode::ValidationError,
           "split_policy: expected 'half' or 'random'");
    }
  }
  if (j.contains("tie_rule")) {
    const std::string name = j.at("tie_rule").get<std::string>();
    if (name == "zero") {
      cfg.tie_rule = TieRule::Zero;
    } else if (name == "random") {
      cfg.tie_rule = TieRule::Random;
    } else {
      fail(ErrorCode::ValidationError, "tie_rule: expected 'zero' or 'random'");
    }
  }

  if (j.contains("trust")) {
    const json& t = j.at("trust");
    reject_unknown_keys(t, {"enabled", "radius"}, "trust");
    if (t.contains("enabled")) cfg.trust.enabled = t.at("enabled").get<bool>();
    if (t.contains("radius")) cfg.trust.radius = t.at("radius").get<double>();
    require(!cfg.trust.enabled || cfg.trust.radius > 0.0,
            ErrorCode::ValidationError,
            "trust.radius: must be > 0 when trust is enabled");
  }
  if (cfg.trust.enabled) {
    // Both references are the identity in row form; the maximal per-row L1
    // distance to it is 2 * (off-diagonal mass).
    const auto vertex_distance = [](const Matrix2& m) {
      return 2.0 * std::max(m(0, 1), m(1, 0));
    };
    require(vertex_distance(cfg.discriminator_initial) <=
                cfg.trust.radius + 1e-12,
            ErrorCode::ValidationError,
            "discriminator_initial: outside the trust radius of the truthful "
            "reference");
    require(vertex_distance(cfg.generator_initial) <= cfg.trust.radius + 1e-12,
            ErrorCode::ValidationError,
            "generator_initial: outside the trust radius of the ideal "
            "reference");
  }

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown_keys(s, {"k_min", "k_max"}, "sweep");
    if (s.contains("k_min")) cfg.sweep_k_min = s.at("k_min").get<int>();
    if (s.contains("k_max")) cfg.sweep_k_max = s.at("k_max").get<int>();
    require(cfg.sweep_k_min >= 4, ErrorCode::ValidationError,
            "sweep.k_min: need K >= 4");
    require(cfg.sweep_k_max >= cfg.sweep_k_min, ErrorCode::ValidationError,
            "sweep.k_max: must be >= sweep.k_min");
  }

  if (j.contains("verify")) {
    const json& v = j.at("verify");
    reject_unknown_keys(v, {"grid_step", "samples"}, "verify");
    if (v.contains("grid_step"))
      cfg.verify_grid_step = v.at("grid_step").get<double>();
    if (v.contains("samples"))
      cfg.verify_samples = v.at("samples").get<std::int64_t>();
    require(cfg.verify_grid_step > 0.0 && cfg.verify_grid_step <= 0.5,
            ErrorCode::ValidationError,
            "verify.grid_step: must lie in (0, 0.5]");
    require(cfg.verify_samples >= 100, ErrorCode::ValidationError,
            "verify.samples: need at least 100");
  }

  return cfg;
}

std::string canonical_json(const ExperimentConfig& cfg) {
  json j;
  j["n"] = cfg.agents;
  j["K"] = cfg.task_count;
  j["T"] = cfg.iterations;
  j["replications"] = cfg.replications;
  j["seed"] = cfg.seed;
  j["truth_prior"] = cfg.truth_prior;
  j["confusion_accuracies"] = cfg.confusion_accuracies;
  j["discriminator_initial"] = conditional_to_json(cfg.discriminator_initial);
  j["generator_initial"] = conditional_to_json(cfg.generator_initial);
  j["schedule"] = schedule_to_json(cfg.schedule);
  j["generator_schedule"] = schedule_to_json(cfg.generator_schedule);
  if (!cfg.agent_schedules.empty()) {
    json arr = json::array();
    for (const auto& s : cfg.agent_schedules) arr.push_back(schedule_to_json(s));
    j["agent_schedules"] = arr;
  }
  j["split_policy"] =
      cfg.split_policy == SplitPolicy::Half ? "half" : "random";
  j["tie_rule"] = cfg.tie_rule == TieRule::Zero ? "zero" : "random";
  j["payment_baseline"] = cfg.payment_baseline;
  j["policy_floor"] = cfg.policy_floor;
  j["trust"] = {{"enabled", cfg.trust.enabled}, {"radius", cfg.trust.radius}};
  j["sweep"] = {{"k_min", cfg.sweep_k_min}, {"k_max", cfg.sweep_k_max}};
  // out_dir is deliberately excluded: the hash identifies the experiment,
  // not where its files land.
  j["verify"] = {{"grid_step", cfg.verify_grid_step},
                 {"samples", cfg.verify_samples}};
  return j.dump();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace peg
