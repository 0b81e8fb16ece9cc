// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "harness_fixture.hpp"
#include "oracles.hpp"
#include "pract/store.hpp"

using namespace pract;
using namespace pract::testing;
namespace fs = std::filesystem;

namespace {

constexpr double kHandTolerance = 1e-9;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Skipped : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

template <typename A, typename B>
void check_eq(const A& got, const B& want, const std::string& what) {
  if (!(got == want)) {
    std::ostringstream os;
    os << what << ": got " << got << ", want " << want;
    throw Failure(os.str());
  }
}

std::string fmt(double x) { return format_fixed(x, 4); }

// ---- 1 ------------------------------------------------------------------------------

std::string call_count_law() {
  PrincipleSet current;
  current.set("search", "search with the task keywords");
  current.set("click", "click the first result");
  for (std::size_t q : {1, 2, 4, 8}) {
    std::vector<Reflection> rs;
    for (std::size_t i = 0; i < q; ++i) {
      Reflection r;
      r.query = "task" + std::to_string(i);
      r.trajectory_id = "t" + std::to_string(i);
      r.text = "critique " + std::to_string(i);
      rs.push_back(r);
    }
    RpoConfig cfg;
    cfg.workers = 4;
    PrincipleOptimizer opt(cfg, bare_search_click());
    ScriptedBackend traj({rule("Proposed revisions", "search: merged"), rule("", "search: candidate")});
    opt.rpo_traj(rs, current, traj);
    check_eq(traj.call_count(), q + 1, "rpo_traj calls at |Q|=" + std::to_string(q));
    ScriptedBackend batch({rule("", "search: batched")});
    opt.rpo_batch(rs, current, batch);
    check_eq(batch.call_count(), std::size_t{1}, "rpo_batch calls at |Q|=" + std::to_string(q));
  }
  return "|Q| in {1,2,4,8}";
}

// ---- 2 ------------------------------------------------------------------------------

std::string reward_oracles() {
  constexpr int kInstances = 1000;
  Rng rng(11);
  const std::vector<std::string> names{"get_a", "get_b", "get_c"};
  const std::vector<std::string> values{"alpha", "beta gamma", "x y z", "42"};
  auto random_tool_call = [&] {
    ActionCall c;
    c.action = rng.pick(names);
    c.args["p"] = random_variant(rng, rng.pick(values));
    if (rng.below(2)) c.args["q"] = random_variant(rng, rng.pick(values));
    return c;
  };
  for (int n = 0; n < kInstances; ++n) {
    ToolTask task;
    task.id = "t";
    for (auto i = 1 + rng.below(5); i > 0; --i) task.ground_truth.push_back(random_tool_call());
    Trajectory t;
    std::vector<ActionCall> executed;
    for (auto i = rng.below(8); i > 0; --i) {
      auto c = random_tool_call();
      executed.push_back(c);
      t.steps.push_back({c, Observation::of("ok")});
    }
    if (rng.below(2)) t.steps.push_back({ActionCall{"think", {{"thought", "hm"}}, ""}, Observation::null()});
    auto [num, den] = oracle_recall(executed, task.ground_truth);
    check(tool_reward(t, task) == static_cast<double>(num) / den, "tool_reward instance " + std::to_string(n));
  }

  const std::vector<std::string> attr_names{"color", "material", "style", "size"};
  const std::vector<std::string> attr_values{"red", "blue", "navy blue", "cotton", "xl", "m"};
  for (int n = 0; n < kInstances; ++n) {
    ShopGoal goal;
    for (const auto& a : attr_names)
      if (rng.below(2)) goal.attributes[a] = random_variant(rng, rng.pick(attr_values));
    if (rng.below(2)) goal.price_max = static_cast<double>(10 + rng.below(40));
    if (goal.required_count() == 0) goal.attributes["color"] = "red";
    ShopItem item;
    item.id = "B";
    for (const auto& a : attr_names)
      if (rng.below(3)) item.attributes[a] = random_variant(rng, rng.pick(attr_values));
    item.price = static_cast<double>(rng.below(6000)) / 100.0;
    std::optional<Purchase> p;
    if (rng.below(5)) {
      p = Purchase{item, {}};
      for (const auto& a : attr_names)
        if (rng.below(4) == 0) p->selected[a] = random_variant(rng, rng.pick(attr_values));
    }
    auto [num, den] = oracle_coverage(p, goal);
    check(shop_reward(p, goal) == static_cast<double>(num) / den, "shop_reward instance " + std::to_string(n));
  }
  return std::to_string(kInstances) + " instances each";
}

// ---- 3 ------------------------------------------------------------------------------

std::string hand_rewards() {
  auto call = [](const std::string& a, const std::string& x) { return ActionCall{a, {{"x", x}}, ""}; };
  const auto A = call("get_a", "1"), B = call("get_b", "1"), C = call("get_a", "2"), D = call("get_b", "9");
  ToolTask task{"t", "q", {A, B, C}, ""};
  Trajectory t;
  for (const auto& c : {A, C, D}) t.steps.push_back({c, Observation::of("ok")});
  const double r = tool_reward(t, task);
  check(std::abs(r - 0.6667) <= 1e-4 && std::abs(r - 2.0 / 3.0) <= kHandTolerance, "recall " + fmt(r));

  ShopGoal goal{{{"color", "red"}, {"size", "XL"}}, 20.0, ""};
  ShopItem item{"B1", "Red Dress", {{"color", "red"}}, {{"size", {"M", "XL"}}}, 15.0};
  const double c = shop_reward(Purchase{item, {{"size", "M"}}}, goal);
  check(std::abs(c - 2.0 / 3.0) <= kHandTolerance, "coverage " + fmt(c));
  return "recall " + fmt(r) + ", coverage " + fmt(c);
}

// ---- 4 ------------------------------------------------------------------------------

std::string prompt_contracts() {
  auto principles_for = [](const ActionSpace& space) {
    PrincipleSet p;
    for (const auto& a : space) p.set(a.name, "PRINCIPLE-" + a.name + " applies here");
    return p;
  };
  const ActionSpace full = search_click_space();
  auto pract_space = agent_action_space(full, AgentMode::pract);
  auto p = principles_for(pract_space);
  auto text = render_transcript(render_prompt("find a dress", {}, &p, pract_space, AgentMode::pract));
  for (const auto& [name, pr] : p.entries) check(text.find(pr.text) != std::string::npos, "pract prompt lacks " + name);

  for (AgentMode mode : {AgentMode::act, AgentMode::react}) {
    auto space = agent_action_space(full, mode);
    auto t = render_transcript(render_prompt("find a dress", {}, nullptr, space, mode));
    for (const auto& [name, pr] : p.entries)
      check(t.find(pr.text) == std::string::npos, std::string(to_string(mode)) + " prompt shows " + name);
  }

  Trajectory traj;
  traj.id = "t1";
  traj.query = "buy a red dress";
  traj.steps.push_back({ActionCall{"search", {{"query", "red dress"}}, "search[red dress]"}, Observation::of("2 results")});
  traj.reward = 0.625;
  auto seed = seed_principles(pract_space);
  auto reflect_text = [&](ReflectionMode mode) {
    ReflectorConfig cfg;
    cfg.mode = mode;
    return render_transcript(Reflector(cfg, pract_space).render_prompt(traj, seed));
  };
  check(reflect_text(ReflectionMode::reward).find("0.6250") != std::string::npos, "reward prompt lacks 0.6250");
  const auto self = reflect_text(ReflectionMode::self);
  check(self.find("0.6250") == std::string::npos && self.find("0.625") == std::string::npos,
        "self prompt leaks the reward");
  return "pract/act/react and reward/self";
}

// ---- 5 ------------------------------------------------------------------------------

std::string early_stopping() {
  auto cfg = counting_config(ReflectionMode::reward, 2, 10);
  Trainer trainer(cfg, counting_suite(10), counting_backends({3, 5, 5, 4, 2, 2}), "");
  SeedRun r = trainer.train_seed(0);
  check(r.complete, "run failed: " + r.error);
  std::vector<double> val;
  std::string trace;
  for (const auto& it : r.iterations) {
    val.push_back(it.val_reward);
    trace += (trace.empty() ? "" : ",") + fmt(it.val_reward);
  }
  check(val == std::vector<double>{0.3, 0.5, 0.5, 0.4}, "val trace [" + trace + "]");
  check_eq(r.stop_iter, 4, "stop_iter");
  check_eq(r.best_iter, 2, "best_iter");
  check_eq(r.best_version, 2, "best_version");
  return "val [" + trace + "], stop 4, best v2";
}

// ---- 6 ------------------------------------------------------------------------------

std::string wrong_tool() {
  RunConfig cfg = load_run_config(std::string(PRACT_SCENARIO_DIR) + "/wrong_tool/config.json");
  TaskSuite suite = load_suite_for(cfg);
  check_eq(suite.size(), std::size_t{6}, "tasks");
  Trainer trainer(cfg, suite, backends_from_config(cfg), "");

  RoleBackends b = backends_from_config(cfg)(0);
  Executor ex(cfg.executor, suite.action_space());
  std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
  const double before = evaluate(suite, all, &trainer.seed_principles(), ex, *b.executor).mean;
  check(std::abs(before - 1.0 / 3.0) <= kHandTolerance, "seed mean " + fmt(before));

  SeedRun r = trainer.self_reflect_seed(cfg.seeds.front());
  check(r.complete, "run failed: " + r.error);
  check_eq(r.iterations.size(), std::size_t{1}, "iterations");
  check(r.test_score && *r.test_score == 1.0, "after mean " + (r.test_score ? fmt(*r.test_score) : "n/a"));
  return "mean " + fmt(before) + " -> " + fmt(*r.test_score);
}

// ---- 7 ------------------------------------------------------------------------------

std::vector<std::string> compared_files(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), root).generic_string();
    const auto ext = e.path().extension();
    const bool principle = e.path().parent_path().filename() == "principles" && ext == ".json";
    if (ext == ".jsonl" || ext == ".csv" || principle) out.push_back(rel);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string determinism() {
  const auto base = fs::temp_directory_path() / "pract_acceptance_determinism";
  fs::remove_all(base);
  const std::string config = std::string(PRACT_SCENARIO_DIR) + "/academia_reward/config.json";
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string("\"") + PRACT_BINARY + "\" optimize --config \"" + config + "\" --output \"" +
                            (base / run).string() + "\" > \"" + (base / (std::string(run) + ".log")).string() + "\" 2>&1";
    fs::create_directories(base);
    check(std::system(cmd.c_str()) == 0, std::string("pract optimize run ") + run + " failed");
  }
  const auto a = compared_files(base / "a"), b = compared_files(base / "b");
  check(a == b, "file sets differ");
  check(a.size() >= 8, "too few artifacts: " + std::to_string(a.size()));
  for (const auto& rel : a)
    check(read_file((base / "a" / rel).string()) == read_file((base / "b" / rel).string()), rel + " differs");
  return std::to_string(a.size()) + " files identical";
}

// ---- 8 ------------------------------------------------------------------------------

std::string split_law() {
  for (std::uint64_t seed : {0, 1, 2}) {
    Split s = split_tasks(251, {3, 1, 1}, seed);
    check_eq(s.train.size(), std::size_t{151}, "train");
    check_eq(s.val.size(), std::size_t{50}, "val");
    check_eq(s.test.size(), std::size_t{50}, "test");
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.val.begin(), s.val.end());
    all.insert(s.test.begin(), s.test.end());
    check(all.size() == 251 && *all.rbegin() == 250, "not disjoint and exhaustive");
    Split again = split_tasks(251, {3, 1, 1}, seed);
    check(again.train == s.train && again.val == s.val && again.test == s.test, "unstable for seed");
  }
  return "(151, 50, 50)";
}

// ---- 9 ------------------------------------------------------------------------------

std::string suite_counts() {
  std::string detail;
  for (const char* env : {"academia", "movie", "weather"}) {
    const auto n = generate_suite(env, 0).size();
    check_eq(n, std::size_t{60}, env);
    detail += std::string(env) + "=" + std::to_string(n) + " ";
  }
  const auto shop = generate_suite("shop", 0).size();
  check_eq(shop, std::size_t{251}, "shop");
  return detail + "shop=" + std::to_string(shop);
}

// ---- 10 -----------------------------------------------------------------------------

std::string parallel_equivalence() {
  std::vector<ScriptRule> rules{rule("Observation 2:", "finish[done]"),
                                pattern_rule("Observation 1:", "Task: (\\w+)", "click[$1]"),
                                pattern_rule("", "Task: (\\w+)", "search[$1]")};
  std::vector<std::string> qs;
  for (int i = 0; i < 8; ++i) qs.push_back("task" + std::to_string(i));
  auto factory = [](std::size_t) { return std::make_unique<EchoEnv>(); };
  auto run = [&](int workers) {
    ExecutorConfig cfg;
    cfg.mode = AgentMode::act;
    cfg.workers = workers;
    ScriptedBackend b(rules);
    return Executor(cfg, search_click_space()).run_batch(qs, factory, nullptr, b);
  };
  const auto seq = run(1), par = run(4);
  check_eq(seq.size(), std::size_t{8}, "trajectories");
  check(seq == par, "1-worker and 4-worker trajectories differ");
  return "8 tasks, 1 vs 4 workers";
}

// ---- 11 -----------------------------------------------------------------------------

std::string round_trips() {
  constexpr int kCount = 10000;
  Rng rng(99);
  for (int i = 0; i < kCount; ++i) {
    auto t = random_trajectory(rng);
    check(deserialize_trajectory(serialize_trajectory(t)) == t, "trajectory " + std::to_string(i));
    auto p = random_principle_set(rng);
    check(deserialize_principle_set(serialize_principle_set(p)) == p, "principle set " + std::to_string(i));
    auto r = random_reflection(rng);
    check(deserialize_reflection(serialize_reflection(r)) == r, "reflection " + std::to_string(i));
  }
  return std::to_string(kCount) + " of each type";
}

// ---- 12 -----------------------------------------------------------------------------

std::string live_smoke() {
  const char* key = std::getenv("PRACT_API_KEY");
  const char* url = std::getenv("PRACT_ENDPOINT_URL");
  const char* model = std::getenv("PRACT_MODEL");
  if (!key || !*key || !url || !*url || !model || !*model)
    throw Skipped("set PRACT_API_KEY, PRACT_ENDPOINT_URL and PRACT_MODEL to run");

  BackendConfig bc;
  bc.kind = BackendKind::http;
  bc.endpoint_url = url;
  bc.model_name = model;
  auto backend = make_backend(bc);

  TaskSuite suite = load_task_suite(std::string(PRACT_SCENARIO_DIR) + "/wrong_tool/suite.json");
  const auto space = agent_action_space(suite.action_space(), AgentMode::pract);
  PrincipleSet seed = seed_principles(space);
  Executor ex(ExecutorConfig{}, suite.action_space());
  auto env = suite.make_env(0);
  Trajectory t = ex.run_episode(suite.query(0), *env, &seed, *backend);
  t.id = "live-" + suite.task_id(0);
  t.reward = env->reward();

  ReflectorConfig rc;
  rc.mode = ReflectionMode::reward;
  Reflection r = Reflector(rc, space).reflect(t, seed, *backend);
  RpoConfig oc;
  oc.method = RpoMethod::batch;
  RpoResult next = PrincipleOptimizer(oc, space).rpo_batch({r}, seed, *backend);
  check(validate_principle_set(next.principles, space).empty(), "new principle set is invalid");
  check_eq(next.principles.version, 1, "new version");
  return std::string(to_string(t.terminated)) + ", " + std::to_string(t.steps.size()) + " steps, v1 " +
         (next.no_update ? "unchanged" : "updated");
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<std::string()> run;
    double budget_s;  // wall-clock ceiling; 0 means unbounded
  };
  const std::vector<Criterion> criteria = {
      {"call-count law", call_count_law, 1},
      {"reward oracle equivalence", reward_oracles, 10},
      {"hand-computed rewards", hand_rewards, 1},
      {"prompt contracts", prompt_contracts, 1},
      {"early-stopping trace", early_stopping, 5},
      {"synthetic improvement (wrong_tool)", wrong_tool, 10},
      {"determinism", determinism, 30},
      {"split law", split_law, 1},
      {"suite counts", suite_counts, 5},
      {"parallel/sequential equivalence", parallel_equivalence, 5},
      {"serialization round-trip", round_trips, 10},
      {"live-backend smoke", live_smoke, 0},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, fn, budget] = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    std::string status = "PASS", detail;
    try {
      detail = fn();
    } catch (const Skipped& e) {
      status = "SKIP";
      detail = e.what();
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = e.what();
      ++failed;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (status == "PASS" && budget > 0 && secs > budget) {
      status = "FAIL";
      detail += "; over the " + format_fixed(budget, 0) + " s budget";
      ++failed;
    }
    std::printf("[%s] %zu. %s (%.2f s): %s\n", status.c_str(), i + 1, name.c_str(), secs, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s: %d failed\n", failed ? "FAILED" : "OK", failed);
  return failed ? 1 : 0;
}
