#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "pract/harness.hpp"
#include "pract/store.hpp"

namespace fs = std::filesystem;
using namespace pract;

namespace {

const PrincipleSet* principles_for(const RunConfig& cfg, const ActionSpace& space, std::optional<PrincipleSet>& slot,
                                   const std::string& path) {
  if (cfg.executor.mode != AgentMode::pract) return nullptr;
  slot = path.empty() ? seed_principles(space) : load_principle_file(path);
  return &*slot;
}

std::vector<std::size_t> split_indices(const TaskSuite& suite, const RunConfig& cfg, const std::string& split,
                                       std::uint64_t seed) {
  if (split == "all") {
    std::vector<std::size_t> all(suite.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
  Split s = split_tasks(suite.size(), cfg.split_ratio, seed);
  if (split == "train") return s.train;
  if (split == "val") return s.val;
  return s.test;
}

int cmd_run(const std::string& config_path, std::size_t task, const std::string& principles_path,
            const std::string& mode) {
  RunConfig cfg = load_run_config(config_path);
  if (!mode.empty()) cfg.executor.mode = agent_mode_from(mode);
  TaskSuite suite = load_suite_for(cfg);
  if (task >= suite.size()) throw std::out_of_range("task index out of range: " + std::to_string(task));
  const ActionSpace space = agent_action_space(suite.action_space(), cfg.executor.mode);
  std::optional<PrincipleSet> slot;
  const PrincipleSet* p = principles_for(cfg, space, slot, principles_path);
  auto backend = make_backend(cfg.executor_backend);
  Executor executor(cfg.executor, suite.action_space(), TemplateLibrary(cfg.templates_dir));
  auto env = suite.make_env(task);
  Trajectory t = executor.run_episode(suite.query(task), *env, p, *backend);
  t.id = "run-" + suite.task_id(task);
  std::cout << json(t).dump(2) << "\n";
  return t.terminated == Termination::finished || t.terminated == Termination::max_steps ? 0 : 2;
}

int cmd_optimize(const std::string& config_path, const std::string& output) {
  RunConfig cfg = load_run_config(config_path);
  if (!output.empty()) cfg.output_dir = output;
  OptimizationRun run = cfg.reflector.mode == ReflectionMode::reward ? train(cfg) : train_self_reflect(cfg);
  std::cout << results_csv(run);
  for (const auto& s : run.seeds) {
    if (!s.error.empty()) std::cerr << "seed " << s.seed << " aborted: " << s.error << "\n";
  }
  return run.complete ? 0 : 2;
}

int cmd_eval(const std::string& config_path, const std::string& principles_path, const std::string& split,
             std::optional<std::uint64_t> seed, const std::string& mode, const std::string& out) {
  RunConfig cfg = load_run_config(config_path);
  if (!mode.empty()) cfg.executor.mode = agent_mode_from(mode);
  TaskSuite suite = load_suite_for(cfg);
  const auto tasks = split_indices(suite, cfg, split, seed.value_or(cfg.seeds.front()));
  const ActionSpace space = agent_action_space(suite.action_space(), cfg.executor.mode);
  std::optional<PrincipleSet> slot;
  const PrincipleSet* p = principles_for(cfg, space, slot, principles_path);
  auto backend = make_backend(cfg.executor_backend);
  Executor executor(cfg.executor, suite.action_space(), TemplateLibrary(cfg.templates_dir));
  EvalResult r = evaluate(suite, tasks, p, executor, *backend, split);
  if (!out.empty()) {
    if (fs::exists(out)) fs::remove(out);
    append_trajectories(out, r.trajectories);
  }
  std::cout << "task_id,reward\n";
  for (std::size_t i = 0; i < tasks.size(); ++i)
    std::cout << suite.task_id(tasks[i]) << "," << format_fixed(r.rewards[i], 4) << "\n";
  std::cout << "summary,mean=" << format_fixed(r.mean, 4) << ",tasks=" << tasks.size() << "\n";
  return 0;
}

int cmd_gen_suite(const std::string& env, std::uint64_t seed, const std::string& out) {
  TaskSuite suite = generate_suite(env, seed);
  const std::string text = suite_text(suite);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
    std::cerr << "wrote " << suite.size() << " tasks to " << out << "\n";
  }
  return 0;
}

int cmd_report(const std::string& dir) {
  const fs::path run_file = fs::path(dir) / "run.json";
  OptimizationRun run = json::parse(read_file(run_file.string())).get<OptimizationRun>();
  emit_report(run, dir);
  write_manifest(dir, json{{"protocol", run.protocol}});
  std::cout << results_csv(run);
  std::cout << "\n" << mean_curve_csv(run);
  return run.complete ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pract: principle-guided agents with reflective principle optimization"};
  app.require_subcommand(1);

  std::string config, principles, mode, output, split = "test", env, run_dir;
  std::size_t task = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> eval_seed;

  auto* run = app.add_subcommand("run", "Run a single episode and print its trajectory");
  run->add_option("--config", config, "Run config file")->required()->check(CLI::ExistingFile);
  run->add_option("--task", task, "Task index in the suite");
  run->add_option("--principles", principles, "Principle file (defaults to seed principles)")
      ->check(CLI::ExistingFile);
  run->add_option("--mode", mode, "Agent mode override")->check(CLI::IsMember({"act", "react", "pract"}));

  auto* opt = app.add_subcommand("optimize", "Run the full principle optimization");
  opt->add_option("--config", config, "Run config file")->required()->check(CLI::ExistingFile);
  opt->add_option("--output", output, "Output directory override");

  auto* ev = app.add_subcommand("eval", "Evaluate principles on a task split");
  ev->add_option("--config", config, "Run config file")->required()->check(CLI::ExistingFile);
  ev->add_option("--principles", principles, "Principle file")->check(CLI::ExistingFile);
  ev->add_option("--split", split, "Split to evaluate")->check(CLI::IsMember({"train", "val", "test", "all"}));
  ev->add_option("--seed", eval_seed, "Split seed (defaults to the first config seed)");
  ev->add_option("--mode", mode, "Agent mode override")->check(CLI::IsMember({"act", "react", "pract"}));
  ev->add_option("--trajectories", output, "Write evaluation trajectories to this JSONL file");

  auto* gen = app.add_subcommand("gen-suite", "Generate a task suite");
  gen->add_option("--env", env, "Environment id")->required()->check(CLI::IsMember(known_env_ids()));
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--out", output, "Output file (stdout when omitted)");

  auto* rep = app.add_subcommand("report", "Regenerate CSV reports for a run directory");
  rep->add_option("--run", run_dir, "Run output directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, task, principles, mode);
    if (*opt) return cmd_optimize(config, output);
    if (*ev) return cmd_eval(config, principles, split, eval_seed, mode, output);
    if (*gen) return cmd_gen_suite(env, seed, output);
    if (*rep) return cmd_report(run_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
