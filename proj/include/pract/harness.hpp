#pragma once

// Optimization runs: task splitting, batch sampling, the
// execute -> reflect -> optimize loop with validation early stopping, the
// self-reflection protocol, multi-seed aggregation and report emission.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pract/backend.hpp"
#include "pract/environments.hpp"
#include "pract/executor.hpp"
#include "pract/reflection.hpp"
#include "pract/rpo.hpp"
#include "pract/text.hpp"

namespace pract {

struct RunConfig {
  std::string env_id = "academia";
  std::optional<std::string> suite_path;  // generated from suite_seed when absent
  std::uint64_t suite_seed = 0;
  std::optional<std::size_t> task_limit;  // keep the first N suite tasks

  ExecutorConfig executor;
  ReflectorConfig reflector;
  RpoConfig rpo;

  int batch_size = 10;
  int max_iters = 10;
  int patience = 3;
  std::array<int, 3> split_ratio{3, 1, 1};
  std::vector<std::uint64_t> seeds{0};
  int workers = 1;

  BackendConfig executor_backend;
  BackendConfig reflector_backend;
  BackendConfig optimizer_backend;

  std::optional<std::string> templates_dir;
  std::optional<std::string> seed_principles_path;
  std::string output_dir = "runs/latest";

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

void to_json(json& j, const RunConfig& c);
void from_json(const json& j, RunConfig& c);

/// Relative paths inside the file resolve against the file's directory.
RunConfig load_run_config(const std::string& path);

// ---- splitting and sampling ---------------------------------------------------------

class TooFewTasks : public std::invalid_argument {
 public:
  explicit TooFewTasks(std::size_t n)
      : std::invalid_argument("need at least 5 tasks to split, got " + std::to_string(n)) {}
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Seeded shuffle of [0, n) cut by `ratio`; val and test take floor shares and
/// the remainder goes to train.
Split split_tasks(std::size_t n, std::array<int, 3> ratio, std::uint64_t seed);

template <typename T>
std::array<std::vector<T>, 3> split_tasks(const std::vector<T>& tasks, std::array<int, 3> ratio,
                                          std::uint64_t seed) {
  Split s = split_tasks(tasks.size(), ratio, seed);
  std::array<std::vector<T>, 3> out;
  for (auto i : s.train) out[0].push_back(tasks[i]);
  for (auto i : s.val) out[1].push_back(tasks[i]);
  for (auto i : s.test) out[2].push_back(tasks[i]);
  return out;
}

/// Draws batches without replacement within an epoch; when the pool cannot
/// fill the next batch it is reshuffled and a new epoch starts.
class BatchSampler {
 public:
  BatchSampler(std::vector<std::size_t> pool, std::uint64_t seed);
  std::vector<std::size_t> next(std::size_t batch_size);

 private:
  std::vector<std::size_t> pool_;
  Rng rng_;
  std::size_t cursor_ = 0;
};

// ---- evaluation ----------------------------------------------------------------------

/// Failed or rewardless episodes count as 0.
double trajectory_reward(const Trajectory& t);
double mean_reward(const std::vector<Trajectory>& ts);

struct EvalResult {
  double mean = 0;
  std::vector<double> rewards;
  std::vector<Trajectory> trajectories;
};

EvalResult evaluate(const TaskSuite& suite, const std::vector<std::size_t>& tasks,
                    const PrincipleSet* principles, const Executor& executor, Backend& backend,
                    const std::string& id_prefix = "eval");

// ---- runs ------------------------------------------------------------------------------

struct IterationRecord {
  int iteration = 0;
  int principle_version = 0;
  double train_reward = 0;
  double val_reward = 0;
  std::size_t reflections_used = 0;
  std::size_t reflections_failed = 0;
  bool no_update = false;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::size_t train_size = 0, val_size = 0, test_size = 0;
  std::vector<IterationRecord> iterations;
  int best_version = 0;
  int best_iter = 0;
  double best_val = 0;
  int stop_iter = 0;
  std::optional<double> test_score;
  bool complete = false;
  std::string error;
};

struct OptimizationRun {
  json config;
  std::string protocol;
  std::vector<SeedRun> seeds;
  std::optional<double> test_mean;
  bool complete = false;
};

void to_json(json& j, const IterationRecord& r);
void from_json(const json& j, IterationRecord& r);
void to_json(json& j, const SeedRun& r);
void from_json(const json& j, SeedRun& r);
void to_json(json& j, const OptimizationRun& r);
void from_json(const json& j, OptimizationRun& r);

inline constexpr const char* kRewardProtocol =
    "reward: tasks split train/val/test; reward-based reflection on sampled train batches; "
    "early stopping on validation mean reward; best validation version reported on test";
inline constexpr const char* kSelfProtocol =
    "self: reflection tasks are the test tasks; the reflector never sees rewards or ground truth, "
    "so no data leakage; fixed iteration count without early stopping; final version reported";

/// One backend per role, freshly built for each seed.
struct RoleBackends {
  std::unique_ptr<Backend> executor;
  std::unique_ptr<Backend> reflector;
  std::unique_ptr<Backend> optimizer;
};

using BackendFactory = std::function<RoleBackends(std::uint64_t seed)>;

BackendFactory backends_from_config(const RunConfig& cfg);

class Trainer {
 public:
  /// `output_dir` empty disables artifact writing.
  Trainer(RunConfig cfg, TaskSuite suite, BackendFactory backends, std::string output_dir);

  /// Reward protocol for one seed.
  SeedRun train_seed(std::uint64_t seed);
  /// Self-reflection protocol for one seed.
  SeedRun self_reflect_seed(std::uint64_t seed);

  /// All seeds under the protocol implied by the reflector mode. Aborted
  /// seeds keep their partial records and mark the run incomplete.
  OptimizationRun run();

  const PrincipleSet& seed_principles() const { return seed_principles_; }

 private:
  std::string seed_dir(std::uint64_t seed) const;
  std::vector<std::size_t> all_tasks() const;

  RunConfig cfg_;
  TaskSuite suite_;
  BackendFactory backends_;
  std::string out_;
  ActionSpace space_;
  PrincipleSet seed_principles_;
  TemplateLibrary templates_;
};

TaskSuite load_suite_for(const RunConfig& cfg);

/// Loads the suite and backends named by the config, runs every seed and
/// writes artifacts plus reports under cfg.output_dir.
OptimizationRun train(const RunConfig& cfg);
OptimizationRun train_self_reflect(const RunConfig& cfg);

// ---- reports ----------------------------------------------------------------------------

/// iteration,principle_version,train_reward,val_reward then a summary row.
std::string curve_csv(const SeedRun& run);
/// Per-seed results then a summary row with the test mean and seed count.
std::string results_csv(const OptimizationRun& run);
/// Mean train/val reward per iteration over the seeds that reached it.
std::string mean_curve_csv(const OptimizationRun& run);

/// Writes run.json, results.csv, curve_mean.csv and seed_<s>/curve.csv.
void emit_report(const OptimizationRun& run, const std::string& dir);

/// Rewrites the manifest listing every file under `dir`.
void write_manifest(const std::string& dir, const json& extra = json::object());

}  // namespace pract
