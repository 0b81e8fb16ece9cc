#include "pract/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>
#include <set>

#include "pract/store.hpp"

namespace fs = std::filesystem;

namespace pract {

namespace {

std::string resolve(const std::string& base, const std::string& p) {
  fs::path path(p);
  if (path.is_absolute() || base.empty()) return path.lexically_normal().string();
  return (fs::path(base) / path).lexically_normal().string();
}

json opt_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::string> opt_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<std::string>();
}

}  // namespace

// ---- config -----------------------------------------------------------------------------

void RunConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
  for (int r : split_ratio) {
    if (r < 1) throw std::invalid_argument("split_ratio entries must be positive");
  }
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (executor.mode != AgentMode::pract)
    throw std::invalid_argument("principle optimization requires agent mode pract");
  executor_backend.validate();
  reflector_backend.validate();
  optimizer_backend.validate();
}

void to_json(json& j, const RunConfig& c) {
  j = json{{"env", c.env_id},
           {"suite", opt_json(c.suite_path)},
           {"suite_seed", c.suite_seed},
           {"task_limit", c.task_limit ? json(*c.task_limit) : json(nullptr)},
           {"agent_mode", to_string(c.executor.mode)},
           {"reflector_mode", to_string(c.reflector.mode)},
           {"rpo_method", to_string(c.rpo.method)},
           {"executor", c.executor},
           {"reflector", c.reflector},
           {"rpo", c.rpo},
           {"batch_size", c.batch_size},
           {"max_iters", c.max_iters},
           {"patience", c.patience},
           {"split_ratio", c.split_ratio},
           {"seeds", c.seeds},
           {"workers", c.workers},
           {"backends",
            {{"executor", c.executor_backend}, {"reflector", c.reflector_backend}, {"optimizer", c.optimizer_backend}}},
           {"templates_dir", opt_json(c.templates_dir)},
           {"seed_principles", opt_json(c.seed_principles_path)},
           {"output_dir", c.output_dir}};
}

void from_json(const json& j, RunConfig& c) {
  c.env_id = j.value("env", std::string("academia"));
  c.suite_path = opt_string(j, "suite");
  c.suite_seed = j.value("suite_seed", std::uint64_t{0});
  if (j.contains("task_limit") && !j["task_limit"].is_null()) c.task_limit = j["task_limit"].get<std::size_t>();
  if (j.contains("executor")) c.executor = j["executor"].get<ExecutorConfig>();
  if (j.contains("reflector")) c.reflector = j["reflector"].get<ReflectorConfig>();
  if (j.contains("rpo")) c.rpo = j["rpo"].get<RpoConfig>();
  if (j.contains("agent_mode")) c.executor.mode = agent_mode_from(j["agent_mode"].get<std::string>());
  if (j.contains("reflector_mode")) c.reflector.mode = reflection_mode_from(j["reflector_mode"].get<std::string>());
  if (j.contains("rpo_method")) c.rpo.method = rpo_method_from(j["rpo_method"].get<std::string>());
  c.batch_size = j.value("batch_size", 10);
  c.max_iters = j.value("max_iters", 10);
  c.patience = j.value("patience", 3);
  if (j.contains("split_ratio")) c.split_ratio = j["split_ratio"].get<std::array<int, 3>>();
  if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  c.workers = j.value("workers", 1);
  c.executor.workers = c.reflector.workers = c.rpo.workers = c.workers;
  const json& b = j.at("backends");
  c.executor_backend = b.at("executor").get<BackendConfig>();
  c.reflector_backend = b.at("reflector").get<BackendConfig>();
  c.optimizer_backend = b.at("optimizer").get<BackendConfig>();
  c.templates_dir = opt_string(j, "templates_dir");
  c.seed_principles_path = opt_string(j, "seed_principles");
  c.output_dir = j.value("output_dir", std::string("runs/latest"));
}

RunConfig load_run_config(const std::string& path) {
  RunConfig c;
  try {
    c = json::parse(read_file(path)).get<RunConfig>();
  } catch (const json::exception& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
  const std::string base = fs::path(path).parent_path().string();
  if (c.suite_path) c.suite_path = resolve(base, *c.suite_path);
  if (c.templates_dir) c.templates_dir = resolve(base, *c.templates_dir);
  if (c.seed_principles_path) c.seed_principles_path = resolve(base, *c.seed_principles_path);
  for (BackendConfig* b : {&c.executor_backend, &c.reflector_backend, &c.optimizer_backend}) {
    if (b->script_path) b->script_path = resolve(base, *b->script_path);
  }
  c.validate();
  return c;
}

// ---- split / sample --------------------------------------------------------------------

Split split_tasks(std::size_t n, std::array<int, 3> ratio, std::uint64_t seed) {
  if (n < 5) throw TooFewTasks(n);
  const auto total = static_cast<std::size_t>(ratio[0] + ratio[1] + ratio[2]);
  const std::size_t val = n * static_cast<std::size_t>(ratio[1]) / total;
  const std::size_t test = n * static_cast<std::size_t>(ratio[2]) / total;
  if (val == 0 || test == 0) throw TooFewTasks(n);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  Split s;
  const std::size_t train = n - val - test;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train));
  s.val.assign(order.begin() + static_cast<std::ptrdiff_t>(train),
               order.begin() + static_cast<std::ptrdiff_t>(train + val));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train + val), order.end());
  return s;
}

BatchSampler::BatchSampler(std::vector<std::size_t> pool, std::uint64_t seed)
    : pool_(std::move(pool)), rng_(seed ^ 0x9E3779B97F4A7C15ULL) {
  if (pool_.empty()) throw std::invalid_argument("BatchSampler: empty pool");
  rng_.shuffle(pool_);
}

std::vector<std::size_t> BatchSampler::next(std::size_t batch_size) {
  const std::size_t k = std::clamp<std::size_t>(batch_size, 1, pool_.size());
  if (cursor_ + k > pool_.size()) {
    rng_.shuffle(pool_);
    cursor_ = 0;
  }
  std::vector<std::size_t> out(pool_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                               pool_.begin() + static_cast<std::ptrdiff_t>(cursor_ + k));
  cursor_ += k;
  return out;
}

// ---- evaluation --------------------------------------------------------------------------

double trajectory_reward(const Trajectory& t) {
  if (t.terminated == Termination::parse_failure || t.terminated == Termination::backend_error) return 0.0;
  return t.reward.value_or(0.0);
}

double mean_reward(const std::vector<Trajectory>& ts) {
  if (ts.empty()) return 0.0;
  double sum = 0;
  for (const auto& t : ts) sum += trajectory_reward(t);
  return sum / static_cast<double>(ts.size());
}

namespace {

std::vector<Trajectory> run_tasks(const TaskSuite& suite, const std::vector<std::size_t>& tasks,
                                  const PrincipleSet* principles, const Executor& executor, Backend& backend,
                                  const std::string& id_prefix) {
  std::vector<std::string> queries;
  for (auto i : tasks) queries.push_back(suite.query(i));
  auto ts = executor.run_batch(queries, [&](std::size_t k) { return suite.make_env(tasks[k]); }, principles,
                               backend);
  for (std::size_t k = 0; k < ts.size(); ++k) ts[k].id = id_prefix + "-" + suite.task_id(tasks[k]);
  return ts;
}

}  // namespace

EvalResult evaluate(const TaskSuite& suite, const std::vector<std::size_t>& tasks,
                    const PrincipleSet* principles, const Executor& executor, Backend& backend,
                    const std::string& id_prefix) {
  if (tasks.empty()) throw std::invalid_argument("evaluate: no tasks");
  EvalResult r;
  r.trajectories = run_tasks(suite, tasks, principles, executor, backend, id_prefix);
  for (const auto& t : r.trajectories) r.rewards.push_back(trajectory_reward(t));
  r.mean = mean_reward(r.trajectories);
  return r;
}

// ---- run records ------------------------------------------------------------------------

void to_json(json& j, const IterationRecord& r) {
  j = json{{"iteration", r.iteration},
           {"principle_version", r.principle_version},
           {"train_reward", r.train_reward},
           {"val_reward", r.val_reward},
           {"reflections_used", r.reflections_used},
           {"reflections_failed", r.reflections_failed},
           {"no_update", r.no_update}};
}

void from_json(const json& j, IterationRecord& r) {
  r.iteration = j.at("iteration").get<int>();
  r.principle_version = j.at("principle_version").get<int>();
  r.train_reward = j.at("train_reward").get<double>();
  r.val_reward = j.at("val_reward").get<double>();
  r.reflections_used = j.value("reflections_used", std::size_t{0});
  r.reflections_failed = j.value("reflections_failed", std::size_t{0});
  r.no_update = j.value("no_update", false);
}

void to_json(json& j, const SeedRun& r) {
  j = json{{"seed", r.seed},
           {"train_size", r.train_size},
           {"val_size", r.val_size},
           {"test_size", r.test_size},
           {"iterations", r.iterations},
           {"best_version", r.best_version},
           {"best_iter", r.best_iter},
           {"best_val", r.best_val},
           {"stop_iter", r.stop_iter},
           {"test_score", r.test_score ? json(*r.test_score) : json(nullptr)},
           {"complete", r.complete},
           {"error", r.error}};
}

void from_json(const json& j, SeedRun& r) {
  r.seed = j.at("seed").get<std::uint64_t>();
  r.train_size = j.value("train_size", std::size_t{0});
  r.val_size = j.value("val_size", std::size_t{0});
  r.test_size = j.value("test_size", std::size_t{0});
  r.iterations = j.at("iterations").get<std::vector<IterationRecord>>();
  r.best_version = j.at("best_version").get<int>();
  r.best_iter = j.at("best_iter").get<int>();
  r.best_val = j.at("best_val").get<double>();
  r.stop_iter = j.at("stop_iter").get<int>();
  r.test_score = j.at("test_score").is_null() ? std::nullopt : std::optional<double>(j["test_score"].get<double>());
  r.complete = j.at("complete").get<bool>();
  r.error = j.value("error", std::string());
}

void to_json(json& j, const OptimizationRun& r) {
  j = json{{"config", r.config},
           {"protocol", r.protocol},
           {"seeds", r.seeds},
           {"test_mean", r.test_mean ? json(*r.test_mean) : json(nullptr)},
           {"complete", r.complete}};
}

void from_json(const json& j, OptimizationRun& r) {
  r.config = j.value("config", json::object());
  r.protocol = j.value("protocol", std::string());
  r.seeds = j.at("seeds").get<std::vector<SeedRun>>();
  r.test_mean = j.at("test_mean").is_null() ? std::nullopt : std::optional<double>(j["test_mean"].get<double>());
  r.complete = j.at("complete").get<bool>();
}

// ---- training ------------------------------------------------------------------------------

BackendFactory backends_from_config(const RunConfig& cfg) {
  return [cfg](std::uint64_t) {
    RoleBackends b;
    b.executor = make_backend(cfg.executor_backend);
    b.reflector = make_backend(cfg.reflector_backend);
    b.optimizer = make_backend(cfg.optimizer_backend);
    return b;
  };
}

Trainer::Trainer(RunConfig cfg, TaskSuite suite, BackendFactory backends, std::string output_dir)
    : cfg_(std::move(cfg)), suite_(std::move(suite)), backends_(std::move(backends)), out_(std::move(output_dir)),
      templates_(cfg_.templates_dir) {
  space_ = agent_action_space(suite_.action_space(), cfg_.executor.mode);
  if (cfg_.seed_principles_path) {
    seed_principles_ = load_principle_file(*cfg_.seed_principles_path);
  } else {
    seed_principles_ = pract::seed_principles(space_);
  }
  if (auto v = validate_principle_set(seed_principles_, space_); !v.empty()) throw InvalidPrincipleSet(std::move(v));
}

std::string Trainer::seed_dir(std::uint64_t seed) const {
  return (fs::path(out_) / ("seed_" + std::to_string(seed))).string();
}

std::vector<std::size_t> Trainer::all_tasks() const {
  std::vector<std::size_t> out(suite_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

namespace {

// Collects per-seed artifacts; a no-op when no output directory is set.
class SeedArtifacts {
 public:
  explicit SeedArtifacts(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) return;
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    store_.emplace((fs::path(dir_) / "principles").string());
  }

  void principles(const PrincipleSet& p) {
    if (store_) store_->save(p);
  }
  void trajectories(const std::string& file, const std::vector<Trajectory>& ts) {
    if (!dir_.empty()) append_trajectories((fs::path(dir_) / file).string(), ts);
  }
  void reflections(const std::vector<Reflection>& rs) {
    if (!dir_.empty() && !rs.empty()) append_reflections((fs::path(dir_) / "reflections.jsonl").string(), rs);
  }

 private:
  std::string dir_;
  std::optional<PrincipleStore> store_;
};

std::string iter_tag(int it) { return "it" + std::to_string(it); }

}  // namespace

SeedRun Trainer::train_seed(std::uint64_t seed) {
  if (cfg_.reflector.mode != ReflectionMode::reward)
    throw std::invalid_argument("train_seed runs the reward protocol; reflector mode must be reward");
  SeedRun run;
  run.seed = seed;
  SeedArtifacts art(out_.empty() ? "" : seed_dir(seed));
  try {
    RoleBackends be = backends_(seed);
    const Split split = split_tasks(suite_.size(), cfg_.split_ratio, seed);
    run.train_size = split.train.size();
    run.val_size = split.val.size();
    run.test_size = split.test.size();

    Executor executor(cfg_.executor, suite_.action_space(), templates_);
    Reflector reflector(cfg_.reflector, space_, templates_);
    PrincipleOptimizer optimizer(cfg_.rpo, space_, templates_);

    PrincipleSet current = seed_principles_;
    art.principles(current);
    std::map<int, PrincipleSet> versions{{current.version, current}};
    BatchSampler sampler(split.train, seed);
    double best_val = -std::numeric_limits<double>::infinity();
    int since_best = 0;

    for (int it = 1; it <= cfg_.max_iters; ++it) {
      run.stop_iter = it;
      const auto batch = sampler.next(static_cast<std::size_t>(cfg_.batch_size));
      auto trajs = run_tasks(suite_, batch, &current, executor, *be.executor, "train-" + iter_tag(it));
      art.trajectories("trajectories.jsonl", trajs);

      auto outcomes = reflector.reflect_all(trajs, current, *be.reflector);
      std::vector<Reflection> reflections;
      IterationRecord rec;
      for (auto& o : outcomes) {
        if (o.ok()) {
          reflections.push_back(std::move(*o.reflection));
        } else {
          ++rec.reflections_failed;
        }
      }
      art.reflections(reflections);

      RpoResult updated = optimizer.optimize(reflections, current, *be.optimizer);
      current = updated.principles;
      art.principles(current);
      versions.emplace(current.version, current);

      EvalResult val = evaluate(suite_, split.val, &current, executor, *be.executor, "val-" + iter_tag(it));
      art.trajectories("eval_trajectories.jsonl", val.trajectories);

      rec.iteration = it;
      rec.principle_version = current.version;
      rec.train_reward = mean_reward(trajs);
      rec.val_reward = val.mean;
      rec.reflections_used = updated.used_reflections;
      rec.no_update = updated.no_update;
      run.iterations.push_back(rec);

      if (val.mean > best_val) {
        best_val = val.mean;
        run.best_val = val.mean;
        run.best_version = current.version;
        run.best_iter = it;
        since_best = 0;
      } else if (++since_best >= cfg_.patience) {
        break;
      }
    }

    EvalResult test = evaluate(suite_, split.test, &versions.at(run.best_version), executor, *be.executor,
                               "test-v" + std::to_string(run.best_version));
    art.trajectories("eval_trajectories.jsonl", test.trajectories);
    run.test_score = test.mean;
    run.complete = true;
  } catch (const std::exception& e) {
    run.error = e.what();
    run.complete = false;
  }
  return run;
}

SeedRun Trainer::self_reflect_seed(std::uint64_t seed) {
  if (cfg_.reflector.mode != ReflectionMode::self)
    throw std::invalid_argument("self_reflect_seed requires reflector mode self");
  SeedRun run;
  run.seed = seed;
  SeedArtifacts art(out_.empty() ? "" : seed_dir(seed));
  try {
    RoleBackends be = backends_(seed);
    const auto tasks = all_tasks();
    run.test_size = tasks.size();

    Executor executor(cfg_.executor, suite_.action_space(), templates_);
    Reflector reflector(cfg_.reflector, space_, templates_);
    PrincipleOptimizer optimizer(cfg_.rpo, space_, templates_);

    PrincipleSet current = seed_principles_;
    art.principles(current);
    BatchSampler sampler(tasks, seed);
    double last_score = 0;

    for (int it = 1; it <= cfg_.max_iters; ++it) {
      run.stop_iter = it;
      const auto batch = sampler.next(static_cast<std::size_t>(cfg_.batch_size));
      auto trajs = run_tasks(suite_, batch, &current, executor, *be.executor, "reflect-" + iter_tag(it));
      art.trajectories("trajectories.jsonl", trajs);

      auto outcomes = reflector.reflect_all(trajs, current, *be.reflector);
      std::vector<Reflection> reflections;
      IterationRecord rec;
      for (auto& o : outcomes) {
        if (o.ok()) {
          reflections.push_back(std::move(*o.reflection));
        } else {
          ++rec.reflections_failed;
        }
      }
      art.reflections(reflections);

      RpoResult updated = optimizer.optimize(reflections, current, *be.optimizer);
      current = updated.principles;
      art.principles(current);

      EvalResult score = evaluate(suite_, tasks, &current, executor, *be.executor,
                                  "test-v" + std::to_string(current.version));
      art.trajectories("eval_trajectories.jsonl", score.trajectories);
      last_score = score.mean;

      rec.iteration = it;
      rec.principle_version = current.version;
      rec.train_reward = mean_reward(trajs);
      rec.val_reward = score.mean;
      rec.reflections_used = updated.used_reflections;
      rec.no_update = updated.no_update;
      run.iterations.push_back(rec);
    }

    // No held-out signal: the final version is the reported one.
    run.best_version = current.version;
    run.best_iter = run.stop_iter;
    run.best_val = last_score;
    run.test_score = last_score;
    run.complete = true;
  } catch (const std::exception& e) {
    run.error = e.what();
    run.complete = false;
  }
  return run;
}

OptimizationRun Trainer::run() {
  OptimizationRun out;
  out.config = cfg_;
  const bool reward = cfg_.reflector.mode == ReflectionMode::reward;
  out.protocol = reward ? kRewardProtocol : kSelfProtocol;
  out.complete = true;
  for (auto seed : cfg_.seeds) {
    SeedRun s = reward ? train_seed(seed) : self_reflect_seed(seed);
    const bool ok = s.complete;
    out.seeds.push_back(std::move(s));
    if (!ok) {
      out.complete = false;
      break;
    }
  }
  double sum = 0;
  std::size_t n = 0;
  for (const auto& s : out.seeds) {
    if (s.test_score) {
      sum += *s.test_score;
      ++n;
    }
  }
  if (n > 0) out.test_mean = sum / static_cast<double>(n);
  return out;
}

TaskSuite load_suite_for(const RunConfig& cfg) {
  TaskSuite suite = cfg.suite_path ? load_task_suite(*cfg.suite_path) : generate_suite(cfg.env_id, cfg.suite_seed);
  if (cfg.task_limit && *cfg.task_limit < suite.size()) {
    suite.tool_tasks.resize(std::min(suite.tool_tasks.size(), *cfg.task_limit));
    suite.shop_tasks.resize(std::min(suite.shop_tasks.size(), *cfg.task_limit));
  }
  return suite;
}

namespace {

OptimizationRun run_from_config(const RunConfig& cfg, ReflectionMode required) {
  cfg.validate();
  if (cfg.reflector.mode != required)
    throw std::invalid_argument(std::string("this protocol requires reflector mode ") +
                                std::string(to_string(required)));
  Trainer trainer(cfg, load_suite_for(cfg), backends_from_config(cfg), cfg.output_dir);
  OptimizationRun run = trainer.run();
  if (!cfg.output_dir.empty()) {
    emit_report(run, cfg.output_dir);
    write_manifest(cfg.output_dir, json{{"env", cfg.env_id}, {"protocol", run.protocol}});
  }
  return run;
}

}  // namespace

OptimizationRun train(const RunConfig& cfg) { return run_from_config(cfg, ReflectionMode::reward); }

OptimizationRun train_self_reflect(const RunConfig& cfg) { return run_from_config(cfg, ReflectionMode::self); }

// ---- reports ----------------------------------------------------------------------------------

std::string curve_csv(const SeedRun& run) {
  std::string out = "iteration,principle_version,train_reward,val_reward\n";
  for (const auto& r : run.iterations) {
    out += std::to_string(r.iteration) + "," + std::to_string(r.principle_version) + "," +
           format_fixed(r.train_reward, 4) + "," + format_fixed(r.val_reward, 4) + "\n";
  }
  out += "summary,test_mean=" + (run.test_score ? format_fixed(*run.test_score, 4) : std::string("n/a")) +
         ",seeds=1,status=" + (run.complete ? "complete" : "incomplete") + "\n";
  return out;
}

std::string results_csv(const OptimizationRun& run) {
  std::string out = "seed,best_version,best_iter,best_val,stop_iter,test_score\n";
  std::size_t scored = 0;
  for (const auto& s : run.seeds) {
    out += std::to_string(s.seed) + "," + std::to_string(s.best_version) + "," + std::to_string(s.best_iter) + "," +
           format_fixed(s.best_val, 4) + "," + std::to_string(s.stop_iter) + "," +
           (s.test_score ? format_fixed(*s.test_score, 4) : std::string("n/a")) + "\n";
    scored += s.test_score ? 1 : 0;
  }
  out += "summary,test_mean=" + (run.test_mean ? format_fixed(*run.test_mean, 4) : std::string("n/a")) +
         ",seeds=" + std::to_string(scored) + ",status=" + (run.complete ? "complete" : "incomplete") + "\n";
  return out;
}

std::string mean_curve_csv(const OptimizationRun& run) {
  std::map<int, std::pair<double, double>> sums;
  std::map<int, int> counts;
  for (const auto& s : run.seeds) {
    for (const auto& r : s.iterations) {
      sums[r.iteration].first += r.train_reward;
      sums[r.iteration].second += r.val_reward;
      ++counts[r.iteration];
    }
  }
  std::string out = "iteration,seeds,train_reward,val_reward\n";
  for (const auto& [it, sum] : sums) {
    const double n = counts[it];
    out += std::to_string(it) + "," + std::to_string(counts[it]) + "," + format_fixed(sum.first / n, 4) + "," +
           format_fixed(sum.second / n, 4) + "\n";
  }
  return out;
}

void emit_report(const OptimizationRun& run, const std::string& dir) {
  fs::create_directories(dir);
  write_file((fs::path(dir) / "run.json").string(), json(run).dump(2) + "\n");
  write_file((fs::path(dir) / "results.csv").string(), results_csv(run));
  write_file((fs::path(dir) / "curve_mean.csv").string(), mean_curve_csv(run));
  for (const auto& s : run.seeds) {
    auto sd = fs::path(dir) / ("seed_" + std::to_string(s.seed));
    fs::create_directories(sd);
    write_file((sd / "curve.csv").string(), curve_csv(s));
  }
}

void write_manifest(const std::string& dir, const json& extra) {
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string rel = fs::relative(e.path(), dir).generic_string();
    if (rel != "manifest.json") files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  json m = extra;
  m["files"] = files;
  write_file((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
}

}  // namespace pract
