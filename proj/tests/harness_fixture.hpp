#pragma once

// A counting world for driving the training loop with exact rewards: every
// task's ground truth is step[1] .. step[10], and the scripted executor keeps
// stepping until the principle for `step` names a LEVEL-k marker it has reached.
// A principle carrying LEVEL-k therefore scores exactly k/10 on every task.

#include <string>
#include <vector>

#include "pract/harness.hpp"
#include "test_util.hpp"

namespace pract::testing {

inline constexpr int kDepth = 10;

inline TaskSuite counting_suite(std::size_t n_tasks) {
  auto world = std::make_shared<ToolWorld>();
  world->domain = "counting";
  for (int k = 1; k <= kDepth; ++k) world->kb.tables["steps"].push_back(json{{"n", k}});
  world->tools.push_back(ToolDef{"step", "Advance the counter to n.", "steps", {{"n", "n", ParamType::integer}}, {"n"}});

  TaskSuite s;
  s.env_id = "counting";
  s.kind = EnvKind::tool;
  for (std::size_t i = 0; i < n_tasks; ++i) {
    ToolTask t;
    t.id = "count-" + std::to_string(i + 1);
    t.query = "Count to ten, run " + std::to_string(i + 1) + ".";
    for (int k = 1; k <= kDepth; ++k) t.ground_truth.push_back(ActionCall{"step", {{"n", std::to_string(k)}}, ""});
    s.tool_tasks.push_back(std::move(t));
  }
  s.world = std::move(world);
  return s;
}

inline std::vector<ScriptRule> counting_executor_rules() {
  std::vector<ScriptRule> rules;
  for (int level = 2; level <= 9; ++level)
    rules.push_back(pattern_rule("LEVEL-" + std::to_string(level), "Observation " + std::to_string(level) + ":", "finish[]"));
  rules.push_back(rule("Observation 10:", "finish[]"));
  for (int k = kDepth - 1; k >= 1; --k)
    rules.push_back(rule("Observation " + std::to_string(k) + ":", "step[" + std::to_string(k + 1) + "]"));
  rules.push_back(rule("", "step[1]"));
  return rules;
}

/// One optimizer response per iteration, in order; the run aborts with
/// NoScriptMatch if it asks for more.
inline std::vector<ScriptRule> level_schedule(const std::vector<int>& levels) {
  std::vector<ScriptRule> rules;
  for (int level : levels)
    rules.push_back(rule("", "step: Keep stepping until LEVEL-" + std::to_string(level) + " is reached.", 1));
  return rules;
}

inline BackendFactory counting_backends(std::vector<int> levels) {
  return [levels](std::uint64_t) {
    RoleBackends b;
    b.executor = std::make_unique<ScriptedBackend>(counting_executor_rules());
    b.reflector = std::make_unique<ScriptedBackend>(std::vector<ScriptRule>{rule("", "Stepping stopped early.")});
    b.optimizer = std::make_unique<ScriptedBackend>(level_schedule(levels));
    return b;
  };
}

inline RunConfig counting_config(ReflectionMode mode, int patience, int max_iters) {
  RunConfig cfg;
  cfg.env_id = "counting";
  cfg.executor.mode = AgentMode::pract;
  cfg.executor.max_steps = 15;
  cfg.reflector.mode = mode;
  cfg.rpo.method = RpoMethod::batch;
  cfg.batch_size = 3;
  cfg.max_iters = max_iters;
  cfg.patience = patience;
  cfg.seeds = {0};
  return cfg;
}

}  // namespace pract::testing
