#pragma once

// Principle-conditioned executor: renders the agent prompt, queries the
// backend, parses the emitted action and steps the environment until a
// terminal action, a terminal environment state, or the step cap.

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pract/backend.hpp"
#include "pract/core.hpp"
#include "pract/templates.hpp"

namespace pract {

class Environment {
 public:
  virtual ~Environment() = default;

  /// Only called for non-inner actions.
  virtual Observation step(const ActionCall& call) = 0;
  virtual bool done() const = 0;
  /// Reward for the episode so far; nullopt when the environment emits none.
  virtual std::optional<double> reward() const = 0;
};

/// Builds a fresh environment for the i-th query of a batch.
using EnvFactory = std::function<std::unique_ptr<Environment>(std::size_t index)>;

enum class AgentMode { act, react, pract };

std::string_view to_string(AgentMode m);
AgentMode agent_mode_from(std::string_view s);

inline constexpr const char* kThinkAction = "think";
inline constexpr const char* kFinishAction = "finish";

ActionSpec think_action_spec();
ActionSpec finish_action_spec();

/// Action space the agent sees in `mode`: act drops the think action.
ActionSpace agent_action_space(const ActionSpace& full, AgentMode mode);

struct ExecutorConfig {
  AgentMode mode = AgentMode::pract;
  int max_steps = 15;
  int parse_retries = 2;
  std::string template_id = "executor";
  std::size_t history_char_budget = 16000;
  int workers = 1;
};

void to_json(json& j, const ExecutorConfig& c);
void from_json(const json& j, ExecutorConfig& c);

class ParseError : public std::runtime_error {
 public:
  enum class Kind { unparseable, unknown_action, arity_mismatch, type_mismatch };

  ParseError(Kind kind, std::string raw, const std::string& detail);

  Kind kind() const { return kind_; }
  const std::string& raw() const { return raw_; }

 private:
  Kind kind_;
  std::string raw_;
};

std::string_view to_string(ParseError::Kind k);

/// Parses name[arg1; arg2; ...] and validates it against `space`. A leading
/// "Action:" label is tolerated. Single-parameter actions take the whole
/// bracket content as their argument.
ActionCall parse_action(const std::string& raw, const ActionSpace& space);

std::string render_action_specs(const ActionSpace& space);
std::string render_principles(const PrincipleSet& p, const ActionSpace& space);
/// "Action i: ...\nObservation i: ..." lines, numbered from `first_index`.
std::string render_steps(const std::vector<Step>& steps, const ActionSpace& space,
                         std::size_t first_index = 1);

inline constexpr std::string_view kElisionMarker = "earlier steps omitted";

/// `principles` must be set exactly in pract mode and valid for `space`.
std::vector<ChatMessage> render_prompt(const std::string& query, const std::vector<Step>& context,
                                       const PrincipleSet* principles, const ActionSpace& space,
                                       AgentMode mode, const TemplateLibrary& templates = {},
                                       const std::string& template_id = "executor",
                                       std::size_t history_char_budget = 0);

class Executor {
 public:
  Executor(ExecutorConfig cfg, ActionSpace full_space, TemplateLibrary templates = {});

  const ExecutorConfig& config() const { return cfg_; }
  const ActionSpace& space() const { return space_; }

  /// Runs one episode. Backend errors propagate; unparseable output after
  /// `parse_retries` correction prompts ends it with Termination::parse_failure.
  Trajectory run_episode(const std::string& query, Environment& env,
                         const PrincipleSet* principles, Backend& backend) const;

  /// One trajectory per query, order-aligned, fresh environment each. A
  /// backend error is recorded in that query's trajectory only.
  std::vector<Trajectory> run_batch(const std::vector<std::string>& queries,
                                    const EnvFactory& env_factory, const PrincipleSet* principles,
                                    Backend& backend) const;

 private:
  ExecutorConfig cfg_;
  ActionSpace space_;
  TemplateLibrary templates_;
};

/// Runs fn(i) for i in [0, n) over `workers` threads. The first exception
/// thrown is rethrown after all workers join.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace pract
