#pragma once

// Reflector: critiques one trajectory against the current principles, in
// self mode (no reward) or reward mode (scalar reward shown to the model).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pract/backend.hpp"
#include "pract/core.hpp"
#include "pract/templates.hpp"

namespace pract {

struct ReflectorConfig {
  ReflectionMode mode = ReflectionMode::self;
  std::string template_id = "reflect";
  std::size_t max_reflection_chars = 4000;
  int workers = 1;
};

void to_json(json& j, const ReflectorConfig& c);
void from_json(const json& j, ReflectorConfig& c);

class MissingReward : public std::runtime_error {
 public:
  explicit MissingReward(const std::string& query)
      : std::runtime_error("reward-mode reflection needs a rewarded trajectory: " + query) {}
};

/// Either a reflection or the reason it could not be produced.
struct ReflectionOutcome {
  std::optional<Reflection> reflection;
  std::string error;

  bool ok() const { return reflection.has_value(); }
};

class Reflector {
 public:
  Reflector(ReflectorConfig cfg, ActionSpace space, TemplateLibrary templates = {});

  const ReflectorConfig& config() const { return cfg_; }

  /// Throws MissingReward before any backend call in reward mode when the
  /// trajectory carries no reward.
  std::vector<ChatMessage> render_prompt(const Trajectory& t, const PrincipleSet& principles) const;

  Reflection reflect(const Trajectory& t, const PrincipleSet& principles, Backend& backend) const;

  /// Exactly one backend call per reflectable trajectory; failures are
  /// recorded per entry and never abort the batch.
  std::vector<ReflectionOutcome> reflect_all(const std::vector<Trajectory>& ts,
                                             const PrincipleSet& principles, Backend& backend) const;

 private:
  ReflectorConfig cfg_;
  ActionSpace space_;
  TemplateLibrary templates_;
};

}  // namespace pract
