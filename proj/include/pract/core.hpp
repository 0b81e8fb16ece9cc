#pragma once

// Shared domain types for principled agents: action specs, trajectories,
// principle sets and reflections, plus their record serialization.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace pract {

using json = nlohmann::json;

/// Observation text attached to every inner action (think, finish).
inline constexpr std::string_view kNullObservation = "OK.";

enum class ParamType { string, integer, enumeration };

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::string;
  std::vector<std::string> values;  // enumeration only
  bool required = true;

  bool operator==(const ParamSpec&) const = default;
};

struct ActionSpec {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  bool is_inner = false;     // never forwarded to the environment
  bool is_terminal = false;  // ends the episode when emitted

  bool operator==(const ActionSpec&) const = default;
};

using ActionSpace = std::vector<ActionSpec>;

const ActionSpec* find_action(const ActionSpace& space, std::string_view name);

/// Throws std::invalid_argument on duplicate names, bad identifiers or empty enums.
void check_action_space(const ActionSpace& space);

struct ActionCall {
  std::string action;
  std::map<std::string, std::string> args;
  std::string raw_text;

  /// Canonical text form: name[arg1; arg2] in parameter order.
  std::string render(const ActionSpace& space) const;

  bool operator==(const ActionCall&) const = default;
};

struct Observation {
  std::string text;
  bool is_null = false;

  static Observation null() { return {std::string(kNullObservation), true}; }
  static Observation of(std::string text) { return {std::move(text), false}; }

  bool operator==(const Observation&) const = default;
};

struct Step {
  ActionCall action;
  Observation observation;

  bool operator==(const Step&) const = default;
};

enum class Termination { finished, max_steps, parse_failure, backend_error };

struct Trajectory {
  std::string id;
  std::string query;
  std::vector<Step> steps;
  std::optional<double> reward;
  Termination terminated = Termination::finished;
  std::string error;  // set for parse_failure / backend_error

  bool operator==(const Trajectory&) const = default;
};

struct Principle {
  std::string action;
  std::string text;

  bool operator==(const Principle&) const = default;
};

enum class Provenance { seed, rpo_traj, rpo_batch, manual };

struct PrincipleSet {
  std::map<std::string, Principle> entries;
  int version = 0;
  std::optional<int> parent_version;
  Provenance provenance = Provenance::seed;

  const std::string& text(const std::string& action) const;
  void set(const std::string& action, std::string text);

  /// Child set carrying the same entries, version = this.version + 1.
  PrincipleSet derive(Provenance prov) const;

  bool operator==(const PrincipleSet&) const = default;
};

enum class ReflectionMode { self, reward };

struct Reflection {
  std::string query;
  std::string trajectory_id;
  std::string text;
  ReflectionMode mode = ReflectionMode::self;
  std::optional<double> reward;
  bool degenerate = false;  // empty or whitespace-only critique

  bool operator==(const Reflection&) const = default;
};

struct Violation {
  enum class Kind { missing_action, unknown_action, empty_text, key_mismatch };
  Kind kind;
  std::string action;

  std::string describe() const;
  bool operator==(const Violation&) const = default;
};

/// Empty result means the set covers exactly the action space with non-empty texts.
std::vector<Violation> validate_principle_set(const PrincipleSet& p, const ActionSpace& space);

class InvalidPrincipleSet : public std::runtime_error {
 public:
  explicit InvalidPrincipleSet(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Seed principles derived from action descriptions.
PrincipleSet seed_principles(const ActionSpace& space);

// Enum names as they appear in records.
std::string_view to_string(ParamType t);
std::string_view to_string(Termination t);
std::string_view to_string(Provenance p);
std::string_view to_string(ReflectionMode m);
ParamType param_type_from(std::string_view s);
Termination termination_from(std::string_view s);
Provenance provenance_from(std::string_view s);
ReflectionMode reflection_mode_from(std::string_view s);

// JSON conversions (ADL hooks for nlohmann::json).
void to_json(json& j, const ParamSpec& p);
void from_json(const json& j, ParamSpec& p);
void to_json(json& j, const ActionSpec& a);
void from_json(const json& j, ActionSpec& a);
void to_json(json& j, const ActionCall& a);
void from_json(const json& j, ActionCall& a);
void to_json(json& j, const Observation& o);
void from_json(const json& j, Observation& o);
void to_json(json& j, const Step& s);
void from_json(const json& j, Step& s);
void to_json(json& j, const Trajectory& t);
void from_json(const json& j, Trajectory& t);
void to_json(json& j, const PrincipleSet& p);
void from_json(const json& j, PrincipleSet& p);
void to_json(json& j, const Reflection& r);
void from_json(const json& j, Reflection& r);

/// One-line records for the newline-delimited stores.
std::string serialize_trajectory(const Trajectory& t);
Trajectory deserialize_trajectory(std::string_view line);
std::string serialize_reflection(const Reflection& r);
Reflection deserialize_reflection(std::string_view line);
std::string serialize_principle_set(const PrincipleSet& p);
PrincipleSet deserialize_principle_set(std::string_view text);

/// Pretty-printed principle file (stable key order, trailing newline).
std::string principle_file_text(const PrincipleSet& p);
PrincipleSet load_principle_file(const std::string& path);
void save_principle_file(const std::string& path, const PrincipleSet& p);

}  // namespace pract
