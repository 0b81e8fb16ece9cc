#pragma once

// Simulated environments.
//
// ToolEnv: function-call lookups against a synthetic knowledge base. Reward is
// the recall of the task's ground-truth calls among the executed calls.
//
// ShopEnv: a small search/click shopping site. Reward is the fraction of the
// goal's required attributes (price ceiling counted as one) satisfied by the
// purchased item together with its selected options.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pract/core.hpp"
#include "pract/executor.hpp"

namespace pract {

// ---- tool environments ------------------------------------------------------

/// Binds one action parameter to a record field it must match.
struct ToolKey {
  std::string param;
  std::string field;
  ParamType type = ParamType::string;
  std::vector<std::string> values;  // enumeration only
};

/// A lookup tool: returns `outputs` of every record in `table` whose key
/// fields all match the call's arguments.
struct ToolDef {
  std::string name;
  std::string description;
  std::string table;
  std::vector<ToolKey> keys;
  std::vector<std::string> outputs;

  ActionSpec spec() const;
};

/// Field reference: every value of `table.field` must occur in `target_table.target_field`.
struct ForeignKey {
  std::string table;
  std::string field;
  std::string target_table;
  std::string target_field;
};

struct KnowledgeBase {
  std::map<std::string, std::vector<json>> tables;
  std::vector<ForeignKey> references;

  /// Records whose `field` matches `arg` for every (field, arg) condition.
  /// String fields compare normalized; array fields match on any element.
  std::vector<const json*> lookup(const std::string& table,
                                  const std::vector<std::pair<std::string, std::string>>& conditions) const;

  /// Throws std::invalid_argument naming the first dangling reference.
  void check_integrity() const;
};

struct ToolWorld {
  std::string domain;
  KnowledgeBase kb;
  std::vector<ToolDef> tools;

  const ToolDef* find_tool(const std::string& name) const;
  /// Tools followed by think and finish.
  ActionSpace action_space() const;
};

struct ToolTask {
  std::string id;
  std::string query;
  std::vector<ActionCall> ground_truth;
  std::string kb_ref;
};

/// Action-call identity for recall: name plus normalized arguments.
std::string call_key(const ActionCall& call);

/// |executed ∩ ground_truth| / |ground_truth| over call_key sets.
double recall(const std::vector<ActionCall>& executed, const std::vector<ActionCall>& ground_truth);

/// Executed calls are the steps with a non-null observation.
double tool_reward(const Trajectory& t, const ToolTask& task);

struct ToolState {
  std::vector<ActionCall> executed;
};

/// Deterministic lookup rendered as text; misses are observations, not errors.
Observation tool_step(const ToolWorld& world, ToolState& state, const ActionCall& call);

class ToolEnv : public Environment {
 public:
  ToolEnv(std::shared_ptr<const ToolWorld> world, ToolTask task)
      : world_(std::move(world)), task_(std::move(task)) {}

  Observation step(const ActionCall& call) override { return tool_step(*world_, state_, call); }
  bool done() const override { return false; }
  std::optional<double> reward() const override { return recall(state_.executed, task_.ground_truth); }

  const ToolState& state() const { return state_; }

 private:
  std::shared_ptr<const ToolWorld> world_;
  ToolTask task_;
  ToolState state_;
};

// ---- shopping environment -----------------------------------------------------

struct ShopItem {
  std::string id;
  std::string title;
  std::map<std::string, std::string> attributes;
  std::map<std::string, std::vector<std::string>> options;
  double price = 0;

  bool operator==(const ShopItem&) const = default;
};

struct Catalog {
  std::vector<ShopItem> items;  // sorted by id

  const ShopItem* find(const std::string& id) const;
};

struct ShopGoal {
  std::map<std::string, std::string> attributes;
  std::optional<double> price_max;
  std::string query_hint;

  std::size_t required_count() const { return attributes.size() + (price_max ? 1 : 0); }
};

struct ShopTask {
  std::string id;
  std::string query;
  ShopGoal goal;
  std::string target_item;
};

struct Purchase {
  ShopItem item;
  std::map<std::string, std::string> selected;
};

double shop_reward(const std::optional<Purchase>& final, const ShopGoal& goal);

inline constexpr std::size_t kSearchTopK = 5;

/// Token-overlap score: number of distinct query tokens found among the
/// tokens of the item's title and attribute values.
int overlap_score(const std::vector<std::string>& query_tokens, const ShopItem& item);

/// Items with positive score, by score descending then id ascending, cut to k.
std::vector<const ShopItem*> rank_items(const Catalog& catalog, const std::string& query,
                                        std::size_t k = kSearchTopK);

enum class ShopPage { search, results, item, done };

struct ShopState {
  const Catalog* catalog = nullptr;
  ShopPage page = ShopPage::search;
  std::vector<const ShopItem*> results;
  const ShopItem* current = nullptr;
  std::map<std::string, std::string> selected;
  std::optional<Purchase> purchase;
};

inline constexpr std::string_view kNothingHappened = "Nothing happened.";

Observation shop_search(ShopState& state, const std::string& query);
Observation shop_click(ShopState& state, const std::string& target);

ActionSpace shop_action_space();

class ShopEnv : public Environment {
 public:
  ShopEnv(std::shared_ptr<const Catalog> catalog, ShopTask task);

  Observation step(const ActionCall& call) override;
  bool done() const override { return state_.page == ShopPage::done; }
  std::optional<double> reward() const override { return shop_reward(state_.purchase, task_.goal); }

  const ShopState& state() const { return state_; }

 private:
  std::shared_ptr<const Catalog> catalog_;
  ShopTask task_;
  ShopState state_;
};

// ---- suites -----------------------------------------------------------------------

enum class EnvKind { tool, shop };

struct TaskSuite {
  std::string env_id;
  EnvKind kind = EnvKind::tool;
  std::uint64_t seed = 0;
  std::shared_ptr<const ToolWorld> world;
  std::vector<ToolTask> tool_tasks;
  std::shared_ptr<const Catalog> catalog;
  std::vector<ShopTask> shop_tasks;

  std::size_t size() const;
  const std::string& query(std::size_t i) const;
  const std::string& task_id(std::size_t i) const;
  ActionSpace action_space() const;
  std::unique_ptr<Environment> make_env(std::size_t i) const;
};

/// Carries the location of a schema problem: a line number for syntax
/// errors, a field path for structural ones.
class SuiteError : public std::runtime_error {
 public:
  SuiteError(const std::string& source, std::size_t line, const std::string& field,
             const std::string& detail);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

TaskSuite parse_task_suite(const std::string& text, const std::string& source = "<suite>");
TaskSuite load_task_suite(const std::string& path);
json suite_to_json(const TaskSuite& suite);
/// Canonical file text; byte-identical for identical suites.
std::string suite_text(const TaskSuite& suite);

inline constexpr std::size_t kToolSuiteSize = 60;
inline constexpr std::size_t kShopSuiteSize = 251;

/// env_id: academia, movie, weather or shop.
TaskSuite generate_suite(const std::string& env_id, std::uint64_t seed);
const std::vector<std::string>& known_env_ids();

}  // namespace pract
