#include "pract/environments.hpp"

#include <algorithm>
#include <set>

#include "pract/text.hpp"

namespace pract {

namespace {

bool value_matches(const json& v, const std::string& arg) {
  const std::string want = normalize_arg(arg);
  if (v.is_string()) return normalize_arg(v.get<std::string>()) == want;
  if (v.is_number_integer()) return std::to_string(v.get<long long>()) == want;
  if (v.is_number()) return normalize_arg(v.dump()) == want;
  if (v.is_array()) {
    return std::any_of(v.begin(), v.end(), [&](const json& e) { return value_matches(e, arg); });
  }
  return false;
}

std::string render_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::vector<std::string> parts;
    for (const auto& e : v) parts.push_back(render_value(e));
    return join(parts, ", ");
  }
  if (v.is_number_float()) return format_fixed(v.get<double>(), 1);
  return v.dump();
}

std::string render_price(double p) { return "$" + format_fixed(p, 2); }

std::string attribute_snippet(const ShopItem& item) {
  std::vector<std::string> parts;
  for (const auto& [k, v] : item.attributes) parts.push_back(k + ": " + v);
  return join(parts, ", ");
}

Observation render_results(const ShopState& state, const std::string& query) {
  if (state.results.empty()) return Observation::of("No results for \"" + query + "\".");
  std::string out = "Results for \"" + query + "\":\n";
  for (std::size_t i = 0; i < state.results.size(); ++i) {
    const ShopItem& it = *state.results[i];
    out += "[item " + std::to_string(i + 1) + "] " + it.id + " " + it.title + " | " +
           attribute_snippet(it) + " | " + render_price(it.price) + "\n";
  }
  out += "[back to search]";
  return Observation::of(out);
}

Observation render_item(const ShopState& state) {
  const ShopItem& it = *state.current;
  std::string out = it.id + " " + it.title + "\nPrice: " + render_price(it.price) + "\nAttributes: ";
  std::vector<std::string> attrs;
  for (const auto& [k, v] : it.attributes) attrs.push_back(k + ": " + v);
  out += join(attrs, "; ") + "\n";
  for (const auto& [name, values] : it.options) {
    out += "Options for " + name + ":";
    for (const auto& v : values) out += " [" + name + ": " + v + "]";
    out += "\n";
  }
  if (!state.selected.empty()) {
    std::vector<std::string> sel;
    for (const auto& [k, v] : state.selected) sel.push_back(k + ": " + v);
    out += "Selected: " + join(sel, "; ") + "\n";
  }
  out += "[buy now] [back to search]";
  return Observation::of(out);
}

}  // namespace

// ---- tools ---------------------------------------------------------------------

ActionSpec ToolDef::spec() const {
  ActionSpec a;
  a.name = name;
  a.description = description;
  for (const auto& k : keys) a.params.push_back(ParamSpec{k.param, k.type, k.values, true});
  return a;
}

std::vector<const json*> KnowledgeBase::lookup(
    const std::string& table, const std::vector<std::pair<std::string, std::string>>& conditions) const {
  std::vector<const json*> out;
  auto it = tables.find(table);
  if (it == tables.end()) return out;
  for (const auto& rec : it->second) {
    bool ok = std::all_of(conditions.begin(), conditions.end(), [&](const auto& c) {
      return rec.contains(c.first) && value_matches(rec.at(c.first), c.second);
    });
    if (ok) out.push_back(&rec);
  }
  return out;
}

void KnowledgeBase::check_integrity() const {
  for (const auto& fk : references) {
    auto src = tables.find(fk.table);
    auto dst = tables.find(fk.target_table);
    if (src == tables.end() || dst == tables.end())
      throw std::invalid_argument("reference names a missing table: " + fk.table + " -> " + fk.target_table);
    std::set<std::string> targets;
    for (const auto& rec : dst->second) {
      if (rec.contains(fk.target_field)) targets.insert(normalize_arg(render_value(rec.at(fk.target_field))));
    }
    for (const auto& rec : src->second) {
      if (!rec.contains(fk.field)) continue;
      const json& v = rec.at(fk.field);
      std::vector<json> values = v.is_array() ? v.get<std::vector<json>>() : std::vector<json>{v};
      for (const auto& e : values) {
        if (!targets.count(normalize_arg(render_value(e))))
          throw std::invalid_argument("dangling reference " + fk.table + "." + fk.field + " = " +
                                      render_value(e));
      }
    }
  }
}

const ToolDef* ToolWorld::find_tool(const std::string& name) const {
  for (const auto& t : tools) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

ActionSpace ToolWorld::action_space() const {
  ActionSpace space;
  for (const auto& t : tools) space.push_back(t.spec());
  space.push_back(think_action_spec());
  space.push_back(finish_action_spec());
  return space;
}

std::string call_key(const ActionCall& call) {
  std::string key = call.action + "[";
  bool first = true;
  for (const auto& [k, v] : call.args) {
    if (!first) key += ";";
    key += k + "=" + normalize_arg(v);
    first = false;
  }
  return key + "]";
}

double recall(const std::vector<ActionCall>& executed, const std::vector<ActionCall>& ground_truth) {
  std::set<std::string> truth;
  for (const auto& c : ground_truth) truth.insert(call_key(c));
  if (truth.empty()) return 0.0;
  std::set<std::string> done;
  for (const auto& c : executed) done.insert(call_key(c));
  std::size_t hit = 0;
  for (const auto& k : truth) hit += done.count(k);
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

double tool_reward(const Trajectory& t, const ToolTask& task) {
  std::vector<ActionCall> executed;
  for (const auto& s : t.steps) {
    if (!s.observation.is_null) executed.push_back(s.action);
  }
  return recall(executed, task.ground_truth);
}

Observation tool_step(const ToolWorld& world, ToolState& state, const ActionCall& call) {
  state.executed.push_back(call);
  const ToolDef* tool = world.find_tool(call.action);
  if (!tool) return Observation::of("Unknown tool " + call.action + ".");

  std::vector<std::pair<std::string, std::string>> conditions;
  std::vector<std::string> shown;
  for (const auto& k : tool->keys) {
    auto it = call.args.find(k.param);
    std::string arg = it == call.args.end() ? "" : it->second;
    conditions.emplace_back(k.field, arg);
    shown.push_back(arg);
  }
  auto rows = world.kb.lookup(tool->table, conditions);
  const std::string label = call.action + "[" + join(shown, "; ") + "]";
  if (rows.empty()) return Observation::of("no records found for " + label);

  std::string out = std::to_string(rows.size()) + " record(s) for " + label + ":";
  for (const json* rec : rows) {
    std::vector<std::string> parts;
    for (const auto& f : tool->outputs) {
      std::string v = rec->contains(f) ? render_value(rec->at(f)) : "n/a";
      parts.push_back(tool->outputs.size() == 1 ? v : f + ": " + v);
    }
    out += "\n- " + join(parts, "; ");
  }
  return Observation::of(out);
}

// ---- shop ------------------------------------------------------------------------

const ShopItem* Catalog::find(const std::string& id) const {
  auto it = std::lower_bound(items.begin(), items.end(), id,
                             [](const ShopItem& a, const std::string& b) { return a.id < b; });
  if (it != items.end() && it->id == id) return &*it;
  return nullptr;
}

double shop_reward(const std::optional<Purchase>& final, const ShopGoal& goal) {
  const std::size_t total = goal.required_count();
  if (!final || total == 0) return 0.0;
  std::size_t hit = 0;
  for (const auto& [name, want] : goal.attributes) {
    const std::string w = normalize_arg(want);
    auto a = final->item.attributes.find(name);
    auto o = final->selected.find(name);
    bool ok = (a != final->item.attributes.end() && normalize_arg(a->second) == w) ||
              (o != final->selected.end() && normalize_arg(o->second) == w);
    hit += ok ? 1 : 0;
  }
  if (goal.price_max && final->item.price <= *goal.price_max) ++hit;
  return static_cast<double>(hit) / static_cast<double>(total);
}

int overlap_score(const std::vector<std::string>& query_tokens, const ShopItem& item) {
  std::set<std::string> item_tokens;
  for (auto& t : tokenize(item.title)) item_tokens.insert(std::move(t));
  for (const auto& [k, v] : item.attributes) {
    for (auto& t : tokenize(v)) item_tokens.insert(std::move(t));
  }
  std::set<std::string> q(query_tokens.begin(), query_tokens.end());
  int score = 0;
  for (const auto& t : q) score += static_cast<int>(item_tokens.count(t));
  return score;
}

std::vector<const ShopItem*> rank_items(const Catalog& catalog, const std::string& query, std::size_t k) {
  const auto tokens = tokenize(query);
  std::vector<std::pair<int, const ShopItem*>> scored;
  for (const auto& item : catalog.items) {
    int s = overlap_score(tokens, item);
    if (s > 0) scored.emplace_back(s, &item);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second->id < b.second->id;
  });
  std::vector<const ShopItem*> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].second);
  return out;
}

Observation shop_search(ShopState& state, const std::string& query) {
  if (state.page == ShopPage::done) return Observation::of(std::string(kNothingHappened));
  state.results = rank_items(*state.catalog, query);
  state.current = nullptr;
  state.selected.clear();
  state.page = ShopPage::results;
  return render_results(state, query);
}

Observation shop_click(ShopState& state, const std::string& target) {
  const std::string t = normalize_arg(target);
  const Observation nothing = Observation::of(std::string(kNothingHappened));

  if (state.page == ShopPage::done) return nothing;
  if (t == "back to search" && state.page != ShopPage::search) {
    state.page = ShopPage::search;
    state.results.clear();
    state.current = nullptr;
    state.selected.clear();
    return Observation::of("Search page. Use search[query] to look for products.");
  }

  if (state.page == ShopPage::results) {
    const ShopItem* hit = nullptr;
    if (t.rfind("item ", 0) == 0) {
      const std::string n = trim(std::string_view(t).substr(5));
      if (!n.empty() && std::all_of(n.begin(), n.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
          n.size() < 6) {
        std::size_t idx = std::stoul(n);
        if (idx >= 1 && idx <= state.results.size()) hit = state.results[idx - 1];
      }
    } else {
      for (const ShopItem* it : state.results) {
        if (normalize_arg(it->id) == t) hit = it;
      }
    }
    if (!hit) return nothing;
    state.current = hit;
    state.selected.clear();
    state.page = ShopPage::item;
    return render_item(state);
  }

  if (state.page == ShopPage::item) {
    const ShopItem& item = *state.current;
    if (t == "buy now" || t == "buy") {
      state.purchase = Purchase{item, state.selected};
      state.page = ShopPage::done;
      std::vector<std::string> sel;
      for (const auto& [k, v] : state.selected) sel.push_back(k + ": " + v);
      return Observation::of("Purchased " + item.id + " " + item.title +
                             (sel.empty() ? std::string() : " with " + join(sel, "; ")) + ".");
    }
    // "name: value" selects an option; a bare value works when unambiguous.
    std::vector<std::pair<std::string, std::string>> matches;
    auto colon = t.find(':');
    for (const auto& [name, values] : item.options) {
      for (const auto& v : values) {
        bool ok = colon != std::string::npos
                      ? normalize_arg(name) == trim(std::string_view(t).substr(0, colon)) &&
                            normalize_arg(v) == trim(std::string_view(t).substr(colon + 1))
                      : normalize_arg(v) == t;
        if (ok) matches.emplace_back(name, v);
      }
    }
    if (matches.size() != 1) return nothing;
    state.selected[matches[0].first] = matches[0].second;
    return Observation::of("Selected " + matches[0].first + ": " + matches[0].second + ".");
  }
  return nothing;
}

ActionSpace shop_action_space() {
  return {
      ActionSpec{"search",
                 "Search the store catalog with a text query; shows the top matching items.",
                 {ParamSpec{"query", ParamType::string, {}, true}},
                 false,
                 false},
      ActionSpec{"click",
                 "Click a visible element: a result such as 'item 2', an option such as "
                 "'size: M', 'buy now', or 'back to search'.",
                 {ParamSpec{"target", ParamType::string, {}, true}},
                 false,
                 false},
      think_action_spec(),
      finish_action_spec(),
  };
}

ShopEnv::ShopEnv(std::shared_ptr<const Catalog> catalog, ShopTask task)
    : catalog_(std::move(catalog)), task_(std::move(task)) {
  state_.catalog = catalog_.get();
}

Observation ShopEnv::step(const ActionCall& call) {
  auto arg = [&](const char* name) {
    auto it = call.args.find(name);
    return it == call.args.end() ? std::string() : it->second;
  };
  if (call.action == "search") return shop_search(state_, arg("query"));
  if (call.action == "click") return shop_click(state_, arg("target"));
  return Observation::of(std::string(kNothingHappened));
}

}  // namespace pract
