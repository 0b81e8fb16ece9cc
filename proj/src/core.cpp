#include "pract/core.hpp"

#include <cctype>
#include <set>

#include "pract/text.hpp"

namespace pract {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

template <typename E, std::size_t N>
E enum_from(std::string_view s, const std::pair<E, std::string_view> (&table)[N],
            std::string_view what) {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  throw std::invalid_argument("unknown " + std::string(what) + ": " + std::string(s));
}

template <typename E, std::size_t N>
std::string_view enum_name(E e, const std::pair<E, std::string_view> (&table)[N]) {
  for (const auto& [v, name] : table) {
    if (v == e) return name;
  }
  return "?";
}

constexpr std::pair<ParamType, std::string_view> kParamTypes[] = {
    {ParamType::string, "string"},
    {ParamType::integer, "integer"},
    {ParamType::enumeration, "enum"},
};
constexpr std::pair<Termination, std::string_view> kTerminations[] = {
    {Termination::finished, "finished"},
    {Termination::max_steps, "max_steps"},
    {Termination::parse_failure, "parse_failure"},
    {Termination::backend_error, "backend_error"},
};
constexpr std::pair<Provenance, std::string_view> kProvenances[] = {
    {Provenance::seed, "seed"},
    {Provenance::rpo_traj, "rpo_traj"},
    {Provenance::rpo_batch, "rpo_batch"},
    {Provenance::manual, "manual"},
};
constexpr std::pair<ReflectionMode, std::string_view> kReflectionModes[] = {
    {ReflectionMode::self, "self"},
    {ReflectionMode::reward, "reward"},
};

}  // namespace

std::string_view to_string(ParamType t) { return enum_name(t, kParamTypes); }
std::string_view to_string(Termination t) { return enum_name(t, kTerminations); }
std::string_view to_string(Provenance p) { return enum_name(p, kProvenances); }
std::string_view to_string(ReflectionMode m) { return enum_name(m, kReflectionModes); }
ParamType param_type_from(std::string_view s) { return enum_from(s, kParamTypes, "param type"); }
Termination termination_from(std::string_view s) {
  return enum_from(s, kTerminations, "termination");
}
Provenance provenance_from(std::string_view s) { return enum_from(s, kProvenances, "provenance"); }
ReflectionMode reflection_mode_from(std::string_view s) {
  return enum_from(s, kReflectionModes, "reflection mode");
}

const ActionSpec* find_action(const ActionSpace& space, std::string_view name) {
  for (const auto& a : space) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

void check_action_space(const ActionSpace& space) {
  std::set<std::string> seen;
  for (const auto& a : space) {
    if (!is_identifier(a.name)) throw std::invalid_argument("bad action name: '" + a.name + "'");
    if (!seen.insert(a.name).second) throw std::invalid_argument("duplicate action: " + a.name);
    std::set<std::string> params;
    for (const auto& p : a.params) {
      if (!is_identifier(p.name))
        throw std::invalid_argument("bad param name in " + a.name + ": '" + p.name + "'");
      if (!params.insert(p.name).second)
        throw std::invalid_argument("duplicate param in " + a.name + ": " + p.name);
      if (p.type == ParamType::enumeration && p.values.empty())
        throw std::invalid_argument("enum param without values: " + a.name + "." + p.name);
    }
  }
}

std::string ActionCall::render(const ActionSpace& space) const {
  std::vector<std::string> parts;
  if (const ActionSpec* spec = find_action(space, action)) {
    for (const auto& p : spec->params) {
      auto it = args.find(p.name);
      if (it != args.end()) parts.push_back(it->second);
    }
  } else {
    for (const auto& [k, v] : args) parts.push_back(v);
  }
  return action + "[" + join(parts, "; ") + "]";
}

const std::string& PrincipleSet::text(const std::string& action) const {
  auto it = entries.find(action);
  if (it == entries.end()) throw std::out_of_range("no principle for action: " + action);
  return it->second.text;
}

void PrincipleSet::set(const std::string& action, std::string text) {
  entries[action] = Principle{action, std::move(text)};
}

PrincipleSet PrincipleSet::derive(Provenance prov) const {
  PrincipleSet child;
  child.entries = entries;
  child.version = version + 1;
  child.parent_version = version;
  child.provenance = prov;
  return child;
}

std::string Violation::describe() const {
  switch (kind) {
    case Kind::missing_action: return "missing principle for action \"" + action + "\"";
    case Kind::unknown_action: return "principle for unknown action \"" + action + "\"";
    case Kind::empty_text: return "empty principle text for action \"" + action + "\"";
    case Kind::key_mismatch: return "entry key does not match its action \"" + action + "\"";
  }
  return "?";
}

std::vector<Violation> validate_principle_set(const PrincipleSet& p, const ActionSpace& space) {
  std::vector<Violation> out;
  for (const auto& a : space) {
    if (!p.entries.count(a.name)) out.push_back({Violation::Kind::missing_action, a.name});
  }
  for (const auto& [name, principle] : p.entries) {
    if (!find_action(space, name)) {
      out.push_back({Violation::Kind::unknown_action, name});
      continue;
    }
    if (principle.action != name) out.push_back({Violation::Kind::key_mismatch, name});
    if (is_blank(principle.text)) out.push_back({Violation::Kind::empty_text, name});
  }
  return out;
}

InvalidPrincipleSet::InvalidPrincipleSet(std::vector<Violation> v)
    : std::runtime_error([&] {
        std::string msg = "invalid principle set:";
        for (const auto& x : v) msg += " " + x.describe() + ";";
        return msg;
      }()),
      violations_(std::move(v)) {}

PrincipleSet seed_principles(const ActionSpace& space) {
  PrincipleSet p;
  for (const auto& a : space) {
    p.set(a.name, "Use " + a.name + " when it matches its purpose: " + a.description);
  }
  p.version = 0;
  p.provenance = Provenance::seed;
  return p;
}

// ---- JSON ---------------------------------------------------------------

void to_json(json& j, const ParamSpec& p) {
  j = json{{"name", p.name}, {"type", to_string(p.type)}, {"required", p.required}};
  if (p.type == ParamType::enumeration) j["values"] = p.values;
}

void from_json(const json& j, ParamSpec& p) {
  p.name = j.at("name").get<std::string>();
  p.type = param_type_from(j.value("type", std::string("string")));
  p.required = j.value("required", true);
  p.values = j.value("values", std::vector<std::string>{});
}

void to_json(json& j, const ActionSpec& a) {
  j = json{{"name", a.name},         {"description", a.description}, {"params", a.params},
           {"is_inner", a.is_inner}, {"is_terminal", a.is_terminal}};
}

void from_json(const json& j, ActionSpec& a) {
  a.name = j.at("name").get<std::string>();
  a.description = j.value("description", std::string());
  a.params = j.value("params", std::vector<ParamSpec>{});
  a.is_inner = j.value("is_inner", false);
  a.is_terminal = j.value("is_terminal", false);
}

void to_json(json& j, const ActionCall& a) {
  j = json{{"action", a.action}, {"args", a.args}, {"raw_text", a.raw_text}};
}

void from_json(const json& j, ActionCall& a) {
  a.action = j.at("action").get<std::string>();
  a.args = j.at("args").get<std::map<std::string, std::string>>();
  a.raw_text = j.at("raw_text").get<std::string>();
}

void to_json(json& j, const Observation& o) { j = json{{"text", o.text}, {"is_null", o.is_null}}; }

void from_json(const json& j, Observation& o) {
  o.text = j.at("text").get<std::string>();
  o.is_null = j.at("is_null").get<bool>();
  if (o.is_null && o.text != kNullObservation)
    throw std::invalid_argument("null observation must carry the sentinel text");
}

void to_json(json& j, const Step& s) {
  j = json{{"action", s.action}, {"observation", s.observation}};
}

void from_json(const json& j, Step& s) {
  s.action = j.at("action").get<ActionCall>();
  s.observation = j.at("observation").get<Observation>();
}

void to_json(json& j, const Trajectory& t) {
  j = json{{"id", t.id},
           {"query", t.query},
           {"steps", t.steps},
           {"reward", t.reward ? json(*t.reward) : json(nullptr)},
           {"terminated", to_string(t.terminated)},
           {"error", t.error}};
}

void from_json(const json& j, Trajectory& t) {
  t.id = j.value("id", std::string());
  t.query = j.at("query").get<std::string>();
  t.steps = j.at("steps").get<std::vector<Step>>();
  const auto& r = j.at("reward");
  t.reward = r.is_null() ? std::nullopt : std::optional<double>(r.get<double>());
  t.terminated = termination_from(j.at("terminated").get<std::string>());
  t.error = j.value("error", std::string());
}

void to_json(json& j, const PrincipleSet& p) {
  json entries = json::object();
  for (const auto& [k, v] : p.entries) entries[k] = v.text;
  j = json{{"version", p.version},
           {"parent_version", p.parent_version ? json(*p.parent_version) : json(nullptr)},
           {"provenance", to_string(p.provenance)},
           {"entries", entries}};
}

void from_json(const json& j, PrincipleSet& p) {
  p.version = j.at("version").get<int>();
  const auto& parent = j.at("parent_version");
  p.parent_version = parent.is_null() ? std::nullopt : std::optional<int>(parent.get<int>());
  if (p.parent_version && *p.parent_version >= p.version)
    throw std::invalid_argument("parent_version must be lower than version");
  p.provenance = provenance_from(j.at("provenance").get<std::string>());
  p.entries.clear();
  for (const auto& [k, v] : j.at("entries").items()) p.set(k, v.get<std::string>());
}

void to_json(json& j, const Reflection& r) {
  j = json{{"query", r.query},
           {"trajectory_id", r.trajectory_id},
           {"text", r.text},
           {"mode", to_string(r.mode)},
           {"reward", r.reward ? json(*r.reward) : json(nullptr)},
           {"degenerate", r.degenerate}};
}

void from_json(const json& j, Reflection& r) {
  r.query = j.at("query").get<std::string>();
  r.trajectory_id = j.at("trajectory_id").get<std::string>();
  r.text = j.at("text").get<std::string>();
  r.mode = reflection_mode_from(j.at("mode").get<std::string>());
  const auto& rw = j.at("reward");
  r.reward = rw.is_null() ? std::nullopt : std::optional<double>(rw.get<double>());
  r.degenerate = j.value("degenerate", false);
  if ((r.mode == ReflectionMode::reward) != r.reward.has_value())
    throw std::invalid_argument("reflection reward must be present exactly in reward mode");
}

std::string serialize_trajectory(const Trajectory& t) { return json(t).dump(); }
Trajectory deserialize_trajectory(std::string_view line) {
  return json::parse(line).get<Trajectory>();
}
std::string serialize_reflection(const Reflection& r) { return json(r).dump(); }
Reflection deserialize_reflection(std::string_view line) {
  return json::parse(line).get<Reflection>();
}
std::string serialize_principle_set(const PrincipleSet& p) { return json(p).dump(); }
PrincipleSet deserialize_principle_set(std::string_view text) {
  return json::parse(text).get<PrincipleSet>();
}

std::string principle_file_text(const PrincipleSet& p) { return json(p).dump(2) + "\n"; }

PrincipleSet load_principle_file(const std::string& path) {
  try {
    return deserialize_principle_set(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_principle_file(const std::string& path, const PrincipleSet& p) {
  write_file(path, principle_file_text(p));
}

}  // namespace pract
