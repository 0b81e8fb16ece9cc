#include "pract/executor.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <mutex>
#include <thread>

#include "pract/text.hpp"

namespace pract {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::vector<std::string> split_args(std::string_view content) {
  std::vector<std::string> out;
  if (is_blank(content)) return out;
  std::size_t start = 0;
  while (true) {
    auto semi = content.find(';', start);
    out.push_back(trim(content.substr(start, semi == std::string_view::npos ? semi : semi - start)));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return out;
}

std::string param_signature(const ActionSpec& a) {
  std::vector<std::string> names;
  for (const auto& p : a.params) names.push_back(p.name);
  return a.name + "[" + join(names, "; ") + "]";
}

std::string param_details(const ActionSpec& a) {
  std::vector<std::string> parts;
  for (const auto& p : a.params) {
    std::string d = p.name + ": ";
    switch (p.type) {
      case ParamType::string: d += "text"; break;
      case ParamType::integer: d += "integer"; break;
      case ParamType::enumeration: d += "one of " + join(p.values, " | "); break;
    }
    if (!p.required) d += ", optional";
    parts.push_back(std::move(d));
  }
  return join(parts, "; ");
}

}  // namespace

std::string_view to_string(AgentMode m) {
  switch (m) {
    case AgentMode::act: return "act";
    case AgentMode::react: return "react";
    case AgentMode::pract: return "pract";
  }
  return "pract";
}

AgentMode agent_mode_from(std::string_view s) {
  if (s == "act") return AgentMode::act;
  if (s == "react") return AgentMode::react;
  if (s == "pract") return AgentMode::pract;
  throw std::invalid_argument("unknown agent mode: " + std::string(s));
}

ActionSpec think_action_spec() {
  return ActionSpec{kThinkAction,
                    "Reason about the task and the observations so far. Not sent to the environment.",
                    {ParamSpec{"thought", ParamType::string, {}, true}},
                    true,
                    false};
}

ActionSpec finish_action_spec() {
  return ActionSpec{kFinishAction,
                    "End the episode with a final answer once the task is complete.",
                    {ParamSpec{"answer", ParamType::string, {}, false}},
                    true,
                    true};
}

ActionSpace agent_action_space(const ActionSpace& full, AgentMode mode) {
  ActionSpace out;
  for (const auto& a : full) {
    if (mode == AgentMode::act && a.name == kThinkAction) continue;
    out.push_back(a);
  }
  return out;
}

void to_json(json& j, const ExecutorConfig& c) {
  j = json{{"mode", to_string(c.mode)},
           {"max_steps", c.max_steps},
           {"parse_retries", c.parse_retries},
           {"template_id", c.template_id},
           {"history_char_budget", c.history_char_budget},
           {"workers", c.workers}};
}

void from_json(const json& j, ExecutorConfig& c) {
  c.mode = agent_mode_from(j.value("mode", std::string("pract")));
  c.max_steps = j.value("max_steps", 15);
  c.parse_retries = j.value("parse_retries", 2);
  c.template_id = j.value("template_id", std::string("executor"));
  c.history_char_budget = j.value("history_char_budget", std::size_t{16000});
  c.workers = j.value("workers", 1);
  if (c.max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  if (c.parse_retries < 0) throw std::invalid_argument("parse_retries must be >= 0");
}

// ---- parsing ---------------------------------------------------------------

std::string_view to_string(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::unparseable: return "Unparseable";
    case ParseError::Kind::unknown_action: return "UnknownAction";
    case ParseError::Kind::arity_mismatch: return "ArityMismatch";
    case ParseError::Kind::type_mismatch: return "TypeMismatch";
  }
  return "?";
}

ParseError::ParseError(Kind kind, std::string raw, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind),
      raw_(std::move(raw)) {}

ActionCall parse_action(const std::string& raw, const ActionSpace& space) {
  std::string s = trim(raw);
  if (starts_with_ci(s, "action:")) s = trim(std::string_view(s).substr(7));

  auto open = s.find('[');
  if (open == std::string::npos || s.empty() || s.back() != ']')
    throw ParseError(ParseError::Kind::unparseable, raw, "expected action_name[arguments]");
  std::string name = trim(std::string_view(s).substr(0, open));
  if (!is_identifier(name))
    throw ParseError(ParseError::Kind::unparseable, raw, "invalid action name '" + name + "'");

  const ActionSpec* spec = find_action(space, name);
  if (!spec) throw ParseError(ParseError::Kind::unknown_action, raw, "no action named '" + name + "'");

  std::string_view content = std::string_view(s).substr(open + 1, s.size() - open - 2);
  std::vector<std::string> values;
  if (spec->params.size() == 1) {
    std::string v = trim(content);
    if (!v.empty()) values.push_back(std::move(v));
  } else {
    values = split_args(content);
  }

  const auto required = static_cast<std::size_t>(
      std::count_if(spec->params.begin(), spec->params.end(), [](const ParamSpec& p) { return p.required; }));
  if (values.size() < required || values.size() > spec->params.size()) {
    throw ParseError(ParseError::Kind::arity_mismatch, raw,
                     name + " takes " + std::to_string(required) +
                         (required == spec->params.size() ? "" : "-" + std::to_string(spec->params.size())) +
                         " argument(s), got " + std::to_string(values.size()));
  }

  ActionCall call;
  call.action = name;
  call.raw_text = raw;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const ParamSpec& p = spec->params[i];
    std::string v = values[i];
    if (v.empty() && p.required)
      throw ParseError(ParseError::Kind::arity_mismatch, raw, "empty value for " + p.name);
    if (p.type == ParamType::integer && !is_integer(v)) {
      throw ParseError(ParseError::Kind::type_mismatch, raw, p.name + " must be an integer, got '" + v + "'");
    }
    if (p.type == ParamType::enumeration) {
      auto it = std::find_if(p.values.begin(), p.values.end(),
                             [&](const std::string& e) { return normalize_arg(e) == normalize_arg(v); });
      if (it == p.values.end()) {
        throw ParseError(ParseError::Kind::type_mismatch, raw,
                         p.name + " must be one of " + join(p.values, ", ") + ", got '" + v + "'");
      }
      v = *it;
    }
    call.args[p.name] = std::move(v);
  }
  return call;
}

// ---- rendering -------------------------------------------------------------

std::string render_action_specs(const ActionSpace& space) {
  std::string out;
  for (const auto& a : space) {
    out += "- " + param_signature(a) + ": " + a.description;
    if (!a.params.empty()) out += " (" + param_details(a) + ")";
    out += "\n";
  }
  return out;
}

std::string render_principles(const PrincipleSet& p, const ActionSpace& space) {
  std::string out;
  for (const auto& a : space) {
    auto it = p.entries.find(a.name);
    if (it != p.entries.end()) out += "- " + a.name + ": " + it->second.text + "\n";
  }
  return out;
}

std::string render_steps(const std::vector<Step>& steps, const ActionSpace& space,
                         std::size_t first_index) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto n = std::to_string(first_index + i);
    out += "Action " + n + ": " + steps[i].action.render(space) + "\n";
    out += "Observation " + n + ": " + steps[i].observation.text + "\n";
  }
  return out;
}

std::vector<ChatMessage> render_prompt(const std::string& query, const std::vector<Step>& context,
                                       const PrincipleSet* principles, const ActionSpace& space,
                                       AgentMode mode, const TemplateLibrary& templates,
                                       const std::string& template_id,
                                       std::size_t history_char_budget) {
  if ((mode == AgentMode::pract) != (principles != nullptr))
    throw std::invalid_argument("principles must be given exactly in pract mode");
  if (principles) {
    auto violations = validate_principle_set(*principles, space);
    if (!violations.empty()) throw InvalidPrincipleSet(std::move(violations));
  }

  const PromptTemplate tpl = templates.get(template_id);
  std::map<std::string, std::string> vars{
      {"query", query},
      {"actions", render_action_specs(space)},
      {"principles", principles ? "\nAction principles (check them before choosing an action):\n" +
                                      render_principles(*principles, space)
                                : std::string()},
  };

  auto build = [&](std::size_t skip) {
    std::string history;
    if (skip > 0) history += "(" + std::to_string(skip) + " " + std::string(kElisionMarker) + ")\n";
    std::vector<Step> tail(context.begin() + static_cast<std::ptrdiff_t>(skip), context.end());
    history += render_steps(tail, space, skip + 1);
    if (!history.empty()) history = "Previous steps:\n" + history;
    vars["history"] = history;
    return tpl.render(vars);
  };

  auto messages = build(0);
  if (history_char_budget == 0) return messages;
  for (std::size_t skip = 1; skip <= context.size(); ++skip) {
    if (render_transcript(messages).size() <= history_char_budget) break;
    messages = build(skip);
  }
  return messages;
}

// ---- execution -------------------------------------------------------------

Executor::Executor(ExecutorConfig cfg, ActionSpace full_space, TemplateLibrary templates)
    : cfg_(std::move(cfg)), space_(agent_action_space(full_space, cfg_.mode)),
      templates_(std::move(templates)) {
  check_action_space(space_);
  if (cfg_.max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

Trajectory Executor::run_episode(const std::string& query, Environment& env,
                                 const PrincipleSet* principles, Backend& backend) const {
  Trajectory t;
  t.query = query;
  t.terminated = Termination::max_steps;

  while (t.steps.size() < static_cast<std::size_t>(cfg_.max_steps)) {
    auto messages = render_prompt(query, t.steps, principles, space_, cfg_.mode, templates_,
                                  cfg_.template_id, cfg_.history_char_budget);
    std::optional<ActionCall> call;
    for (int attempt = 0; attempt <= cfg_.parse_retries; ++attempt) {
      std::string raw = backend.complete(messages);
      try {
        call = parse_action(raw, space_);
        break;
      } catch (const ParseError& e) {
        if (attempt == cfg_.parse_retries) {
          t.terminated = Termination::parse_failure;
          t.error = e.what();
          return t;
        }
        messages.push_back({Role::assistant, raw.empty() ? std::string("(empty)") : raw});
        messages.push_back({Role::user, std::string("Your last output could not be used (") + e.what() +
                                            "). Respond with exactly one action in the form "
                                            "action_name[arg1; arg2; ...]."});
      }
    }

    const ActionSpec& spec = *find_action(space_, call->action);
    if (spec.is_inner) {
      t.steps.push_back({std::move(*call), Observation::null()});
      if (spec.is_terminal) {
        t.terminated = Termination::finished;
        break;
      }
      continue;
    }
    Observation obs = env.step(*call);
    t.steps.push_back({std::move(*call), std::move(obs)});
    if (spec.is_terminal || env.done()) {
      t.terminated = Termination::finished;
      break;
    }
  }
  t.reward = env.reward();
  return t;
}

std::vector<Trajectory> Executor::run_batch(const std::vector<std::string>& queries,
                                            const EnvFactory& env_factory,
                                            const PrincipleSet* principles, Backend& backend) const {
  if (queries.empty()) throw std::invalid_argument("run_batch: queries must be non-empty");
  std::vector<Trajectory> out(queries.size());
  parallel_for(queries.size(), cfg_.workers, [&](std::size_t i) {
    try {
      auto env = env_factory(i);
      out[i] = run_episode(queries[i], *env, principles, backend);
    } catch (const InvalidPrincipleSet&) {
      throw;
    } catch (const std::exception& e) {
      out[i] = Trajectory{};
      out[i].query = queries[i];
      out[i].terminated = Termination::backend_error;
      out[i].error = e.what();
    }
  });
  return out;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const auto threads = static_cast<std::size_t>(std::clamp<long long>(workers, 1, static_cast<long long>(std::max<std::size_t>(n, 1))));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace pract
