#include "pract/rpo.hpp"

#include <cctype>

#include "pract/executor.hpp"
#include "pract/text.hpp"

namespace pract {

namespace {

bool is_indented(std::string_view line) {
  return !line.empty() && (line[0] == ' ' || line[0] == '\t');
}

// Strips list bullets and markdown emphasis around a leading action name.
std::string strip_decoration(std::string s) {
  if (s.rfind("- ", 0) == 0 || s.rfind("* ", 0) == 0) s = trim(std::string_view(s).substr(2));
  std::string out;
  out.reserve(s.size());
  auto colon = s.find(':');
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (colon != std::string::npos && i < colon && (s[i] == '*' || s[i] == '`')) continue;
    out.push_back(s[i]);
  }
  return out;
}

std::vector<Reflection> usable(const std::vector<Reflection>& rs) {
  std::vector<Reflection> out;
  for (const auto& r : rs) {
    if (!r.degenerate && !is_blank(r.text)) out.push_back(r);
  }
  return out;
}

}  // namespace

std::string_view to_string(RpoMethod m) { return m == RpoMethod::traj ? "traj" : "batch"; }

RpoMethod rpo_method_from(std::string_view s) {
  if (s == "traj") return RpoMethod::traj;
  if (s == "batch") return RpoMethod::batch;
  throw std::invalid_argument("unknown rpo method: " + std::string(s));
}

void to_json(json& j, const RpoConfig& c) {
  j = json{{"method", to_string(c.method)},
           {"max_principle_chars", c.max_principle_chars},
           {"opt_template_id", c.opt_template_id},
           {"summarize_template_id", c.summarize_template_id},
           {"concat_template_id", c.concat_template_id},
           {"workers", c.workers}};
}

void from_json(const json& j, RpoConfig& c) {
  c.method = rpo_method_from(j.value("method", std::string("batch")));
  c.max_principle_chars = j.value("max_principle_chars", std::size_t{1500});
  c.opt_template_id = j.value("opt_template_id", std::string("optimize"));
  c.summarize_template_id = j.value("summarize_template_id", std::string("summarize"));
  c.concat_template_id = j.value("concat_template_id", std::string("concat"));
  c.workers = j.value("workers", 1);
  if (c.max_principle_chars == 0) throw std::invalid_argument("max_principle_chars must be positive");
  if (c.method == RpoMethod::traj && c.summarize_template_id.empty())
    throw std::invalid_argument("traj method requires summarize_template_id");
  if (c.method == RpoMethod::batch && c.concat_template_id.empty())
    throw std::invalid_argument("batch method requires concat_template_id");
}

ParsedPrinciples parse_principles(const std::string& raw, const ActionSpace& space,
                                  std::size_t max_chars) {
  ParsedPrinciples out;
  std::string current;  // empty when continuation lines should be dropped
  std::map<std::string, std::string> texts;

  std::size_t pos = 0;
  while (pos <= raw.size()) {
    auto eol = raw.find('\n', pos);
    std::string line = raw.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    if (is_indented(line) && !is_blank(line)) {
      if (!current.empty()) texts[current] += " " + trim(line);
    } else if (!is_blank(line)) {
      std::string s = strip_decoration(trim(line));
      auto colon = s.find(':');
      std::string name = colon == std::string::npos ? "" : trim(std::string_view(s).substr(0, colon));
      bool looks_like_entry = !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
      });
      current.clear();
      if (looks_like_entry) {
        if (find_action(space, name)) {
          if (texts.count(name)) out.warnings.push_back("duplicate principle for " + name + "; last one kept");
          texts[name] = trim(std::string_view(s).substr(colon + 1));
          current = name;
        } else {
          out.warnings.push_back("ignored principle for unknown action \"" + name + "\"");
        }
      }
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }

  for (auto& [name, text] : texts) {
    std::string t = truncate_at_whitespace(trim(text), max_chars);
    if (!is_blank(t)) out.entries[name] = std::move(t);
  }
  return out;
}

PrincipleOptimizer::PrincipleOptimizer(RpoConfig cfg, ActionSpace space, TemplateLibrary templates)
    : cfg_(std::move(cfg)), space_(std::move(space)), templates_(std::move(templates)) {}

std::string PrincipleOptimizer::render_current(const PrincipleSet& principles) const {
  std::string out;
  for (const auto& a : space_) {
    auto it = principles.entries.find(a.name);
    if (it != principles.entries.end()) out += a.name + ": " + it->second.text + "\n";
  }
  return out;
}

std::vector<ChatMessage> PrincipleOptimizer::optimizer_prompt(const std::string& reflection_section,
                                                              const PrincipleSet& principles) const {
  return templates_.get(cfg_.opt_template_id)
      .render({{"actions", render_action_specs(space_)},
               {"principles", render_current(principles)},
               {"reflection", reflection_section}});
}

CandidatePrincipleSet PrincipleOptimizer::candidate_from(const std::string& raw,
                                                         const PrincipleSet& principles) const {
  CandidatePrincipleSet c;
  auto parsed = parse_principles(raw, space_, cfg_.max_principle_chars);
  c.warnings = std::move(parsed.warnings);
  for (const auto& [name, p] : principles.entries) c.entries[name] = p.text;
  for (auto& [name, text] : parsed.entries) {
    c.entries[name] = std::move(text);
    c.updated.insert(name);
  }
  c.no_update = c.updated.empty();
  return c;
}

CandidatePrincipleSet PrincipleOptimizer::optimize_one(const Reflection& r,
                                                       const PrincipleSet& principles,
                                                       Backend& backend) const {
  if (r.degenerate || is_blank(r.text))
    throw std::invalid_argument("optimize_one: degenerate reflection for " + r.query);
  auto candidate = candidate_from(backend.complete(optimizer_prompt(r.text, principles)), principles);
  candidate.source_query = r.query;
  return candidate;
}

std::string PrincipleOptimizer::concat_reflections(const std::vector<Reflection>& rs) const {
  const PromptTemplate item = templates_.get(cfg_.concat_template_id);
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    parts.push_back(item.fill({{"index", std::to_string(i + 1)}, {"query", rs[i].query}, {"reflection", rs[i].text}}));
  }
  return join(parts, "\n");
}

RpoResult PrincipleOptimizer::rpo_traj(const std::vector<Reflection>& rs,
                                       const PrincipleSet& principles, Backend& backend) const {
  if (auto v = validate_principle_set(principles, space_); !v.empty()) throw InvalidPrincipleSet(std::move(v));
  const auto qs = usable(rs);
  if (qs.empty()) throw NoUsableReflections();

  std::vector<CandidatePrincipleSet> candidates(qs.size());
  parallel_for(qs.size(), cfg_.workers,
               [&](std::size_t i) { candidates[i] = optimize_one(qs[i], principles, backend); });

  RpoResult result;
  result.used_reflections = qs.size();
  std::string listing;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    result.warnings.insert(result.warnings.end(), c.warnings.begin(), c.warnings.end());
    listing += "Candidate " + std::to_string(i + 1) + " (from task: " + c.source_query + "):\n";
    if (c.updated.empty()) listing += "(no changes proposed)\n";
    for (const auto& a : space_) {
      if (c.updated.count(a.name)) listing += a.name + ": " + c.entries.at(a.name) + "\n";
    }
    listing += "\n";
  }

  auto messages = templates_.get(cfg_.summarize_template_id)
                      .render({{"actions", render_action_specs(space_)},
                               {"principles", render_current(principles)},
                               {"candidates", listing}});
  auto merged = parse_principles(backend.complete(messages), space_, cfg_.max_principle_chars);
  result.warnings.insert(result.warnings.end(), merged.warnings.begin(), merged.warnings.end());

  if (merged.entries.empty()) {
    result.principles = principles.derive(Provenance::manual);
    result.no_update = true;
    result.warnings.push_back("summarizer output had no parseable principles; kept current set");
    return result;
  }
  result.principles = principles.derive(Provenance::rpo_traj);
  for (auto& [name, text] : merged.entries) result.principles.set(name, std::move(text));
  return result;
}

RpoResult PrincipleOptimizer::rpo_batch(const std::vector<Reflection>& rs,
                                        const PrincipleSet& principles, Backend& backend) const {
  if (auto v = validate_principle_set(principles, space_); !v.empty()) throw InvalidPrincipleSet(std::move(v));
  const auto qs = usable(rs);
  if (qs.empty()) throw NoUsableReflections();

  auto candidate = candidate_from(backend.complete(optimizer_prompt(concat_reflections(qs), principles)),
                                  principles);
  RpoResult result;
  result.used_reflections = qs.size();
  result.no_update = candidate.no_update;
  result.warnings = std::move(candidate.warnings);
  result.principles = principles.derive(Provenance::rpo_batch);
  for (auto& [name, text] : candidate.entries) result.principles.set(name, std::move(text));
  return result;
}

RpoResult PrincipleOptimizer::optimize(const std::vector<Reflection>& rs,
                                       const PrincipleSet& principles, Backend& backend) const {
  return cfg_.method == RpoMethod::traj ? rpo_traj(rs, principles, backend)
                                        : rpo_batch(rs, principles, backend);
}

}  // namespace pract
