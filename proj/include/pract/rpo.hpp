#pragma once

// Reflective principle optimization. Two update rules turn a batch of
// reflections into the next PrincipleSet version:
//
//   traj:  one optimizer call per reflection, producing a candidate set, then
//          one summarizer call merging all candidates  (|Q| + 1 calls)
//   batch: one optimizer call over all reflections concatenated  (1 call)
//
// Degenerate reflections are dropped before counting |Q|.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pract/backend.hpp"
#include "pract/core.hpp"
#include "pract/templates.hpp"

namespace pract {

enum class RpoMethod { traj, batch };

std::string_view to_string(RpoMethod m);
RpoMethod rpo_method_from(std::string_view s);

struct RpoConfig {
  RpoMethod method = RpoMethod::batch;
  std::size_t max_principle_chars = 1500;
  std::string opt_template_id = "optimize";
  std::string summarize_template_id = "summarize";
  std::string concat_template_id = "concat";
  int workers = 1;
};

void to_json(json& j, const RpoConfig& c);
void from_json(const json& j, RpoConfig& c);

class NoUsableReflections : public std::invalid_argument {
 public:
  NoUsableReflections() : std::invalid_argument("no non-degenerate reflections to optimize from") {}
};

struct ParsedPrinciples {
  std::map<std::string, std::string> entries;
  std::vector<std::string> warnings;
};

/// Line grammar "action_name: text"; indented lines continue the previous
/// entry. Unknown actions are skipped with a warning; texts are capped at
/// `max_chars` on a whitespace boundary.
ParsedPrinciples parse_principles(const std::string& raw, const ActionSpace& space,
                                  std::size_t max_chars);

struct CandidatePrincipleSet {
  std::map<std::string, std::string> entries;  // complete: unparsed actions keep current text
  std::set<std::string> updated;               // actions the optimizer actually rewrote
  std::string source_query;
  bool no_update = false;
  std::vector<std::string> warnings;
};

struct RpoResult {
  PrincipleSet principles;
  bool no_update = false;
  std::size_t used_reflections = 0;  // |Q|
  std::vector<std::string> warnings;
};

class PrincipleOptimizer {
 public:
  PrincipleOptimizer(RpoConfig cfg, ActionSpace space, TemplateLibrary templates = {});

  const RpoConfig& config() const { return cfg_; }

  /// Requires a non-degenerate reflection.
  CandidatePrincipleSet optimize_one(const Reflection& r, const PrincipleSet& principles,
                                     Backend& backend) const;

  RpoResult rpo_traj(const std::vector<Reflection>& rs, const PrincipleSet& principles,
                     Backend& backend) const;
  RpoResult rpo_batch(const std::vector<Reflection>& rs, const PrincipleSet& principles,
                      Backend& backend) const;

  /// Dispatches on config().method.
  RpoResult optimize(const std::vector<Reflection>& rs, const PrincipleSet& principles,
                     Backend& backend) const;

  /// The reflection section passed to the optimizer in batch mode.
  std::string concat_reflections(const std::vector<Reflection>& rs) const;

 private:
  std::vector<ChatMessage> optimizer_prompt(const std::string& reflection_section,
                                            const PrincipleSet& principles) const;
  CandidatePrincipleSet candidate_from(const std::string& raw, const PrincipleSet& principles) const;
  std::string render_current(const PrincipleSet& principles) const;

  RpoConfig cfg_;
  ActionSpace space_;
  TemplateLibrary templates_;
};

}  // namespace pract
