#include "pract/reflection.hpp"

#include "pract/executor.hpp"
#include "pract/text.hpp"

namespace pract {

void to_json(json& j, const ReflectorConfig& c) {
  j = json{{"mode", to_string(c.mode)},
           {"template_id", c.template_id},
           {"max_reflection_chars", c.max_reflection_chars},
           {"workers", c.workers}};
}

void from_json(const json& j, ReflectorConfig& c) {
  c.mode = reflection_mode_from(j.value("mode", std::string("self")));
  c.template_id = j.value("template_id", std::string("reflect"));
  c.max_reflection_chars = j.value("max_reflection_chars", std::size_t{4000});
  c.workers = j.value("workers", 1);
  if (c.max_reflection_chars == 0) throw std::invalid_argument("max_reflection_chars must be positive");
}

Reflector::Reflector(ReflectorConfig cfg, ActionSpace space, TemplateLibrary templates)
    : cfg_(std::move(cfg)), space_(std::move(space)), templates_(std::move(templates)) {}

std::vector<ChatMessage> Reflector::render_prompt(const Trajectory& t,
                                                  const PrincipleSet& principles) const {
  std::string reward;
  if (cfg_.mode == ReflectionMode::reward) {
    if (!t.reward) throw MissingReward(t.query);
    reward = "\nReward: " + format_fixed(*t.reward, 4) + " (scale 0 to 1)\n";
  }
  std::string trajectory = render_steps(t.steps, space_);
  if (trajectory.empty()) trajectory = "(no actions were taken)\n";
  trajectory += "Outcome: " + std::string(to_string(t.terminated)) + "\n";

  return templates_.get(cfg_.template_id)
      .render({{"query", t.query},
               {"principles", render_principles(principles, space_)},
               {"trajectory", trajectory},
               {"reward", reward}});
}

Reflection Reflector::reflect(const Trajectory& t, const PrincipleSet& principles,
                              Backend& backend) const {
  auto messages = render_prompt(t, principles);
  std::string text = truncate_utf8(backend.complete(messages), cfg_.max_reflection_chars);

  Reflection r;
  r.query = t.query;
  r.trajectory_id = t.id;
  r.degenerate = is_blank(text);
  r.text = std::move(text);
  r.mode = cfg_.mode;
  if (cfg_.mode == ReflectionMode::reward) r.reward = t.reward;
  return r;
}

std::vector<ReflectionOutcome> Reflector::reflect_all(const std::vector<Trajectory>& ts,
                                                      const PrincipleSet& principles,
                                                      Backend& backend) const {
  if (ts.empty()) throw std::invalid_argument("reflect_all: no trajectories");
  std::vector<ReflectionOutcome> out(ts.size());
  parallel_for(ts.size(), cfg_.workers, [&](std::size_t i) {
    try {
      out[i].reflection = reflect(ts[i], principles, backend);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

}  // namespace pract
