#include <gtest/gtest.h>

#include "pract/executor.hpp"
#include "pract/reflection.hpp"
#include "test_util.hpp"

using namespace pract;
using namespace pract::testing;

namespace {

ActionSpace space() { return agent_action_space(search_click_space(), AgentMode::pract); }

Trajectory sample(std::optional<double> reward) {
  Trajectory t;
  t.id = "t1";
  t.query = "buy a red dress";
  t.steps.push_back({ActionCall{"search", {{"query", "red dress"}}, "search[red dress]"}, Observation::of("2 results")});
  t.steps.push_back({ActionCall{"finish", {}, "finish[]"}, Observation::null()});
  t.reward = reward;
  return t;
}

Reflector reflector(ReflectionMode mode, int workers = 1) {
  ReflectorConfig cfg;
  cfg.mode = mode;
  cfg.workers = workers;
  return Reflector(cfg, space());
}

}  // namespace

TEST(Reflect, RewardModeInjectsFourDecimalReward) {
  ScriptedBackend b({rule("0.5000", "Search was too broad.")});
  auto p = seed_principles(space());
  auto r = reflector(ReflectionMode::reward).reflect(sample(0.5), p, b);
  EXPECT_EQ(r.text, "Search was too broad.");
  EXPECT_EQ(r.mode, ReflectionMode::reward);
  EXPECT_EQ(r.reward, 0.5);
  EXPECT_EQ(r.trajectory_id, "t1");
  EXPECT_EQ(r.query, "buy a red dress");
  EXPECT_FALSE(r.degenerate);
}

TEST(Reflect, SelfModeHidesReward) {
  auto p = seed_principles(space());
  auto msgs = reflector(ReflectionMode::self).render_prompt(sample(0.5), p);
  auto text = render_transcript(msgs);
  EXPECT_EQ(text.find("0.5000"), std::string::npos);
  EXPECT_EQ(text.find("0.5"), std::string::npos);
  EXPECT_EQ(text.find("Reward"), std::string::npos);
  EXPECT_EQ(text.find("reward"), std::string::npos);

  ScriptedBackend b({rule("", "fine")});
  auto r = reflector(ReflectionMode::self).reflect(sample(0.5), p, b);
  EXPECT_FALSE(r.reward.has_value());
}

TEST(Reflect, PromptCarriesTrajectoryAndPrinciples) {
  auto p = seed_principles(space());
  auto text = render_transcript(reflector(ReflectionMode::reward).render_prompt(sample(1.0), p));
  EXPECT_NE(text.find("Action 1: search[red dress]"), std::string::npos);
  EXPECT_NE(text.find("Observation 1: 2 results"), std::string::npos);
  EXPECT_NE(text.find("Observation 2: OK."), std::string::npos);
  EXPECT_NE(text.find("1.0000"), std::string::npos);
  for (const auto& [name, pr] : p.entries) EXPECT_NE(text.find(pr.text), std::string::npos);
}

TEST(Reflect, RewardModeNeedsReward) {
  ScriptedBackend b({rule("", "x")});
  auto p = seed_principles(space());
  EXPECT_THROW(reflector(ReflectionMode::reward).reflect(sample(std::nullopt), p, b), MissingReward);
  EXPECT_EQ(b.call_count(), 0u);
}

TEST(Reflect, EmptyCritiqueIsDegenerate) {
  ScriptedBackend b({rule("", "  \n")});
  auto p = seed_principles(space());
  auto r = reflector(ReflectionMode::self).reflect(sample(0.0), p, b);
  EXPECT_TRUE(r.degenerate);
}

TEST(Reflect, LongCritiqueTruncated) {
  ScriptedBackend b({rule("", std::string(10000, 'x'))});
  auto p = seed_principles(space());
  ReflectorConfig cfg;
  cfg.max_reflection_chars = 100;
  auto r = Reflector(cfg, space()).reflect(sample(0.0), p, b);
  EXPECT_EQ(r.text.size(), 100u);
}

TEST(ReflectAll, OneCallEach) {
  ScriptedBackend b({rule("", "critique")});
  auto p = seed_principles(space());
  std::vector<Trajectory> ts(4, sample(0.25));
  auto out = reflector(ReflectionMode::reward, 2).reflect_all(ts, p, b);
  ASSERT_EQ(out.size(), 4u);
  for (const auto& o : out) EXPECT_TRUE(o.ok());
  EXPECT_EQ(b.call_count(), 4u);
}

TEST(ReflectAll, MixedBatchIsolatesFailures) {
  ScriptedBackend b({rule("", "critique")});
  auto p = seed_principles(space());
  std::vector<Trajectory> ts{sample(1.0), sample(std::nullopt), sample(0.0), sample(std::nullopt)};
  auto out = reflector(ReflectionMode::reward).reflect_all(ts, p, b);
  EXPECT_TRUE(out[0].ok());
  EXPECT_FALSE(out[1].ok());
  EXPECT_FALSE(out[1].error.empty());
  EXPECT_TRUE(out[2].ok());
  EXPECT_FALSE(out[3].ok());
  EXPECT_EQ(b.call_count(), 2u);
}

TEST(ReflectorConfig, JsonRoundTrip) {
  ReflectorConfig c;
  c.mode = ReflectionMode::reward;
  c.max_reflection_chars = 77;
  auto back = json(c).get<ReflectorConfig>();
  EXPECT_EQ(back.mode, ReflectionMode::reward);
  EXPECT_EQ(back.max_reflection_chars, 77u);
}
