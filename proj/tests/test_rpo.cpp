#include <gtest/gtest.h>

#include "pract/rpo.hpp"
#include "test_util.hpp"

using namespace pract;
using namespace pract::testing;

namespace {

PrincipleSet current() {
  PrincipleSet p;
  p.set("search", "search with the task keywords");
  p.set("click", "click the first result");
  p.version = 2;
  p.parent_version = 1;
  p.provenance = Provenance::rpo_batch;
  return p;
}

Reflection reflection(const std::string& query, const std::string& text) {
  Reflection r;
  r.query = query;
  r.trajectory_id = "t-" + query;
  r.text = text;
  r.degenerate = is_blank(text);
  return r;
}

std::vector<Reflection> reflections(std::size_t n) {
  std::vector<Reflection> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(reflection("task" + std::to_string(i), "critique " + std::to_string(i)));
  return out;
}

PrincipleOptimizer optimizer(RpoMethod method, int workers = 1) {
  RpoConfig cfg;
  cfg.method = method;
  cfg.workers = workers;
  return PrincipleOptimizer(cfg, bare_search_click());
}

}  // namespace

TEST(ParsePrinciples, TwoLines) {
  auto r = parse_principles("search: always include color and size\nclick: only click items matching all attributes",
                            bare_search_click(), 1500);
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries.at("search"), "always include color and size");
  EXPECT_EQ(r.entries.at("click"), "only click items matching all attributes");
  EXPECT_TRUE(r.warnings.empty());
}

TEST(ParsePrinciples, UnknownActionWarns) {
  auto r = parse_principles("buy: buy right away", bare_search_click(), 1500);
  EXPECT_TRUE(r.entries.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("buy"), std::string::npos);
}

TEST(ParsePrinciples, TruncatesAtWhitespace) {
  std::string text = "search:";
  for (int i = 0; i < 100; ++i) text += " word" + std::to_string(i);
  auto r = parse_principles(text, bare_search_click(), 50);
  const auto& s = r.entries.at("search");
  EXPECT_LE(s.size(), 50u);
  EXPECT_NE(s.back(), ' ');
  EXPECT_EQ(text.find(s), 8u);  // a prefix of the original text
  EXPECT_TRUE(text[8 + s.size()] == ' ');
}

TEST(ParsePrinciples, ContinuationBulletsAndMarkup) {
  auto r = parse_principles("Here are the principles:\n- **search**: use exact words\n  and the color\n"
                            "* `click`: pick matching items\nbuy: nope\n  continuation of nope\n",
                            bare_search_click(), 1500);
  EXPECT_EQ(r.entries.at("search"), "use exact words and the color");
  EXPECT_EQ(r.entries.at("click"), "pick matching items");
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(ParsePrinciples, DuplicateKeepsLast) {
  auto r = parse_principles("search: a\nsearch: b", bare_search_click(), 1500);
  EXPECT_EQ(r.entries.at("search"), "b");
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(OptimizeOne, PartialUpdateKeepsOtherEntries) {
  ScriptedBackend b({rule("", "search: refine query when results lack required attributes")});
  auto c = optimizer(RpoMethod::traj).optimize_one(reflection("q", "too broad"), current(), b);
  EXPECT_EQ(c.entries.at("search"), "refine query when results lack required attributes");
  EXPECT_EQ(c.entries.at("click"), "click the first result");
  EXPECT_EQ(c.updated, std::set<std::string>{"search"});
  EXPECT_FALSE(c.no_update);
  EXPECT_EQ(c.source_query, "q");
}

TEST(OptimizeOne, GarbageGivesNoUpdate) {
  ScriptedBackend b({rule("", "I cannot help with that!!")});
  auto c = optimizer(RpoMethod::traj).optimize_one(reflection("q", "x"), current(), b);
  EXPECT_TRUE(c.no_update);
  EXPECT_EQ(c.entries.at("search"), current().text("search"));
  EXPECT_EQ(c.entries.at("click"), current().text("click"));
}

TEST(OptimizeOne, DegenerateReflectionRejected) {
  ScriptedBackend b({rule("", "search: x")});
  EXPECT_THROW(optimizer(RpoMethod::traj).optimize_one(reflection("q", " "), current(), b), std::invalid_argument);
  EXPECT_EQ(b.call_count(), 0u);
}

TEST(OptimizeOne, PromptCarriesReflectionAndPrinciples) {
  ScriptedBackend b({rule("", "search: x")});
  optimizer(RpoMethod::traj).optimize_one(reflection("q", "UNIQUE-CRITIQUE"), current(), b);
  const auto prompt = b.prompts().at(0);
  EXPECT_NE(prompt.find("UNIQUE-CRITIQUE"), std::string::npos);
  EXPECT_NE(prompt.find("search with the task keywords"), std::string::npos);
  EXPECT_NE(prompt.find("click the first result"), std::string::npos);
}

class CallCountLaw : public ::testing::TestWithParam<std::size_t> {};

TEST_P(CallCountLaw, TrajUsesQPlusOneBatchUsesOne) {
  const std::size_t q = GetParam();
  ScriptedBackend traj_backend({rule("Proposed revisions", "search: merged"), rule("", "search: candidate")});
  auto r = optimizer(RpoMethod::traj, 2).rpo_traj(reflections(q), current(), traj_backend);
  EXPECT_EQ(traj_backend.call_count(), q + 1);
  EXPECT_EQ(r.used_reflections, q);

  ScriptedBackend batch_backend({rule("", "search: batched")});
  auto rb = optimizer(RpoMethod::batch).rpo_batch(reflections(q), current(), batch_backend);
  EXPECT_EQ(batch_backend.call_count(), 1u);
  EXPECT_EQ(rb.used_reflections, q);
}

INSTANTIATE_TEST_SUITE_P(Sizes, CallCountLaw, ::testing::Values(1, 2, 4, 8));

TEST(RpoTraj, DegenerateReflectionsExcludedFromQ) {
  auto rs = reflections(4);
  rs.push_back(reflection("empty", ""));
  ScriptedBackend b({rule("Proposed revisions", "search: merged"), rule("", "search: candidate")});
  auto r = optimizer(RpoMethod::traj).rpo_traj(rs, current(), b);
  EXPECT_EQ(b.call_count(), 5u);
  EXPECT_EQ(r.used_reflections, 4u);
}

TEST(RpoTraj, SingleCandidateEchoedBySummarizer) {
  ScriptedBackend b({pattern_rule("Proposed revisions", "(search: refine[^\\n]*)", "$1"),
                     rule("", "search: refine queries with colors")});
  auto r = optimizer(RpoMethod::traj).rpo_traj(reflections(1), current(), b);
  EXPECT_EQ(r.principles.text("search"), "refine queries with colors");
  EXPECT_EQ(r.principles.text("click"), "click the first result");
  EXPECT_EQ(r.principles.version, 3);
  EXPECT_EQ(r.principles.parent_version, 2);
  EXPECT_EQ(r.principles.provenance, Provenance::rpo_traj);
  EXPECT_FALSE(r.no_update);
}

TEST(RpoTraj, SummarizerSeesEveryCandidate) {
  ScriptedBackend b({rule("Proposed revisions", "click: merged"),
                     pattern_rule("", "critique (\\d)", "search: candidate $1")});
  optimizer(RpoMethod::traj).rpo_traj(reflections(3), current(), b);
  const auto prompts = b.prompts();
  const auto& summary = prompts.back();
  for (int i = 0; i < 3; ++i) EXPECT_NE(summary.find("search: candidate " + std::to_string(i)), std::string::npos);
}

TEST(RpoTraj, UnparseableSummaryKeepsCurrent) {
  ScriptedBackend b({rule("Proposed revisions", "???"), rule("", "search: candidate")});
  auto r = optimizer(RpoMethod::traj).rpo_traj(reflections(2), current(), b);
  EXPECT_TRUE(r.no_update);
  EXPECT_EQ(r.principles.provenance, Provenance::manual);
  EXPECT_EQ(r.principles.entries, current().entries);
  EXPECT_EQ(r.principles.version, 3);
}

TEST(RpoTraj, AllDegenerateRejected) {
  ScriptedBackend b({rule("", "search: x")});
  std::vector<Reflection> rs{reflection("a", ""), reflection("b", " \n")};
  EXPECT_THROW(optimizer(RpoMethod::traj).rpo_traj(rs, current(), b), NoUsableReflections);
  EXPECT_THROW(optimizer(RpoMethod::batch).rpo_batch(rs, current(), b), NoUsableReflections);
  EXPECT_EQ(b.call_count(), 0u);
}

TEST(RpoBatch, FullSetReplacesAllEntries) {
  ScriptedBackend b({rule("", "search: new search\nclick: new click")});
  auto r = optimizer(RpoMethod::batch).rpo_batch(reflections(4), current(), b);
  EXPECT_EQ(r.principles.text("search"), "new search");
  EXPECT_EQ(r.principles.text("click"), "new click");
  EXPECT_EQ(r.principles.provenance, Provenance::rpo_batch);
  EXPECT_EQ(r.principles.version, 3);
}

TEST(RpoBatch, PromptConcatenatesReflectionsInOrder) {
  ScriptedBackend b({rule("", "search: x")});
  optimizer(RpoMethod::batch).rpo_batch(reflections(3), current(), b);
  const auto p = b.prompts().at(0);
  auto a = p.find("critique 0"), c = p.find("critique 1"), d = p.find("critique 2");
  ASSERT_NE(a, std::string::npos);
  EXPECT_LT(a, c);
  EXPECT_LT(c, d);
  EXPECT_NE(p.find("task1"), std::string::npos);
}

TEST(Rpo, RejectsInvalidPrinciples) {
  ScriptedBackend b({rule("", "search: x")});
  PrincipleSet bad;
  bad.set("search", "only search");
  EXPECT_THROW(optimizer(RpoMethod::batch).rpo_batch(reflections(1), bad, b), InvalidPrincipleSet);
}

TEST(RpoConfig, JsonRoundTrip) {
  RpoConfig c;
  c.method = RpoMethod::traj;
  c.max_principle_chars = 321;
  auto back = json(c).get<RpoConfig>();
  EXPECT_EQ(back.method, RpoMethod::traj);
  EXPECT_EQ(back.max_principle_chars, 321u);
  EXPECT_THROW(json({{"method", "batch"}, {"max_principle_chars", 0}}).get<RpoConfig>(), std::invalid_argument);
}
