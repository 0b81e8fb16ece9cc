#include <gtest/gtest.h>

#include <filesystem>

#include "pract/templates.hpp"
#include "pract/text.hpp"
#include "test_util.hpp"

using namespace pract;

TEST(PromptTemplate, FillSubstitutesKnownPlaceholders) {
  PromptTemplate t("Hello {name}, {unknown} stays; {name} again");
  EXPECT_EQ(t.fill({{"name", "Ada"}}), "Hello Ada, {unknown} stays; Ada again");
}

TEST(PromptTemplate, FillIsSinglePass) {
  PromptTemplate t("{a}");
  EXPECT_EQ(t.fill({{"a", "{b}"}, {"b", "no"}}), "{b}");
}

TEST(PromptTemplate, RenderSplitsRoles) {
  PromptTemplate t("@system\nYou are {who}.\n@user\nTask: {q}\n");
  auto msgs = t.render({{"who", "an agent"}, {"q", "x"}});
  ASSERT_EQ(msgs.size(), 2u);
  EXPECT_EQ(msgs[0].role, Role::system);
  EXPECT_EQ(msgs[0].content, "You are an agent.");
  EXPECT_EQ(msgs[1].role, Role::user);
  EXPECT_EQ(msgs[1].content, "Task: x");
}

TEST(PromptTemplate, SubstitutedMarkersDoNotSplit) {
  PromptTemplate t("@user\n{q}");
  auto msgs = t.render({{"q", "a\n@system\nb"}});
  ASSERT_EQ(msgs.size(), 1u);
  EXPECT_EQ(msgs[0].content, "a\n@system\nb");
}

TEST(PromptTemplate, EmptySectionsDropped) {
  PromptTemplate t("@system\n{s}\n@user\nu");
  auto msgs = t.render({{"s", ""}});
  ASSERT_EQ(msgs.size(), 1u);
  EXPECT_EQ(msgs[0].role, Role::user);
}

TEST(TemplateLibrary, BuiltinsMatchShippedFiles) {
  const std::filesystem::path dir = std::filesystem::path(PRACT_SOURCE_DIR) / "templates";
  const auto& builtin = TemplateLibrary::builtin();
  for (const char* id : {"executor", "reflect", "optimize", "summarize", "concat"}) {
    ASSERT_TRUE(builtin.count(id)) << id;
    EXPECT_EQ(builtin.at(id), read_file((dir / (std::string(id) + ".txt")).string())) << id;
  }
}

TEST(TemplateLibrary, DirectoryOverridesBuiltin) {
  auto dir = pract::testing::temp_dir("templates");
  write_file((dir / "reflect.txt").string(), "@user\ncustom {query}");
  TemplateLibrary lib(dir.string());
  EXPECT_EQ(lib.get("reflect").text(), "@user\ncustom {query}");
  EXPECT_EQ(lib.get("executor").text(), TemplateLibrary::builtin().at("executor"));
  EXPECT_THROW(lib.get("nope"), std::invalid_argument);
}
