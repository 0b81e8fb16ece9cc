#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pract/backend.hpp"

namespace pract {

/// Placeholder-substituted prompt template. Lines consisting solely of
/// "@system" or "@user" split the text into chat messages; without markers
/// the whole text becomes one user message.
class PromptTemplate {
 public:
  explicit PromptTemplate(std::string text) : text_(std::move(text)) {}

  const std::string& text() const { return text_; }

  /// Single-pass substitution of {name}; substituted values are not rescanned
  /// and unknown placeholders are left as written.
  std::string fill(const std::map<std::string, std::string>& vars) const;

  std::vector<ChatMessage> render(const std::map<std::string, std::string>& vars) const;

 private:
  std::string text_;
};

/// Template lookup by id: `<dir>/<id>.txt` when a directory is configured and
/// the file exists, else the built-in default.
class TemplateLibrary {
 public:
  TemplateLibrary() = default;
  explicit TemplateLibrary(std::optional<std::string> dir) : dir_(std::move(dir)) {}

  PromptTemplate get(const std::string& id) const;

  static const std::map<std::string, std::string>& builtin();

 private:
  std::optional<std::string> dir_;
};

}  // namespace pract
