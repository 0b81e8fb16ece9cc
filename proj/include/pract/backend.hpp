#pragma once

// Text-generation backends. Every LLM call (executor, reflector, optimizer,
// summarizer) goes through Backend::complete, which also keeps an exact call
// counter per instance.

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

#include "pract/core.hpp"

namespace pract {

enum class Role { system, user, assistant };

std::string_view to_string(Role r);

struct ChatMessage {
  Role role = Role::user;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

/// Flattens messages into the text scripted rules are matched against.
std::string render_transcript(const std::vector<ChatMessage>& messages);

enum class BackendKind { http, scripted };

struct BackendConfig {
  BackendKind kind = BackendKind::scripted;
  std::optional<std::string> endpoint_url;
  std::optional<std::string> model_name;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::optional<std::string> script_path;
  int max_retries = 3;
  int backoff_ms = 500;  // first retry delay; doubles per attempt
  int timeout_s = 120;

  /// Throws std::invalid_argument when required fields for `kind` are missing.
  void validate() const;
};

void to_json(json& j, const BackendConfig& c);
/// Relative script paths are resolved against `base_dir` by load helpers.
void from_json(const json& j, BackendConfig& c);

class BackendError : public std::runtime_error {
 public:
  BackendError(const std::string& what, int attempts, int status = 0)
      : std::runtime_error(what), attempts_(attempts), status_(status) {}
  int attempts() const { return attempts_; }
  int status() const { return status_; }

 private:
  int attempts_;
  int status_;
};

class NoScriptMatch : public std::runtime_error {
 public:
  explicit NoScriptMatch(std::string prompt)
      : std::runtime_error("no script rule matches the prompt:\n" + prompt),
        prompt_(std::move(prompt)) {}
  const std::string& prompt() const { return prompt_; }

 private:
  std::string prompt_;
};

class Backend {
 public:
  virtual ~Backend() = default;

  /// Thread-safe. Never mutates `messages`.
  std::string complete(const std::vector<ChatMessage>& messages);

  std::size_t call_count() const { return calls_.load(); }

  /// Transcripts of every call in completion order.
  std::vector<std::string> prompts() const;
  void clear_prompts();

 protected:
  virtual std::string do_complete(const std::vector<ChatMessage>& messages) = 0;

 private:
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex log_mu_;
  std::vector<std::string> prompts_;
};

struct ScriptRule {
  std::string match;                 // substring that must appear
  std::optional<std::string> pattern;  // ECMAScript regex that must be found
  std::optional<std::string> unless;   // substring that must NOT appear
  std::string response;              // may reference $1.. captures of `pattern`
  std::optional<int> max_uses;

  bool operator==(const ScriptRule&) const = default;
};

void to_json(json& j, const ScriptRule& r);
void from_json(const json& j, ScriptRule& r);

std::vector<ScriptRule> load_script(const std::string& path);

/// Deterministic backend: the first non-exhausted rule matching the rendered
/// transcript wins.
class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::vector<ScriptRule> rules);

  const std::vector<ScriptRule>& rules() const { return rules_; }

 protected:
  std::string do_complete(const std::vector<ChatMessage>& messages) override;

 private:
  std::vector<ScriptRule> rules_;
  std::vector<std::optional<std::regex>> compiled_;
  std::mutex mu_;
  std::vector<int> uses_;
};

/// Chat-completion client: POST {model, messages, temperature, max_tokens},
/// reads choices[0].message.content. Bearer token from PRACT_API_KEY.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(BackendConfig cfg);

  static constexpr const char* kApiKeyEnv = "PRACT_API_KEY";

  static json request_body(const BackendConfig& cfg, const std::vector<ChatMessage>& messages);
  /// Throws std::runtime_error when the body has no first-choice text.
  static std::string extract_completion(const std::string& body);

 protected:
  std::string do_complete(const std::vector<ChatMessage>& messages) override;

 private:
  BackendConfig cfg_;
  std::string scheme_host_port_;
  std::string path_;
};

std::unique_ptr<Backend> make_backend(const BackendConfig& cfg);

}  // namespace pract
