#include "pract/backend.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include "httplib.h"
#include "pract/text.hpp"

namespace pract {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::string render_transcript(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) {
    out += "[";
    out += to_string(m.role);
    out += "]\n";
    out += m.content;
    out += "\n\n";
  }
  return out;
}

void BackendConfig::validate() const {
  if (temperature < 0) throw std::invalid_argument("backend temperature must be >= 0");
  if (max_output_tokens <= 0) throw std::invalid_argument("max_output_tokens must be positive");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (kind == BackendKind::http && (!endpoint_url || !model_name))
    throw std::invalid_argument("http backend requires endpoint_url and model_name");
  if (kind == BackendKind::scripted && !script_path)
    throw std::invalid_argument("scripted backend requires script_path");
}

void to_json(json& j, const BackendConfig& c) {
  j = json{{"kind", c.kind == BackendKind::http ? "http" : "scripted"},
           {"temperature", c.temperature},
           {"max_output_tokens", c.max_output_tokens},
           {"max_retries", c.max_retries},
           {"backoff_ms", c.backoff_ms},
           {"timeout_s", c.timeout_s}};
  if (c.endpoint_url) j["endpoint_url"] = *c.endpoint_url;
  if (c.model_name) j["model_name"] = *c.model_name;
  if (c.script_path) j["script_path"] = *c.script_path;
}

void from_json(const json& j, BackendConfig& c) {
  auto kind = j.at("kind").get<std::string>();
  if (kind == "http") {
    c.kind = BackendKind::http;
  } else if (kind == "scripted") {
    c.kind = BackendKind::scripted;
  } else {
    throw std::invalid_argument("unknown backend kind: " + kind);
  }
  if (j.contains("endpoint_url")) c.endpoint_url = j["endpoint_url"].get<std::string>();
  if (j.contains("model_name")) c.model_name = j["model_name"].get<std::string>();
  if (j.contains("script_path")) c.script_path = j["script_path"].get<std::string>();
  c.temperature = j.value("temperature", 0.0);
  c.max_output_tokens = j.value("max_output_tokens", 1024);
  c.max_retries = j.value("max_retries", 3);
  c.backoff_ms = j.value("backoff_ms", 500);
  c.timeout_s = j.value("timeout_s", 120);
  c.validate();
}

// ---- Backend -------------------------------------------------------------

std::string Backend::complete(const std::vector<ChatMessage>& messages) {
  if (messages.empty()) throw std::invalid_argument("complete: messages must be non-empty");
  calls_.fetch_add(1);
  {
    std::lock_guard lock(log_mu_);
    prompts_.push_back(render_transcript(messages));
  }
  return do_complete(messages);
}

std::vector<std::string> Backend::prompts() const {
  std::lock_guard lock(log_mu_);
  return prompts_;
}

void Backend::clear_prompts() {
  std::lock_guard lock(log_mu_);
  prompts_.clear();
}

// ---- Scripted --------------------------------------------------------------

void to_json(json& j, const ScriptRule& r) {
  j = json{{"match", r.match}, {"response", r.response}};
  if (r.pattern) j["pattern"] = *r.pattern;
  if (r.unless) j["unless"] = *r.unless;
  if (r.max_uses) j["max_uses"] = *r.max_uses;
}

void from_json(const json& j, ScriptRule& r) {
  r.match = j.value("match", std::string());
  r.response = j.at("response").get<std::string>();
  r.pattern.reset();
  r.unless.reset();
  r.max_uses.reset();
  if (j.contains("pattern")) r.pattern = j["pattern"].get<std::string>();
  if (j.contains("unless")) r.unless = j["unless"].get<std::string>();
  if (j.contains("max_uses")) {
    r.max_uses = j["max_uses"].get<int>();
    if (*r.max_uses <= 0) throw std::invalid_argument("max_uses must be positive");
  }
}

std::vector<ScriptRule> load_script(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
    return doc.at("rules").get<std::vector<ScriptRule>>();
  } catch (const json::exception& e) {
    throw std::runtime_error("script " + path + ": " + e.what());
  }
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptRule> rules)
    : rules_(std::move(rules)), uses_(rules_.size(), 0) {
  compiled_.reserve(rules_.size());
  for (const auto& r : rules_) {
    if (r.pattern) {
      compiled_.emplace_back(std::regex(*r.pattern, std::regex::ECMAScript));
    } else {
      compiled_.emplace_back(std::nullopt);
    }
  }
}

std::string ScriptedBackend::do_complete(const std::vector<ChatMessage>& messages) {
  const std::string prompt = render_transcript(messages);
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& rule = rules_[i];
    if (rule.max_uses && uses_[i] >= *rule.max_uses) continue;
    if (!rule.match.empty() && prompt.find(rule.match) == std::string::npos) continue;
    if (rule.unless && prompt.find(*rule.unless) != std::string::npos) continue;
    std::string response = rule.response;
    if (compiled_[i]) {
      std::smatch m;
      if (!std::regex_search(prompt, m, *compiled_[i])) continue;
      response = m.format(rule.response);
    }
    ++uses_[i];
    return response;
  }
  throw NoScriptMatch(prompt);
}

// ---- HTTP ----------------------------------------------------------------

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint_url needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpBackend::HttpBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.kind != BackendKind::http) throw std::invalid_argument("HttpBackend needs kind=http");
  std::tie(scheme_host_port_, path_) = split_url(*cfg_.endpoint_url);
}

json HttpBackend::request_body(const BackendConfig& cfg, const std::vector<ChatMessage>& messages) {
  json msgs = json::array();
  for (const auto& m : messages) {
    msgs.push_back(json{{"role", to_string(m.role)}, {"content", m.content}});
  }
  return json{{"model", cfg.model_name.value_or("")},
              {"messages", msgs},
              {"temperature", cfg.temperature},
              {"max_tokens", cfg.max_output_tokens}};
}

std::string HttpBackend::extract_completion(const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw std::runtime_error("response body is not JSON");
  try {
    const auto& choice = doc.at("choices").at(0);
    if (choice.contains("message")) return choice.at("message").at("content").get<std::string>();
    return choice.at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed completion response: ") + e.what());
  }
}

std::string HttpBackend::do_complete(const std::vector<ChatMessage>& messages) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(cfg_.timeout_s, 0);
  client.set_read_timeout(cfg_.timeout_s, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv(kApiKeyEnv); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string body = request_body(cfg_, messages).dump();

  std::string last_error;
  int last_status = 0;
  const int attempts = cfg_.max_retries + 1;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      auto delay = std::chrono::milliseconds(static_cast<long long>(cfg_.backoff_ms) << (attempt - 2));
      std::this_thread::sleep_for(delay);
    }
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "network error: " + httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP status " + std::to_string(res->status);
      if (!retryable(res->status)) throw BackendError(last_error, attempt, res->status);
      continue;
    }
    try {
      return extract_completion(res->body);
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw BackendError(last_error + " (after " + std::to_string(attempts) + " attempts)", attempts,
                     last_status);
}

std::unique_ptr<Backend> make_backend(const BackendConfig& cfg) {
  cfg.validate();
  if (cfg.kind == BackendKind::http) return std::make_unique<HttpBackend>(cfg);
  return std::make_unique<ScriptedBackend>(load_script(*cfg.script_path));
}

}  // namespace pract
