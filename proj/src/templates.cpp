#include "pract/templates.hpp"

#include <filesystem>
#include <stdexcept>

#include "pract/text.hpp"

namespace pract {

namespace detail {
const std::map<std::string, std::string>& builtin_template_sources();
}

std::string PromptTemplate::fill(const std::map<std::string, std::string>& vars) const {
  std::string out;
  out.reserve(text_.size());
  std::size_t i = 0;
  while (i < text_.size()) {
    if (text_[i] == '{') {
      auto close = text_.find('}', i + 1);
      if (close != std::string::npos) {
        auto it = vars.find(text_.substr(i + 1, close - i - 1));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(text_[i++]);
  }
  return out;
}

std::vector<ChatMessage> PromptTemplate::render(
    const std::map<std::string, std::string>& vars) const {
  // Split the raw template on role markers first so substituted values can
  // never introduce a role boundary.
  std::vector<std::pair<Role, std::string>> sections;
  std::size_t pos = 0;
  while (pos <= text_.size()) {
    auto eol = text_.find('\n', pos);
    std::string line = text_.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    std::string marker = trim(line);
    if (marker == "@system" || marker == "@user") {
      sections.emplace_back(marker == "@system" ? Role::system : Role::user, "");
    } else {
      if (sections.empty()) sections.emplace_back(Role::user, "");
      sections.back().second += line;
      if (eol != std::string::npos) sections.back().second += "\n";
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }

  std::vector<ChatMessage> messages;
  for (auto& [role, body] : sections) {
    std::string content = trim(PromptTemplate(body).fill(vars));
    if (!content.empty()) messages.push_back({role, std::move(content)});
  }
  if (messages.empty()) throw std::invalid_argument("template rendered to an empty prompt");
  return messages;
}

const std::map<std::string, std::string>& TemplateLibrary::builtin() {
  return detail::builtin_template_sources();
}

PromptTemplate TemplateLibrary::get(const std::string& id) const {
  if (dir_) {
    auto path = std::filesystem::path(*dir_) / (id + ".txt");
    if (std::filesystem::exists(path)) return PromptTemplate(read_file(path.string()));
  }
  const auto& b = builtin();
  auto it = b.find(id);
  if (it == b.end()) throw std::invalid_argument("unknown template id: " + id);
  return PromptTemplate(it->second);
}

}  // namespace pract
