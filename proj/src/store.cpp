#include "pract/store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "pract/text.hpp"

namespace fs = std::filesystem;

namespace pract {

namespace {

void append_lines(const std::string& path, const std::vector<std::string>& lines) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + path);
  for (const auto& l : lines) out << l << '\n';
}

template <typename T, typename Parse>
std::vector<T> read_lines(const std::string& path, Parse parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<T> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (is_blank(line)) continue;
    try {
      out.push_back(parse(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

void append_trajectories(const std::string& path, const std::vector<Trajectory>& ts) {
  std::vector<std::string> lines;
  for (const auto& t : ts) lines.push_back(serialize_trajectory(t));
  append_lines(path, lines);
}

std::vector<Trajectory> read_trajectories(const std::string& path) {
  return read_lines<Trajectory>(path, [](const std::string& l) { return deserialize_trajectory(l); });
}

void append_reflections(const std::string& path, const std::vector<Reflection>& rs) {
  std::vector<std::string> lines;
  for (const auto& r : rs) lines.push_back(serialize_reflection(r));
  append_lines(path, lines);
}

std::vector<Reflection> read_reflections(const std::string& path) {
  return read_lines<Reflection>(path, [](const std::string& l) { return deserialize_reflection(l); });
}

PrincipleStore::PrincipleStore(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

std::string PrincipleStore::path_for(int version) const {
  std::string n = std::to_string(version);
  if (n.size() < 4) n.insert(0, 4 - n.size(), '0');
  return (fs::path(dir_) / ("v" + n + ".json")).string();
}

bool PrincipleStore::contains(int version) const { return fs::exists(path_for(version)); }

std::string PrincipleStore::save(const PrincipleSet& p) {
  if (contains(p.version)) throw std::invalid_argument("principle version already stored: " + std::to_string(p.version));
  if (p.parent_version) {
    if (*p.parent_version >= p.version)
      throw std::invalid_argument("parent_version must be older than version");
    if (!contains(*p.parent_version))
      throw std::invalid_argument("parent version not in store: " + std::to_string(*p.parent_version));
  }
  const std::string path = path_for(p.version);
  save_principle_file(path, p);
  return path;
}

PrincipleSet PrincipleStore::load(int version) const { return load_principle_file(path_for(version)); }

std::vector<int> PrincipleStore::versions() const {
  std::vector<int> out;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 6 && name[0] == 'v' && entry.path().extension() == ".json") {
      try {
        out.push_back(std::stoi(name.substr(1, name.size() - 6)));
      } catch (const std::exception&) {
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> PrincipleStore::lineage(int version) const {
  std::vector<int> chain;
  std::set<int> seen;
  std::optional<int> cur = version;
  while (cur) {
    if (!seen.insert(*cur).second) throw std::runtime_error("cycle in principle lineage");
    PrincipleSet p = load(*cur);
    chain.push_back(p.version);
    if (p.parent_version && *p.parent_version >= p.version)
      throw std::runtime_error("principle lineage is not strictly increasing");
    cur = p.parent_version;
  }
  return chain;
}

}  // namespace pract
