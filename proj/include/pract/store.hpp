#pragma once

// Flat-file artifact stores: newline-delimited trajectory/reflection records
// and a directory of versioned principle files.

#include <string>
#include <vector>

#include "pract/core.hpp"

namespace pract {

void append_trajectories(const std::string& path, const std::vector<Trajectory>& ts);
std::vector<Trajectory> read_trajectories(const std::string& path);

void append_reflections(const std::string& path, const std::vector<Reflection>& rs);
std::vector<Reflection> read_reflections(const std::string& path);

/// Principle versions stored as <dir>/v0000.json, v0001.json, ...
class PrincipleStore {
 public:
  explicit PrincipleStore(std::string dir);

  /// Rejects a version that already exists or whose parent is missing or
  /// not older than it.
  std::string save(const PrincipleSet& p);
  PrincipleSet load(int version) const;
  std::vector<int> versions() const;
  bool contains(int version) const;

  /// Versions from `version` back to its root, newest first.
  std::vector<int> lineage(int version) const;

  std::string path_for(int version) const;

 private:
  std::string dir_;
};

}  // namespace pract
