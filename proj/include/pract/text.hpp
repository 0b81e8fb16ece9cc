#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pract {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Trim, case-fold and collapse internal whitespace runs to one space.
std::string normalize_arg(std::string_view s);

/// Lowercase alphanumeric tokens, in order of appearance.
std::vector<std::string> tokenize(std::string_view s);

bool is_blank(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);

/// Fixed-point rendering with round-half-up applied to the shortest decimal
/// representation of `v`, so 0.60115 renders as "0.6012" at 4 decimals.
std::string format_fixed(double v, int decimals);

/// Cut `s` to at most `max_chars` bytes, preferring the last whitespace
/// boundary inside the limit and never splitting a UTF-8 sequence.
std::string truncate_at_whitespace(std::string_view s, std::size_t max_chars);

/// Byte-truncation that respects UTF-8 boundaries.
std::string truncate_utf8(std::string_view s, std::size_t max_chars);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Seeded generator whose output is identical across standard libraries.
/// std::uniform_int_distribution and std::shuffle are implementation-defined,
/// so suites and splits use these helpers instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(below(v.size()))];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pract
