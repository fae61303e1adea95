#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ddd {

/// Mixes a key tuple into a single 64-bit seed through std::seed_seq.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> key) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * key.size());
  for (std::uint64_t k : key) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

/// Deterministic uniform stream. Uniform variates are built from the top 53
/// bits of mt19937_64 so the sequence is identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Stream for one (seed, m, n) simulation cell.
  static RandomStream for_cell(std::uint64_t seed, int m, int n) {
    return RandomStream(derive_seed({seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n)}));
  }

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform integer on [0, bound).
  std::size_t index(std::size_t bound) {
    const auto i = static_cast<std::size_t>(unit() * static_cast<double>(bound));
    return i < bound ? i : bound - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ddd
