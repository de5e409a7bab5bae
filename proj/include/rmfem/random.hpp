#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace rmfem {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child key from a parent key and a list of integer labels.
/// Streams keyed this way are independent of the order in which they are
/// created, which keeps multi-threaded runs reproducible.
inline std::uint64_t derive_key(std::uint64_t parent, std::initializer_list<std::uint64_t> labels) {
  std::uint64_t key = mix64(parent ^ 0x6a09e667f3bcc909ULL);
  for (auto label : labels) key = mix64(key + 0x9e3779b97f4a7c15ULL * (label + 1));
  return key;
}

/// Counter-based random stream (SplitMix64). Satisfies UniformRandomBitGenerator
/// so it plugs into the <random> distributions.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) : key_(key), state_(key) {}
  Stream(std::uint64_t parent, std::initializer_list<std::uint64_t> labels)
      : Stream(derive_key(parent, labels)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(*this); }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t state_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rmfem
