// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_RNG_HPP
#define VDS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace vds {

// Identifies one logical stream of random draws. Equal (seed, stream) pairs
// reproduce identical sequences; distinct streams are independent for all
// practical purposes (counter-based construction, no shared state).
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// FNV-1a, used to derive stream ids from task labels such as "scheme:m:trial".
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based generator: draw t is a fixed 64-bit mix of (seed, stream, t).
// The value at a given counter does not depend on how many other streams are
// being consumed concurrently, which keeps parallel Monte Carlo reproducible
// independent of scheduling.
class CounterRng {
 public:
  explicit CounterRng(RngStream key) : key_(key), base_(derive_base(key)) {}
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : CounterRng(RngStream{seed, stream}) {}

  RngStream key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t value_at(std::uint64_t counter) const {
    return finalize(base_ + kGolden * (counter + 1));
  }
  double double_at(std::uint64_t counter) const { return to_unit(value_at(counter)); }

  std::uint64_t next_u64() { return value_at(counter_++); }

  // Uniform on [0, 1).
  double next_double() { return to_unit(next_u64()); }

  // Standard normal via Box-Muller; consumes two uniforms per pair of draws.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  void skip_to(std::uint64_t counter) {
    counter_ = counter;
    has_spare_ = false;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive_base(RngStream key) {
    return finalize(key.seed + kGolden * finalize(key.stream + kGolden));
  }

  static double to_unit(std::uint64_t z) { return double(z >> 11) * 0x1.0p-53; }

  RngStream key_;
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vds

#endif  // VDS_RNG_HPP
