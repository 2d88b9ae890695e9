/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <array>
#include <cstdint>

namespace zenoline {

// splitmix64 finalizer, also used to derive per-point seeds in parameter
// sweeps as seed ^ splitmix64(index).
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Philox4x64-10 counter-based generator. A (seed, stream) pair selects an
// independent sequence, so per-trial streams can be drawn in any order and
// the results do not depend on thread scheduling.
class PhiloxEngine {
 public:
  using result_type = std::uint64_t;

  PhiloxEngine() : PhiloxEngine(0, 0) {}
  explicit PhiloxEngine(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{seed, stream} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~static_cast<result_type>(0); }

  result_type operator()() {
    if (index_ == 4) {
      // The counter advances before each block, matching the convention of
      // the reference implementation the test vectors were produced with.
      advance_counter();
      block_ = generate_block(counter_, key_);
      index_ = 0;
    }
    return block_[index_++];
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(operator()() >> 11) * 0x1.0p-53;
  }

  // One keyed block of four outputs. Exposed so the generator can be checked
  // against reference vectors at arbitrary counter values.
  static std::array<std::uint64_t, 4> generate_block(
      std::array<std::uint64_t, 4> counter,
      std::array<std::uint64_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
      std::uint64_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2E7470EE14C6C93ull, counter[0], hi0, lo0);
      mulhilo(0xCA5A826395121157ull, counter[2], hi1, lo1);
      counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
      key[0] += 0x9E3779B97F4A7C15ull;
      key[1] += 0xBB67AE8584CAA73Bull;
    }
    return counter;
  }

 private:
  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) noexcept {
    const auto product =
        static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
    hi = static_cast<std::uint64_t>(product >> 64);
    lo = static_cast<std::uint64_t>(product);
  }

  void advance_counter() noexcept {
    for (int i = 0; i < 4; ++i) {
      if (++counter_[i] != 0) break;
    }
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> block_{};
  int index_ = 4;
};

}  // namespace zenoline
