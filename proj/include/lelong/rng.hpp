// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Deterministic substream RNG. Every sampling stratum (annulus, batch,
// splitting level, chain) derives its own xoshiro256++ stream from a
// splitmix64 hash of (seed, tags...), so results do not depend on thread
// scheduling or worker count.
#pragma once

#include <cstdint>
#include <initializer_list>

namespace lelong {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = seed ^ 0xa5a5a5a55a5a5a5aULL;
  std::uint64_t h = splitmix64(s);
  for (std::uint64_t t : tags) {
    s ^= t + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h = splitmix64(s);
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t stream_key) {
    std::uint64_t s = stream_key;
    for (auto& w : s_) w = splitmix64(s);
  }
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags)
      : Rng(hash_stream(seed, tags)) {}

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

}  // namespace lelong
