#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dmimo {

// The generator behind every channel draw. Seeded from a single 64-bit value.
using rng_engine = std::mt19937_64;

// splitmix64 finalizer; used to decorrelate neighbouring stream ids.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream splitting rule: seed = base_seed XOR mix(stream id), where the stream
// id is folded from an ordered list of indices (size, snr index, trial, ...).
// Two streams differing in any index get unrelated seeds, and a stream's seed
// never depends on how many other streams were drawn before it.
constexpr std::uint64_t stream_seed(std::uint64_t base_seed,
                                    std::initializer_list<std::uint64_t> ids) noexcept {
  std::uint64_t id = 0x6a09e667f3bcc908ULL;
  for (auto v : ids) id = mix64(id ^ mix64(v));
  return base_seed ^ id;
}

}  // namespace dmimo
