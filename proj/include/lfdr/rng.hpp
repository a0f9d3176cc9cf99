#pragma once

#include <cstdint>

namespace lfdr::rng {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stateless counter-based uniform stream. Draw number `counter` is a pure
// function of (key, counter): replications can be generated in any order or
// in parallel and still reproduce bit for bit, and two consumers that look at
// the same (key, t) see the same draw whether or not anything was drawn in
// between.
struct Stream {
  std::uint64_t key = 0;

  std::uint64_t bits_at(std::uint64_t counter) const {
    std::uint64_t w = splitmix64(key ^ (0xd1b54a32d192ed03ull * counter + 0x8cb92ba72f3d8dd7ull));
    return splitmix64(w);
  }
  // Uniform on [0, 1) with 53 random bits.
  double uniform_at(std::uint64_t counter) const {
    return static_cast<double>(bits_at(counter) >> 11) * 0x1.0p-53;
  }
};

// Derives independent stream keys from (master seed, replication index).
// Distinct salts separate the arrival stream from the policy's own draws.
inline std::uint64_t stream_key(std::uint64_t master, std::uint64_t replication, std::uint64_t salt) {
  return splitmix64(splitmix64(master + 0x9e3779b97f4a7c15ull * salt) ^
                    (replication * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull));
}

constexpr std::uint64_t kPathSalt = 1;
constexpr std::uint64_t kPolicySalt = 2;

inline Stream path_stream(std::uint64_t master, std::uint64_t replication) {
  return Stream{stream_key(master, replication, kPathSalt)};
}
inline Stream policy_stream(std::uint64_t master, std::uint64_t replication) {
  return Stream{stream_key(master, replication, kPolicySalt)};
}

}  // namespace lfdr::rng
