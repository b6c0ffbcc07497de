#pragma once

#include <cstdint>

namespace mvcca {

// splitmix64; used to derive independent seed lanes from one master seed so
// that, e.g., switching the noise distribution never perturbs the
// initialization stream.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t seed_lane(uint64_t master, uint64_t lane) {
  return splitmix64(splitmix64(master) ^ splitmix64(lane));
}

// Fixed lane ids. Each consumer hashes further with its own sub-index
// (view index, epoch) via seed_lane again.
namespace lanes {
constexpr uint64_t kInit = 0x01;
constexpr uint64_t kNoise = 0x02;
constexpr uint64_t kShuffle = 0x03;
constexpr uint64_t kSynthGod = 0x04;
constexpr uint64_t kSynthView = 0x05;
constexpr uint64_t kSynthTasks = 0x06;
constexpr uint64_t kProbeNoise = 0x07;
}  // namespace lanes

}  // namespace mvcca
