#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mvcca {

// FNV-1a, stable across runs and platforms; used for config hashes embedded
// in output files.
inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(uint64_t h);

}  // namespace mvcca
