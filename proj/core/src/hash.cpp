#include "mvcca/hash.hpp"

#include <cstdio>

namespace mvcca {

std::string hash_hex(uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mvcca
