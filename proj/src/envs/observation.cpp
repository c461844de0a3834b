#include "advlab/envs/observation.hpp"

#include <stdexcept>

namespace advlab::envs {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    h ^= (value >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

}  // namespace

std::uint64_t Observation::hash() const {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, static_cast<std::uint64_t>(encoding), 1);
  for (std::int32_t t : tokens) fnv_mix(h, static_cast<std::uint32_t>(t), 4);
  fnv_mix(h, legal, 4);
  return h;
}

int tokens_per_observation(Encoding encoding) {
  switch (encoding) {
    case Encoding::PdCategorical:
    case Encoding::Lighthouse2D:
      return 1;
    case Encoding::CrossingGrid:
      return 7 * 7 * 3;
    case Encoding::Lighthouse1D:
      break;
  }
  throw std::invalid_argument("variable-width observation encoding");
}

}  // namespace advlab::envs
