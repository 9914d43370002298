#include "ppboot/rng.hpp"

namespace ppboot {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngSeed RngSeed::child(std::uint64_t index) const noexcept {
  return RngSeed{seed, splitmix64(splitmix64(stream) ^ (index + 0x632be59bd9b4e019ULL))};
}

Engine RngSeed::engine() const {
  return Engine(splitmix64(splitmix64(seed) ^ stream));
}

double uniform_open(Engine& engine) {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(engine);
    if (u > 0.0 && u < 1.0) return u;
  }
}

}  // namespace ppboot
