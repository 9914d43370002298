#pragma once

#include <cstdint>
#include <random>

namespace ppboot {

using Engine = std::mt19937_64;

/// Seed plus substream id. Every randomized operation takes one of these and
/// derives per-replication children with child(k), so the k-th replication
/// sees the same random numbers no matter how work is split across threads.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngSeed child(std::uint64_t index) const noexcept;
  Engine engine() const;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Uniform draw on the open interval (0, 1).
double uniform_open(Engine& engine);

}  // namespace ppboot
