#pragma once

#include <cstdint>
#include <random>

namespace plgp {

/// Independent random streams. The same integer seed drives several
/// components (data draws, projections, splits); tagging each stream keeps
/// their draws unrelated when seeds coincide.
enum class RandomStream : std::uint32_t { Prior = 1, Sphere = 2, OneHot = 3, Split = 4 };

inline std::mt19937_64 make_rng(std::uint64_t seed, RandomStream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace plgp
