#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace perfdyn {

using Rng = std::mt19937_64;

// Named sub-streams so that a run's dataset draws, evaluation draws and
// initialisation never share randomness.
enum class Stream : std::uint64_t {
  data = 1,
  evaluation = 2,
  init = 3,
  solver = 4,
  instance = 5,
  property = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic seed for the path (base, keys...).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

inline std::uint64_t key(Stream s) { return static_cast<std::uint64_t>(s); }

}  // namespace perfdyn
