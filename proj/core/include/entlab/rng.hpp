#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace entlab {

using Engine = std::mt19937_64;

// Deterministic sub-stream for a path of indices below a master seed.
// The same (seed, path) always yields the same engine state, independent
// of thread scheduling.
Engine make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace entlab
