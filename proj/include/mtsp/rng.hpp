#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mtsp {

using Rng = std::mt19937_64;

/// Seed for an independent substream identified by `path` under `master`.
/// Derived through std::seed_seq, whose mixing is fixed by the standard.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    return Rng(derive_seed(master, path));
}

inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace mtsp
