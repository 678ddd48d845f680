#include "mtsp/rng.hpp"

#include <vector>

namespace mtsp {

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)};
    for (const auto p : path) {
        words.push_back(static_cast<std::uint32_t>(p));
        words.push_back(static_cast<std::uint32_t>(p >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace mtsp
