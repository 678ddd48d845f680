#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mtsp/metrics.hpp"
#include "mtsp/model.hpp"

namespace mtsp {

enum class Verdict { Pass, Fail, Inconclusive };

std::string_view to_string(Verdict v);

struct VerifyOptions {
    int bound = 0;                        ///< objects larger than this violate termination
    std::size_t state_budget = 2'000'000;  ///< distinct objects explored before giving up
};

struct VerifyReport {
    Verdict termination = Verdict::Inconclusive;  ///< C1
    Verdict unicity = Verdict::Inconclusive;      ///< C2
    Verdict fullness = Verdict::Inconclusive;     ///< C3
    int witness_for = 0;                          ///< constraint the witness violates, 0 if none
    Trace witness;                                ///< accretion sequence reaching the violation
    std::size_t states = 0;
    std::size_t maximal_objects = 0;
};

/// Enumerates every accretion sequence of `tiles` from `seed` on an unbounded
/// lattice. Tiles attach only at empty positions open to the exterior; an
/// enclosed position is never filled. Distinct objects are explored once.
/// Throws std::invalid_argument if the bound is smaller than the target.
VerifyReport exhaustive_verify(const std::vector<TileType>& tiles, const Seed& seed, const Shape& target, int tau,
                               ModelKind m, const VerifyOptions& opts);

/// `C1=...`, `C2=...`, `C3=...` lines, then the witness in trace format.
std::string format_report(const VerifyReport& r, int dims);

}  // namespace mtsp
