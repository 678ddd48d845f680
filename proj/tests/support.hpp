#pragma once

#include <string>

#include "mtsp/rng.hpp"
#include "mtsp/tileset_io.hpp"

namespace mtsp::test {

inline std::string source_path(const std::string& rel) { return std::string(MTSP_SOURCE_DIR) + "/" + rel; }

inline TileSetFile load(const std::string& rel) { return read_tileset_file(source_path(rel)); }

inline Individual individual_of(const TileSetFile& f) { return Individual{f.tiles}; }

/// Genome with uniform labels drawn from `labels` non-eps ids (intensities
/// cycling with tau), polarised at random in the rotation models.
inline Individual random_individual(Rng& rng, ModelKind m, std::size_t types, std::size_t labels, int tau,
                                    double eps_share = 0.3)
{
    const LabelTable table = build_label_table(labels + 1, tau);
    Individual ind;
    for (std::size_t i = 0; i < types; ++i) {
        TileType t = blank_tile(m);
        for (int d = 0; d < t.side_count; ++d) {
            if (uniform01(rng) < eps_share) continue;
            Label l = table[1 + uniform_index(rng, labels)];
            if (has_polarity(m)) l.polarity = uniform01(rng) < 0.5 ? Polarity::Plus : Polarity::Minus;
            t.side(d) = l;
        }
        ind.genome.push_back(t);
    }
    return ind;
}

}  // namespace mtsp::test
