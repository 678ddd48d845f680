#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mtsp/model.hpp"
#include "mtsp/simulator.hpp"

namespace mtsp {

/// Target shape: a connected cell set translated so its minimum corner is the
/// origin, cells sorted.
struct Shape {
    int dims = 2;
    std::vector<Coord> cells;
    int n = 0;  ///< side length for squares and cubes, 0 otherwise

    std::size_t size() const { return cells.size(); }
};

Shape square_shape(int n);
Shape cube_shape(int n);
/// Throws std::invalid_argument if `cells` is empty, repeats a cell or is
/// not face-connected.
Shape shape_from_cells(std::vector<Coord> cells, int dims);
/// One cell per line as `x y` or `x y z`; `#` starts a comment.
Shape parse_shape(const std::string& text);
Shape read_shape_file(const std::string& path);

/// Largest overlap between `object` and `target` over every translation and
/// every object rotation of model `m`.
int kappa(const std::vector<Coord>& object, const Shape& target, ModelKind m);

/// True when `object` is `target` up to translation and model rotation.
bool same_shape(const std::vector<Coord>& object, const Shape& target, ModelKind m);

/// Face-adjacent pairs within the shape.
int max_bonds(const Shape& s);

/// [leftmost used, rightmost used]; the whole genome when nothing was used.
std::pair<std::size_t, std::size_t> active_region(const std::vector<bool>& used);

enum class AlphaMode {
    SamePosition,  ///< alternatives at the position the step actually filled
    Frontier,      ///< alternatives anywhere on the frontier at that step
};

/// Replays `trace` from the finalized seed and sums, over all steps, the
/// number of used types other than the placed one (and not rotation-equivalent
/// to it) that could have been placed.
long alpha(const Trace& trace, const Individual& individual, const Seed& finalized_seed, const SimConfig& cfg,
           const std::vector<bool>& used, AlphaMode mode = AlphaMode::SamePosition);

struct MetricsReport {
    int theta = 0;
    int size = 0;
    int kappa = 0;
    long alpha = 0;
    std::pair<std::size_t, std::size_t> active_region{0, 0};
    int bonds = 0;       ///< bonds of the final object
    int max_bonds = 0;   ///< bonds of the target when fully bound
    bool fullness = false;
    bool terminal = false;
};

MetricsReport compute_metrics(const SimOutcome& outcome, const Individual& individual, const Shape& target,
                              const SimConfig& cfg, AlphaMode mode = AlphaMode::SamePosition);

}  // namespace mtsp
