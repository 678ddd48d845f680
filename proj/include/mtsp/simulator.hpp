#pragma once

#include <cstdint>
#include <unordered_map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtsp/model.hpp"
#include "mtsp/rng.hpp"

namespace mtsp {

struct SimConfig {
    ModelKind model = ModelKind::TwoD;
    int tau = 2;
    int extent = 30;     ///< lattice side length (periodic)
    int max_tiles = 100; ///< object size cap, seed included
    int max_sims = 10;   ///< runs per evaluation
};

/// Periodic square or cubic lattice.
class Lattice {
public:
    Lattice(int dims, int extent);

    int dims() const { return dims_; }
    int extent() const { return extent_; }
    std::size_t cell_count() const { return cells_; }

    Coord wrap(Coord c) const;
    std::size_t index(Coord c) const;  ///< c is wrapped first
    Coord coords(std::size_t cell) const;
    std::size_t neighbor(std::size_t cell, int d) const
    {
        return (*neighbors_)[cell * static_cast<std::size_t>(2 * dims_) + static_cast<std::size_t>(d)];
    }
    Coord center() const;

private:
    int dims_;
    int extent_;
    std::size_t cells_;
    std::shared_ptr<const std::vector<std::uint32_t>> neighbors_;
};

struct PlacedTile {
    std::size_t cell = 0;
    Coord pos;         ///< seed frame, unwrapped
    TileType sides;    ///< oriented labels; seed wildcards resolve in place once bound
    int type = -1;     ///< genome index, -1 for seed tiles
    int orientation = 0;
    int step = 1;
    int bonds = 0;     ///< b_u(t)
};

/// What an empty position sees of its occupied neighbours.
struct NeighborView {
    std::array<bool, kMaxSides> present{};
    std::array<bool, kMaxSides> closer{};  ///< neighbour is the tile that closed this hollow
    std::array<Label, kMaxSides> facing{};
};

struct Admissibility {
    bool admissible = false;
    int bonds = 0;
    int bond_sum = 0;  ///< all bonds, the hollow-closing one included
};

/// Temperature rule for placing `oriented` where it sees `nv`. Facing
/// non-eps sides that fail to bind veto the placement. The tau test and the
/// unbound-side test ignore a bond with the hollow-closing tile.
Admissibility placement_admissible(const TileType& oriented, const NeighborView& nv, int tau, ModelKind m);

struct HollowStatus {
    bool in_hollow = false;
    int closing_tile = -1;  ///< index into Assembly::tiles()
};

/// Occupancy of the lattice, bond bookkeeping and the hollow registry. Shared
/// by the simulator and by trace replay.
class Assembly {
public:
    /// Places the seed with its first tile at the lattice centre. Throws
    /// std::invalid_argument if the seed does not fit the lattice.
    Assembly(const SimConfig& cfg, const Seed& seed);

    const Lattice& lattice() const { return lattice_; }
    const SimConfig& config() const { return cfg_; }
    const std::vector<PlacedTile>& tiles() const { return tiles_; }
    std::size_t seed_size() const { return seed_size_; }

    bool occupied(std::size_t cell) const { return occupant_[cell] >= 0; }
    int occupant(std::size_t cell) const { return occupant_[cell]; }
    std::size_t cell_of(Coord pos) const;

    int total_bonds() const { return total_bonds_; }

    NeighborView view(std::size_t cell) const;
    Admissibility admissible(std::size_t cell, const TileType& oriented) const;
    HollowStatus hollow_check(std::size_t cell) const;

    struct Placement {
        int bonds = 0;
        int bond_sum = 0;
        bool hollow = false;
        std::vector<std::size_t> enclosed;  ///< cells that became hollow
    };

    /// Puts a tile at an empty cell and updates bonds and hollows.
    Placement place(std::size_t cell, Coord pos, const TileType& oriented, int type, int orientation);

    /// Empty cells outside the main open region, recomputed by a full flood
    /// fill. Test oracle for the incremental hollow registry.
    std::vector<std::size_t> enclosed_cells_by_flood_fill() const;

private:
    void update_hollows(std::size_t cell, int closer, std::vector<std::size_t>& enclosed);
    bool locally_connected(std::size_t cell, const std::vector<std::size_t>& sources);

    SimConfig cfg_;
    Lattice lattice_;
    Coord anchor_;  ///< seed-frame position of the lattice centre
    std::vector<PlacedTile> tiles_;
    std::vector<int> occupant_;
    std::vector<int> closer_;  ///< hollow registry: closing tile per enclosed cell, -1 otherwise
    std::vector<std::uint32_t> stamp_;
    std::vector<int> owner_;
    std::uint32_t stamp_value_ = 0;
    std::size_t seed_size_ = 0;
    int total_bonds_ = 0;
};

struct OrientedTile {
    int type = 0;
    int orientation = 0;
    TileType sides;
};

/// Every genome type under every orientation of the model, type-major.
std::vector<OrientedTile> expand_orientations(const Individual& individual, ModelKind m);

struct Candidate {
    int oriented = 0;  ///< index into the oriented tile list
    int bonds = 0;
    int bond_sum = 0;

    friend auto operator<=>(const Candidate&, const Candidate&) = default;
};

struct OpenPosition {
    std::size_t cell = 0;
    Coord pos;
    std::vector<Candidate> candidates;
    long weight = 0;
};

/// One stochastic accretion run: the assembly plus its position list and
/// candidate list, kept up to date incrementally.
class AssemblyState {
public:
    AssemblyState(const Individual& individual, const Seed& seed, const SimConfig& cfg);

    const Assembly& assembly() const { return assembly_; }
    std::span<const OrientedTile> oriented() const { return oriented_; }
    std::span<const OpenPosition> open_positions() const { return open_; }
    std::size_t candidate_count() const;
    long total_weight() const { return total_weight_; }
    bool collision() const { return collision_; }
    const Trace& trace() const { return trace_; }
    const std::vector<bool>& used() const { return used_; }

    bool has_candidates() const { return total_weight_ > 0; }
    std::size_t size() const { return assembly_.tiles().size(); }

    /// Picks one candidate with probability proportional to its bond sum and
    /// places it. Throws std::logic_error when there is no candidate.
    void step(Rng& rng);

    /// Places candidate `which` of open position `slot`.
    void apply(std::size_t slot, std::size_t which);

    /// Full recomputation of the position and candidate lists from the
    /// occupancy grid, each sorted by cell and candidate.
    struct Snapshot {
        std::vector<OpenPosition> positions;
        bool collision_possible = false;
    };
    Snapshot recompute() const;
    Snapshot snapshot() const;  ///< incremental lists in the same normal form

private:
    enum class Kind { Closed, Open, Collision };
    struct PositionEval {
        Kind kind = Kind::Closed;
        Coord pos;
        std::vector<Candidate> candidates;
        bool collision_admissible = false;
    };
    PositionEval evaluate(std::size_t cell) const;
    void refresh(std::size_t cell);
    /// Oriented tiles whose side `d` may bind `facing`: same label id, or any
    /// label when `facing` is a wildcard. Binding is still checked by the caller.
    const std::vector<int>& binders(int d, const Label& facing) const;
    void remove_slot(std::size_t cell);

    SimConfig cfg_;
    Assembly assembly_;
    std::vector<OrientedTile> oriented_;
    std::vector<OpenPosition> open_;
    std::vector<int> slot_;
    long total_weight_ = 0;
    bool collision_ = false;
    Trace trace_;
    std::vector<bool> used_;
    std::array<std::unordered_map<std::uint16_t, std::vector<int>>, kMaxSides> by_side_label_;
    std::array<std::vector<int>, kMaxSides> any_label_;
    mutable std::vector<int> pool_;  ///< scratch for evaluate()
};

struct SimOutcome {
    std::vector<Coord> cells;  ///< final object, seed frame
    bool terminal = false;
    bool collision = false;
    Seed seed;                 ///< finalized
    Trace trace;
    std::vector<bool> used;    ///< per genome index
    int bonds = 0;             ///< bonds holding the final object
    int runs = 0;              ///< simulations performed

    int size() const { return static_cast<int>(cells.size()); }
};

SimOutcome simulate_once(const Individual& individual, const Seed& seed, const SimConfig& cfg, Rng& rng);

/// Up to cfg.max_sims runs on substreams of `stream_seed`; the first terminal
/// outcome wins, otherwise the smallest object (earliest on ties).
SimOutcome simulate(const Individual& individual, const Seed& seed, const SimConfig& cfg, std::uint64_t stream_seed);

/// `u=<step> pos=<x,y[,z]> type=<i> orient=<k> bonds=<b> sum=<s> hollow=<0|1>`
std::string format_accretion(const Accretion& a, int dims);
std::string format_trace(const Trace& trace, int dims);
Trace parse_trace(std::string_view text);

}  // namespace mtsp
