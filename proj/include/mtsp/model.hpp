#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtsp {

// ---------------------------------------------------------------------------
// Model variants
// ---------------------------------------------------------------------------

enum class ModelKind : std::uint8_t { TwoD, TwoDR, ThreeDR };

int sides_per_tile(ModelKind m);
/// Number of orientations a tile type may take before accretion (1, 4 or 24).
int orientation_count(ModelKind m);
int dimensions(ModelKind m);
bool has_polarity(ModelKind m);

std::string_view to_string(ModelKind m);
std::optional<ModelKind> parse_model(std::string_view s);

// ---------------------------------------------------------------------------
// Lattice directions. Sides are indexed N,E,S,W in two dimensions; cubes add
// Up and Down. N is +y, E is +x, U is +z.
// ---------------------------------------------------------------------------

enum Direction : int { North = 0, East = 1, South = 2, West = 3, Up = 4, Down = 5 };
inline constexpr int kMaxSides = 6;

constexpr int opposite(int d) { return d < 4 ? (d + 2) % 4 : (d == Up ? Down : Up); }

struct Coord {
    int x = 0;
    int y = 0;
    int z = 0;

    friend constexpr Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
};

Coord direction_vector(int d);
std::string format_coord(Coord c, int dims);

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

enum class Polarity : std::uint8_t { None, Plus, Minus };

constexpr Polarity flip(Polarity p)
{
    return p == Polarity::Plus ? Polarity::Minus : (p == Polarity::Minus ? Polarity::Plus : Polarity::None);
}

struct Label {
    static constexpr std::uint16_t kEpsilonId = 0;
    static constexpr std::uint16_t kWildcardId = 0xFFFF;

    std::uint16_t id = kEpsilonId;
    Polarity polarity = Polarity::None;
    std::uint8_t intensity = 0;

    static constexpr Label epsilon() { return {}; }
    static constexpr Label wildcard() { return {kWildcardId, Polarity::None, 0}; }
    static constexpr Label make(std::uint16_t id, int intensity, Polarity p = Polarity::None)
    {
        return {id, p, static_cast<std::uint8_t>(intensity)};
    }

    constexpr bool is_epsilon() const { return id == kEpsilonId; }
    constexpr bool is_wildcard() const { return id == kWildcardId; }

    friend constexpr auto operator<=>(const Label&, const Label&) = default;
};

/// True when the two facing labels form a bond under model `m`.
///
/// Equal ids are required in every model; the rotation models additionally
/// require opposite polarities. Two polarity-free labels still bind on id
/// equality, which lets hand-written tile sets express the unpolarized
/// rotation behaviour. A wildcard binds any concrete label; two facing
/// wildcards never bind.
bool labels_bind(const Label& a, const Label& b, ModelKind m);

/// Strength of the bond between two binding labels.
int bond_intensity(const Label& a, const Label& b);

/// Label a wildcard turns into once `neighbor` has bound through it.
Label resolve_wildcard(const Label& neighbor);

// ---------------------------------------------------------------------------
// Label table
// ---------------------------------------------------------------------------

class LabelTable {
public:
    LabelTable(std::size_t size, int tau);

    std::size_t size() const { return entries_.size(); }
    int tau() const { return tau_; }
    const Label& operator[](std::size_t k) const { return entries_[k]; }
    std::span<const Label> entries() const { return entries_; }

private:
    std::vector<Label> entries_;
    int tau_;
};

/// Truncation of the sequence eps, l1, l2, ... to `size` entries, with
/// intensities cycling 1..tau. Throws std::invalid_argument for size 0 or
/// tau < 1.
LabelTable build_label_table(std::size_t size, int tau);

// ---------------------------------------------------------------------------
// Tile types and orientations
// ---------------------------------------------------------------------------

struct TileType {
    std::array<Label, kMaxSides> sides{};
    std::uint8_t side_count = 4;

    const Label& side(int d) const { return sides[static_cast<std::size_t>(d)]; }
    Label& side(int d) { return sides[static_cast<std::size_t>(d)]; }

    /// Number of labelled (non-eps) sides.
    int lambda() const;
    bool has_wildcard() const;

    friend auto operator<=>(const TileType&, const TileType&) = default;
};

TileType blank_tile(ModelKind m);

/// Side permutation: entry s is the direction that original side s faces
/// after the rotation.
using SidePermutation = std::array<std::uint8_t, kMaxSides>;

/// Rotation table of the model. Entry 0 is always the identity, and for the
/// cube the first four entries are the rotations about the vertical axis so
/// the planar and cubic tables agree on orientations 0..3.
std::span<const SidePermutation> orientation_table(ModelKind m);

TileType apply_orientation(const TileType& t, const SidePermutation& p);
TileType apply_orientation(const TileType& t, ModelKind m, int orientation);

/// Orbit of `t` under the model's rotation group, one entry per orientation
/// (duplicates kept).
std::vector<TileType> enumerate_orientations(const TileType& t, ModelKind m);

/// Rotates a lattice vector with the same rotation that `p` applies to sides.
Coord rotate(Coord c, const SidePermutation& p);

/// Lexicographically smallest member of the orbit.
TileType canonical_form(const TileType& t, ModelKind m);
bool rotation_equivalent(const TileType& a, const TileType& b, ModelKind m);

// ---------------------------------------------------------------------------
// Seeds and individuals
// ---------------------------------------------------------------------------

struct SeedTile {
    Coord offset;
    TileType tile;

    friend auto operator<=>(const SeedTile&, const SeedTile&) = default;
};

struct Seed {
    std::vector<SeedTile> tiles;

    std::size_t size() const { return tiles.size(); }
    friend auto operator<=>(const Seed&, const Seed&) = default;
};

/// Single-tile seed with wildcards on E and N (and U for cubes) so that it
/// sits at the south-west(-bottom) corner of the assembled object.
Seed corner_seed(ModelKind m);

/// Throws std::invalid_argument unless the seed is nonempty, uses the model's
/// side count, occupies distinct connected offsets, and carries wildcards only
/// on sides facing unoccupied positions.
void validate_seed(const Seed& seed, ModelKind m);

struct Individual {
    std::vector<TileType> genome;

    std::size_t size() const { return genome.size(); }
    friend bool operator==(const Individual&, const Individual&) = default;
};

// ---------------------------------------------------------------------------
// Accretion records
// ---------------------------------------------------------------------------

/// One accretion step. Positions are relative to the first seed tile and
/// unwrapped, so they stay meaningful independently of the lattice.
struct Accretion {
    int step = 0;
    Coord pos;
    int type = 0;
    int orientation = 0;
    int bonds = 0;
    int bond_sum = 0;
    bool hollow = false;

    friend bool operator==(const Accretion&, const Accretion&) = default;
};

using Trace = std::vector<Accretion>;

/// Replaces every wildcard of `seed` with the label that bound through it
/// (same id, opposite polarity) or with eps when nothing bound.
Seed finalize_seed(const Seed& seed, const Trace& trace, const Individual& individual, ModelKind m);

}  // namespace mtsp
