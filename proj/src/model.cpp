#include "mtsp/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mtsp {

namespace {

// Rotations of the cube as side permutations (see SidePermutation). Rows are
// R_z^a * B_k for k over {id, U->N, U->E, U->S, U->W, U->D} and a = 0..3,
// where R_z turns N into E.
constexpr std::array<SidePermutation, 24> kCubeRotations{{
    {0, 1, 2, 3, 4, 5}, {1, 2, 3, 0, 4, 5}, {2, 3, 0, 1, 4, 5}, {3, 0, 1, 2, 4, 5},
    {5, 1, 4, 3, 0, 2}, {5, 2, 4, 0, 1, 3}, {5, 3, 4, 1, 2, 0}, {5, 0, 4, 2, 3, 1},
    {0, 5, 2, 4, 1, 3}, {1, 5, 3, 4, 2, 0}, {2, 5, 0, 4, 3, 1}, {3, 5, 1, 4, 0, 2},
    {4, 1, 5, 3, 2, 0}, {4, 2, 5, 0, 3, 1}, {4, 3, 5, 1, 0, 2}, {4, 0, 5, 2, 1, 3},
    {0, 4, 2, 5, 3, 1}, {1, 4, 3, 5, 0, 2}, {2, 4, 0, 5, 1, 3}, {3, 4, 1, 5, 2, 0},
    {2, 1, 0, 3, 5, 4}, {3, 2, 1, 0, 5, 4}, {0, 3, 2, 1, 5, 4}, {1, 0, 3, 2, 5, 4},
}};

constexpr std::array<Coord, kMaxSides> kDirections{{
    {0, 1, 0}, {1, 0, 0}, {0, -1, 0}, {-1, 0, 0}, {0, 0, 1}, {0, 0, -1},
}};

}  // namespace

int sides_per_tile(ModelKind m) { return m == ModelKind::ThreeDR ? 6 : 4; }

int orientation_count(ModelKind m)
{
    switch (m) {
    case ModelKind::TwoD: return 1;
    case ModelKind::TwoDR: return 4;
    case ModelKind::ThreeDR: return 24;
    }
    return 1;
}

int dimensions(ModelKind m) { return m == ModelKind::ThreeDR ? 3 : 2; }

bool has_polarity(ModelKind m) { return m != ModelKind::TwoD; }

std::string_view to_string(ModelKind m)
{
    switch (m) {
    case ModelKind::TwoD: return "2d";
    case ModelKind::TwoDR: return "2dr";
    case ModelKind::ThreeDR: return "3dr";
    }
    return "?";
}

std::optional<ModelKind> parse_model(std::string_view s)
{
    if (s == "2d" || s == "2D") return ModelKind::TwoD;
    if (s == "2dr" || s == "2DR") return ModelKind::TwoDR;
    if (s == "3dr" || s == "3DR") return ModelKind::ThreeDR;
    return std::nullopt;
}

Coord direction_vector(int d) { return kDirections[static_cast<std::size_t>(d)]; }

std::string format_coord(Coord c, int dims)
{
    std::string s = std::to_string(c.x) + "," + std::to_string(c.y);
    if (dims == 3) s += "," + std::to_string(c.z);
    return s;
}

bool labels_bind(const Label& a, const Label& b, ModelKind m)
{
    if (a.is_epsilon() || b.is_epsilon()) return false;
    if (a.is_wildcard() || b.is_wildcard()) return !(a.is_wildcard() && b.is_wildcard());
    if (a.id != b.id) return false;
    if (m == ModelKind::TwoD) return true;
    if (a.polarity == Polarity::None && b.polarity == Polarity::None) return true;
    return a.polarity != b.polarity && a.polarity != Polarity::None && b.polarity != Polarity::None;
}

int bond_intensity(const Label& a, const Label& b) { return a.is_wildcard() ? b.intensity : a.intensity; }

Label resolve_wildcard(const Label& neighbor)
{
    return Label::make(neighbor.id, neighbor.intensity, flip(neighbor.polarity));
}

LabelTable::LabelTable(std::size_t size, int tau) : tau_(tau)
{
    if (size == 0) throw std::invalid_argument("label table size must be at least 1");
    if (tau < 1) throw std::invalid_argument("temperature must be at least 1");
    if (size > Label::kWildcardId) throw std::invalid_argument("label table too large");
    entries_.reserve(size);
    entries_.push_back(Label::epsilon());
    for (std::size_t k = 1; k < size; ++k) {
        const int intensity = static_cast<int>((k - 1) % static_cast<std::size_t>(tau)) + 1;
        entries_.push_back(Label::make(static_cast<std::uint16_t>(k), intensity));
    }
}

LabelTable build_label_table(std::size_t size, int tau) { return LabelTable(size, tau); }

int TileType::lambda() const
{
    int n = 0;
    for (int d = 0; d < side_count; ++d)
        if (!side(d).is_epsilon()) ++n;
    return n;
}

bool TileType::has_wildcard() const
{
    for (int d = 0; d < side_count; ++d)
        if (side(d).is_wildcard()) return true;
    return false;
}

TileType blank_tile(ModelKind m)
{
    TileType t;
    t.side_count = static_cast<std::uint8_t>(sides_per_tile(m));
    return t;
}

std::span<const SidePermutation> orientation_table(ModelKind m)
{
    return std::span<const SidePermutation>(kCubeRotations.data(), static_cast<std::size_t>(orientation_count(m)));
}

TileType apply_orientation(const TileType& t, const SidePermutation& p)
{
    TileType r;
    r.side_count = t.side_count;
    for (int s = 0; s < t.side_count; ++s) r.side(p[static_cast<std::size_t>(s)]) = t.side(s);
    return r;
}

TileType apply_orientation(const TileType& t, ModelKind m, int orientation)
{
    return apply_orientation(t, orientation_table(m)[static_cast<std::size_t>(orientation)]);
}

std::vector<TileType> enumerate_orientations(const TileType& t, ModelKind m)
{
    std::vector<TileType> out;
    for (const auto& p : orientation_table(m)) out.push_back(apply_orientation(t, p));
    return out;
}

Coord rotate(Coord c, const SidePermutation& p)
{
    const Coord ex = kDirections[p[East]];
    const Coord ny = kDirections[p[North]];
    const Coord uz = kDirections[p[Up]];
    return {c.x * ex.x + c.y * ny.x + c.z * uz.x,
            c.x * ex.y + c.y * ny.y + c.z * uz.y,
            c.x * ex.z + c.y * ny.z + c.z * uz.z};
}

TileType canonical_form(const TileType& t, ModelKind m)
{
    TileType best = t;
    for (const auto& p : orientation_table(m)) best = std::min(best, apply_orientation(t, p));
    return best;
}

bool rotation_equivalent(const TileType& a, const TileType& b, ModelKind m)
{
    return canonical_form(a, m) == canonical_form(b, m);
}

Seed corner_seed(ModelKind m)
{
    TileType t = blank_tile(m);
    t.side(East) = Label::wildcard();
    t.side(North) = Label::wildcard();
    if (m == ModelKind::ThreeDR) t.side(Up) = Label::wildcard();
    return Seed{{SeedTile{Coord{}, t}}};
}

void validate_seed(const Seed& seed, ModelKind m)
{
    if (seed.tiles.empty()) throw std::invalid_argument("seed has no tiles");
    const int sides = sides_per_tile(m);
    std::set<Coord> cells;
    for (const auto& st : seed.tiles) {
        if (st.tile.side_count != sides)
            throw std::invalid_argument("seed tile side count does not match the model");
        if (dimensions(m) == 2 && st.offset.z != 0)
            throw std::invalid_argument("planar seed with nonzero z offset");
        if (!cells.insert(st.offset).second) throw std::invalid_argument("seed tiles overlap");
    }
    // connectivity
    std::set<Coord> seen{seed.tiles.front().offset};
    std::vector<Coord> stack{seed.tiles.front().offset};
    while (!stack.empty()) {
        const Coord c = stack.back();
        stack.pop_back();
        for (int d = 0; d < sides; ++d) {
            const Coord n = c + direction_vector(d);
            if (cells.count(n) && seen.insert(n).second) stack.push_back(n);
        }
    }
    if (seen.size() != cells.size()) throw std::invalid_argument("seed tiles are not connected");
    for (const auto& st : seed.tiles)
        for (int d = 0; d < sides; ++d)
            if (st.tile.side(d).is_wildcard() && cells.count(st.offset + direction_vector(d)))
                throw std::invalid_argument("seed wildcard faces another seed tile");
}

Seed finalize_seed(const Seed& seed, const Trace& trace, const Individual& individual, ModelKind m)
{
    std::map<Coord, const Accretion*> at;
    for (const auto& a : trace) at[a.pos] = &a;

    Seed out = seed;
    const int sides = sides_per_tile(m);
    for (auto& st : out.tiles) {
        for (int d = 0; d < sides; ++d) {
            Label& side = st.tile.side(d);
            if (!side.is_wildcard()) continue;
            const auto it = at.find(st.offset + direction_vector(d));
            if (it == at.end()) {
                side = Label::epsilon();
                continue;
            }
            const Accretion& a = *it->second;
            const TileType placed =
                apply_orientation(individual.genome.at(static_cast<std::size_t>(a.type)), m, a.orientation);
            const Label& facing = placed.side(opposite(d));
            side = facing.is_epsilon() || facing.is_wildcard() ? Label::epsilon() : resolve_wildcard(facing);
        }
    }
    return out;
}

}  // namespace mtsp
