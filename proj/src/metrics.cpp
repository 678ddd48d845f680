#include "mtsp/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mtsp {

namespace {

constexpr std::size_t kDenseVoteLimit = std::size_t{1} << 24;

struct Box {
    Coord lo, hi;
};

Box bounds(const std::vector<Coord>& cells)
{
    Box b{cells.front(), cells.front()};
    for (const auto& c : cells) {
        b.lo = {std::min(b.lo.x, c.x), std::min(b.lo.y, c.y), std::min(b.lo.z, c.z)};
        b.hi = {std::max(b.hi.x, c.x), std::max(b.hi.y, c.y), std::max(b.hi.z, c.z)};
    }
    return b;
}

// Empty cells next to the object whose neighbours agree on where they are.
std::vector<std::size_t> frontier_cells(const Assembly& as)
{
    const auto& lat = as.lattice();
    const int sides = lat.dims() == 3 ? 6 : 4;
    std::set<std::size_t> cells;
    for (const auto& t : as.tiles())
        for (int d = 0; d < sides; ++d) {
            const std::size_t q = lat.neighbor(t.cell, d);
            if (!as.occupied(q)) cells.insert(q);
        }
    std::vector<std::size_t> out;
    for (const auto c : cells) {
        bool consistent = true;
        bool any = false;
        Coord implied;
        for (int d = 0; d < sides && consistent; ++d) {
            const int n = as.occupant(lat.neighbor(c, d));
            if (n < 0) continue;
            const Coord p = as.tiles()[static_cast<std::size_t>(n)].pos - direction_vector(d);
            if (any && p != implied) consistent = false;
            implied = p;
            any = true;
        }
        if (consistent) out.push_back(c);
    }
    return out;
}

bool fits_somewhere(const Assembly& as, const std::vector<std::size_t>& cells, const std::vector<TileType>& orientations)
{
    for (const auto& o : orientations)
        for (const auto c : cells)
            if (as.admissible(c, o).admissible) return true;
    return false;
}

}  // namespace

Shape shape_from_cells(std::vector<Coord> cells, int dims)
{
    if (cells.empty()) throw std::invalid_argument("shape has no cells");
    if (dims != 2 && dims != 3) throw std::invalid_argument("shape must be 2- or 3-dimensional");
    const Box b = bounds(cells);
    for (auto& c : cells) {
        if (dims == 2 && c.z != 0) throw std::invalid_argument("planar shape with a z coordinate");
        c = c - b.lo;
    }
    std::sort(cells.begin(), cells.end());
    if (std::adjacent_find(cells.begin(), cells.end()) != cells.end())
        throw std::invalid_argument("shape repeats a cell");
    const std::set<Coord> all(cells.begin(), cells.end());
    std::set<Coord> seen{cells.front()};
    std::vector<Coord> stack{cells.front()};
    while (!stack.empty()) {
        const Coord c = stack.back();
        stack.pop_back();
        for (int d = 0; d < 2 * dims; ++d) {
            const Coord q = c + direction_vector(d);
            if (all.count(q) && seen.insert(q).second) stack.push_back(q);
        }
    }
    if (seen.size() != all.size()) throw std::invalid_argument("shape is not connected");
    return Shape{dims, std::move(cells), 0};
}

Shape square_shape(int n)
{
    if (n < 1) throw std::invalid_argument("square side must be positive");
    std::vector<Coord> cells;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) cells.push_back({x, y, 0});
    Shape s = shape_from_cells(std::move(cells), 2);
    s.n = n;
    return s;
}

Shape cube_shape(int n)
{
    if (n < 1) throw std::invalid_argument("cube side must be positive");
    std::vector<Coord> cells;
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) cells.push_back({x, y, z});
    Shape s = shape_from_cells(std::move(cells), 3);
    s.n = n;
    return s;
}

Shape parse_shape(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::vector<Coord> cells;
    int dims = 0;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::vector<int> v;
        int x = 0;
        while (ls >> x) v.push_back(x);
        if (!ls.eof()) throw std::invalid_argument("shape line " + std::to_string(line_no) + ": not an integer");
        if (v.empty()) continue;
        if (v.size() != 2 && v.size() != 3)
            throw std::invalid_argument("shape line " + std::to_string(line_no) + ": need 2 or 3 coordinates");
        if (dims == 0) dims = static_cast<int>(v.size());
        if (dims != static_cast<int>(v.size()))
            throw std::invalid_argument("shape line " + std::to_string(line_no) + ": mixed dimensions");
        cells.push_back({v[0], v[1], v.size() == 3 ? v[2] : 0});
    }
    return shape_from_cells(std::move(cells), dims == 0 ? 2 : dims);
}

Shape read_shape_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_shape(ss.str());
}

int kappa(const std::vector<Coord>& object, const Shape& target, ModelKind m)
{
    if (object.empty() || target.cells.empty()) return 0;
    const Box tb = bounds(target.cells);
    int best = 0;
    std::vector<Coord> rotated(object.size());
    std::vector<int> votes;
    for (const auto& p : orientation_table(m)) {
        for (std::size_t i = 0; i < object.size(); ++i) rotated[i] = rotate(object[i], p);
        const Box ob = bounds(rotated);
        // translation t = target cell - object cell
        const Coord lo = tb.lo - ob.hi;
        const Coord ext = (tb.hi - ob.lo) - lo + Coord{1, 1, 1};
        const std::size_t total = static_cast<std::size_t>(ext.x) * static_cast<std::size_t>(ext.y) *
                                  static_cast<std::size_t>(ext.z);
        auto key = [&](const Coord& t, const Coord& o) {
            const Coord d = t - o - lo;
            return static_cast<std::size_t>(d.x) +
                   static_cast<std::size_t>(ext.x) *
                       (static_cast<std::size_t>(d.y) + static_cast<std::size_t>(ext.y) * static_cast<std::size_t>(d.z));
        };
        if (total <= kDenseVoteLimit) {
            votes.assign(total, 0);
            for (const auto& o : rotated)
                for (const auto& t : target.cells) best = std::max(best, ++votes[key(t, o)]);
        } else {
            std::unordered_map<std::size_t, int> sparse;
            for (const auto& o : rotated)
                for (const auto& t : target.cells) best = std::max(best, ++sparse[key(t, o)]);
        }
    }
    return best;
}

bool same_shape(const std::vector<Coord>& object, const Shape& target, ModelKind m)
{
    return object.size() == target.size() && kappa(object, target, m) == static_cast<int>(target.size());
}

int max_bonds(const Shape& s)
{
    const std::set<Coord> all(s.cells.begin(), s.cells.end());
    int pairs = 0;
    for (const auto& c : s.cells)
        for (const int d : {East, North, Up})
            if ((d != Up || s.dims == 3) && all.count(c + direction_vector(d))) ++pairs;
    return pairs;
}

std::pair<std::size_t, std::size_t> active_region(const std::vector<bool>& used)
{
    const auto first = std::find(used.begin(), used.end(), true);
    if (first == used.end()) return {0, used.empty() ? 0 : used.size() - 1};
    const auto last = std::find(used.rbegin(), used.rend(), true);
    return {static_cast<std::size_t>(first - used.begin()), static_cast<std::size_t>(used.rend() - last) - 1};
}

long alpha(const Trace& trace, const Individual& individual, const Seed& finalized_seed, const SimConfig& cfg,
           const std::vector<bool>& used, AlphaMode mode)
{
    const ModelKind m = cfg.model;
    Assembly as(cfg, finalized_seed);
    // canonical forms once per used type
    std::vector<std::size_t> used_types;
    std::vector<TileType> canon(individual.genome.size());
    std::vector<std::vector<TileType>> orientations(individual.genome.size());
    for (std::size_t j = 0; j < individual.genome.size(); ++j)
        if (j < used.size() && used[j]) {
            used_types.push_back(j);
            canon[j] = canonical_form(individual.genome[j], m);
            orientations[j] = enumerate_orientations(individual.genome[j], m);
        }

    long total = 0;
    for (const auto& a : trace) {
        const auto type = static_cast<std::size_t>(a.type);
        const std::size_t cell = as.cell_of(a.pos);
        std::vector<std::size_t> where{cell};
        if (mode == AlphaMode::Frontier) where = frontier_cells(as);
        for (const auto j : used_types) {
            if (j == type || canon[j] == canon[type]) continue;
            if (fits_somewhere(as, where, orientations[j])) ++total;
        }
        as.place(cell, a.pos, apply_orientation(individual.genome.at(type), m, a.orientation), a.type, a.orientation);
    }
    return total;
}

MetricsReport compute_metrics(const SimOutcome& outcome, const Individual& individual, const Shape& target,
                              const SimConfig& cfg, AlphaMode mode)
{
    MetricsReport r;
    r.theta = static_cast<int>(std::count(outcome.used.begin(), outcome.used.end(), true));
    r.size = outcome.size();
    r.kappa = kappa(outcome.cells, target, cfg.model);
    r.alpha = r.theta > 0 ? alpha(outcome.trace, individual, outcome.seed, cfg, outcome.used, mode) : 0;
    r.active_region = active_region(outcome.used);
    r.bonds = outcome.bonds;
    r.max_bonds = max_bonds(target);
    r.fullness = r.bonds == r.max_bonds;
    r.terminal = outcome.terminal;
    return r;
}

}  // namespace mtsp
