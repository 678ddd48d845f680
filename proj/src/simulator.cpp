#include "mtsp/simulator.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mtsp {

// ---------------------------------------------------------------------------
// Lattice
// ---------------------------------------------------------------------------

Lattice::Lattice(int dims, int extent) : dims_(dims), extent_(extent)
{
    if (dims != 2 && dims != 3) throw std::invalid_argument("lattice must be 2- or 3-dimensional");
    if (extent < 3) throw std::invalid_argument("lattice extent must be at least 3");
    cells_ = static_cast<std::size_t>(extent) * static_cast<std::size_t>(extent);
    if (dims == 3) cells_ *= static_cast<std::size_t>(extent);
    // one immutable table per geometry, shared across simulations and threads
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const std::vector<std::uint32_t>>> cache;
    const std::lock_guard lock(mutex);
    auto& table = cache[{dims, extent}];
    if (!table) {
        const int sides = 2 * dims;
        auto t = std::make_shared<std::vector<std::uint32_t>>(cells_ * static_cast<std::size_t>(sides));
        for (std::size_t c = 0; c < cells_; ++c)
            for (int d = 0; d < sides; ++d)
                (*t)[c * static_cast<std::size_t>(sides) + static_cast<std::size_t>(d)] =
                    static_cast<std::uint32_t>(index(coords(c) + direction_vector(d)));
        table = std::move(t);
    }
    neighbors_ = table;
}

Coord Lattice::wrap(Coord c) const
{
    auto w = [this](int v) { return ((v % extent_) + extent_) % extent_; };
    return {w(c.x), w(c.y), dims_ == 3 ? w(c.z) : 0};
}

std::size_t Lattice::index(Coord c) const
{
    const Coord w = wrap(c);
    const auto e = static_cast<std::size_t>(extent_);
    return static_cast<std::size_t>(w.x) + e * (static_cast<std::size_t>(w.y) + e * static_cast<std::size_t>(w.z));
}

Coord Lattice::coords(std::size_t cell) const
{
    const auto e = static_cast<std::size_t>(extent_);
    return {static_cast<int>(cell % e), static_cast<int>((cell / e) % e), static_cast<int>(cell / (e * e))};
}


Coord Lattice::center() const
{
    const int c = extent_ / 2;
    return {c, c, dims_ == 3 ? c : 0};
}

// ---------------------------------------------------------------------------
// Temperature rule
// ---------------------------------------------------------------------------

Admissibility placement_admissible(const TileType& oriented, const NeighborView& nv, int tau, ModelKind m)
{
    Admissibility r;
    int essential_bonds = 0;
    int essential_sum = 0;
    for (int d = 0; d < oriented.side_count; ++d) {
        if (!nv.present[static_cast<std::size_t>(d)]) continue;
        const Label& a = oriented.side(d);
        const Label& b = nv.facing[static_cast<std::size_t>(d)];
        if (a.is_epsilon() || b.is_epsilon()) continue;
        if (!labels_bind(a, b, m)) return {false, 0, 0};
        const int i = bond_intensity(a, b);
        ++r.bonds;
        r.bond_sum += i;
        if (!nv.closer[static_cast<std::size_t>(d)]) {
            ++essential_bonds;
            essential_sum += i;
        }
    }
    r.admissible = essential_bonds >= 1 && essential_sum >= tau && essential_bonds < oriented.side_count;
    return r;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

Assembly::Assembly(const SimConfig& cfg, const Seed& seed)
    : cfg_(cfg), lattice_(dimensions(cfg.model), cfg.extent)
{
    validate_seed(seed, cfg.model);
    const int dims = lattice_.dims();
    Coord lo = seed.tiles.front().offset;
    Coord hi = lo;
    for (const auto& st : seed.tiles) {
        lo = {std::min(lo.x, st.offset.x), std::min(lo.y, st.offset.y), std::min(lo.z, st.offset.z)};
        hi = {std::max(hi.x, st.offset.x), std::max(hi.y, st.offset.y), std::max(hi.z, st.offset.z)};
    }
    if (hi.x - lo.x + 1 >= cfg.extent || hi.y - lo.y + 1 >= cfg.extent || (dims == 3 && hi.z - lo.z + 1 >= cfg.extent))
        throw std::invalid_argument("seed does not fit the lattice");

    anchor_ = seed.tiles.front().offset;
    occupant_.assign(lattice_.cell_count(), -1);
    closer_.assign(lattice_.cell_count(), -1);
    stamp_.assign(lattice_.cell_count(), 0);
    owner_.assign(lattice_.cell_count(), -1);

    for (const auto& st : seed.tiles) {
        PlacedTile t;
        t.pos = st.offset;
        t.cell = cell_of(st.offset);
        t.sides = st.tile;
        t.type = -1;
        t.step = 1;
        occupant_[t.cell] = static_cast<int>(tiles_.size());
        tiles_.push_back(t);
    }
    seed_size_ = tiles_.size();

    // bonds inside the seed
    for (auto& t : tiles_)
        for (int d = 0; d < t.sides.side_count; ++d) {
            const int n = occupant_[lattice_.neighbor(t.cell, d)];
            if (n < 0) continue;
            const Label& a = t.sides.side(d);
            const Label& b = tiles_[static_cast<std::size_t>(n)].sides.side(opposite(d));
            if (!a.is_wildcard() && !b.is_wildcard() && labels_bind(a, b, cfg_.model)) ++t.bonds;
        }
    for (const auto& t : tiles_) total_bonds_ += t.bonds;
    total_bonds_ /= 2;

    // regions enclosed by the seed itself are attributed to its last tile
    if (seed_size_ > 1)
        for (const auto c : enclosed_cells_by_flood_fill()) closer_[c] = static_cast<int>(seed_size_) - 1;
}

std::size_t Assembly::cell_of(Coord pos) const
{
    return lattice_.index(lattice_.center() + pos - anchor_);
}

NeighborView Assembly::view(std::size_t cell) const
{
    NeighborView nv;
    const int sides = sides_per_tile(cfg_.model);
    for (int d = 0; d < sides; ++d) {
        const int n = occupant_[lattice_.neighbor(cell, d)];
        if (n < 0) continue;
        const auto du = static_cast<std::size_t>(d);
        nv.present[du] = true;
        nv.facing[du] = tiles_[static_cast<std::size_t>(n)].sides.side(opposite(d));
        nv.closer[du] = closer_[cell] == n;
    }
    return nv;
}

Admissibility Assembly::admissible(std::size_t cell, const TileType& oriented) const
{
    return placement_admissible(oriented, view(cell), cfg_.tau, cfg_.model);
}

HollowStatus Assembly::hollow_check(std::size_t cell) const
{
    if (occupied(cell) || closer_[cell] < 0) return {};
    return {true, closer_[cell]};
}

Assembly::Placement Assembly::place(std::size_t cell, Coord pos, const TileType& oriented, int type, int orientation)
{
    if (occupied(cell)) throw std::logic_error("placement on an occupied cell");
    Placement res;
    res.hollow = closer_[cell] >= 0;
    const int idx = static_cast<int>(tiles_.size());

    PlacedTile t;
    t.cell = cell;
    t.pos = pos;
    t.sides = oriented;
    t.type = type;
    t.orientation = orientation;
    t.step = idx - static_cast<int>(seed_size_) + 2;
    for (int d = 0; d < oriented.side_count; ++d) {
        const int n = occupant_[lattice_.neighbor(cell, d)];
        if (n < 0) continue;
        PlacedTile& other = tiles_[static_cast<std::size_t>(n)];
        const Label& a = oriented.side(d);
        Label& b = other.sides.side(opposite(d));
        if (a.is_epsilon() || b.is_epsilon() || !labels_bind(a, b, cfg_.model)) continue;
        ++res.bonds;
        res.bond_sum += bond_intensity(a, b);
        ++other.bonds;
        if (b.is_wildcard()) b = resolve_wildcard(a);
    }
    t.bonds = res.bonds;
    tiles_.push_back(t);
    occupant_[cell] = idx;
    total_bonds_ += res.bonds;
    if (!res.hollow) update_hollows(cell, idx, res.enclosed);
    return res;
}

bool Assembly::locally_connected(std::size_t cell, const std::vector<std::size_t>& sources)
{
    // flood fill through the empty cells of the 3^d block around `cell`
    const int dims = lattice_.dims();
    const Coord c = lattice_.coords(cell);
    const int zr = dims == 3 ? 1 : 0;
    std::array<std::size_t, 27> idx{};
    std::array<bool, 27> open{};
    auto slot = [](int dx, int dy, int dz) { return static_cast<std::size_t>((dx + 1) + 3 * (dy + 1) + 9 * (dz + 1)); };
    for (int dz = -zr; dz <= zr; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                const std::size_t q = lattice_.index(c + Coord{dx, dy, dz});
                idx[slot(dx, dy, dz)] = q;
                open[slot(dx, dy, dz)] = !occupied(q);
            }
    std::array<bool, 27> seen{};
    std::array<std::size_t, 27> stack{};
    std::size_t top = 0;
    // sources are face neighbours; find the slot of the first
    int start_dir = -1;
    for (int d = 0; d < sides_per_tile(cfg_.model) && start_dir < 0; ++d)
        if (lattice_.neighbor(cell, d) == sources.front()) start_dir = d;
    const Coord sv = direction_vector(start_dir);
    stack[top++] = slot(sv.x, sv.y, sv.z);
    seen[stack[0]] = true;
    while (top > 0) {
        const std::size_t s = stack[--top];
        const int dx = static_cast<int>(s % 3) - 1;
        const int dy = static_cast<int>((s / 3) % 3) - 1;
        const int dz = static_cast<int>(s / 9) - 1;
        for (int d = 0; d < sides_per_tile(cfg_.model); ++d) {
            const Coord v = direction_vector(d);
            const int nx = dx + v.x, ny = dy + v.y, nz = dz + v.z;
            if (nx < -1 || nx > 1 || ny < -1 || ny > 1 || nz < -zr || nz > zr) continue;
            if (nx == 0 && ny == 0 && nz == 0) continue;
            const std::size_t ns = slot(nx, ny, nz);
            if (!open[ns] || seen[ns]) continue;
            seen[ns] = true;
            stack[top++] = ns;
        }
    }
    for (const auto src : sources) {
        bool found = false;
        for (std::size_t s = 0; s < 27 && !found; ++s)
            if (seen[s] && idx[s] == src) found = true;
        if (!found) return false;
    }
    return true;
}

void Assembly::update_hollows(std::size_t cell, int closer, std::vector<std::size_t>& enclosed)
{
    std::vector<std::size_t> sources;
    for (int d = 0; d < sides_per_tile(cfg_.model); ++d) {
        const std::size_t q = lattice_.neighbor(cell, d);
        if (!occupied(q) && std::find(sources.begin(), sources.end(), q) == sources.end()) sources.push_back(q);
    }
    if (sources.size() < 2 || locally_connected(cell, sources)) return;

    // Interleaved breadth-first search from every empty neighbour. Searches
    // that meet merge; a search that runs dry while another is still
    // expanding has found an enclosed region.
    if (++stamp_value_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        stamp_value_ = 1;
    }
    struct Group {
        std::deque<std::size_t> queue;
        std::vector<std::size_t> cells;
        bool exhausted = false;
    };
    const std::size_t k = sources.size();
    std::vector<Group> groups(k);
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < k; ++i) {
        stamp_[sources[i]] = stamp_value_;
        owner_[sources[i]] = static_cast<int>(i);
        groups[i].queue.push_back(sources[i]);
        groups[i].cells.push_back(sources[i]);
    }
    std::size_t roots = k;
    const int sides = sides_per_tile(cfg_.model);
    while (true) {
        std::size_t live = 0;
        for (std::size_t r = 0; r < k; ++r)
            if (find(r) == r && !groups[r].exhausted) ++live;
        if (live <= 1) break;
        for (std::size_t r0 = 0; r0 < k; ++r0) {
            std::size_t r = r0;
            if (find(r) != r || groups[r].exhausted) continue;
            if (groups[r].queue.empty()) {
                groups[r].exhausted = true;
                continue;
            }
            const std::size_t c = groups[r].queue.front();
            groups[r].queue.pop_front();
            for (int d = 0; d < sides; ++d) {
                const std::size_t q = lattice_.neighbor(c, d);
                if (occupied(q)) continue;
                if (stamp_[q] == stamp_value_) {
                    std::size_t o = find(static_cast<std::size_t>(owner_[q]));
                    if (o == r) continue;
                    // merge the smaller search into the larger
                    std::size_t big = r, small = o;
                    if (groups[big].cells.size() < groups[small].cells.size()) std::swap(big, small);
                    auto& gb = groups[big];
                    auto& gs = groups[small];
                    gb.queue.insert(gb.queue.end(), gs.queue.begin(), gs.queue.end());
                    gb.cells.insert(gb.cells.end(), gs.cells.begin(), gs.cells.end());
                    gb.exhausted = false;
                    gs = Group{};
                    parent[small] = big;
                    r = big;
                    if (--roots == 1) return;
                } else {
                    stamp_[q] = stamp_value_;
                    owner_[q] = static_cast<int>(r);
                    groups[r].queue.push_back(q);
                    groups[r].cells.push_back(q);
                }
            }
        }
    }

    std::size_t main = k;
    for (std::size_t r = 0; r < k; ++r)
        if (find(r) == r && !groups[r].exhausted) main = r;
    if (main == k)
        for (std::size_t r = 0; r < k; ++r)
            if (find(r) == r) {
                if (main == k) {
                    main = r;
                    continue;
                }
                const auto& a = groups[r].cells;
                const auto& b = groups[main].cells;
                // ties go to the region holding the lowest cell index, as in the full flood fill
                if (a.size() > b.size() ||
                    (a.size() == b.size() && *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end())))
                    main = r;
            }
    for (std::size_t r = 0; r < k; ++r) {
        if (find(r) != r || r == main) continue;
        for (const auto q : groups[r].cells) {
            closer_[q] = closer;
            enclosed.push_back(q);
        }
    }
}

std::vector<std::size_t> Assembly::enclosed_cells_by_flood_fill() const
{
    const std::size_t n = lattice_.cell_count();
    std::vector<int> comp(n, -1);
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (occupied(s) || comp[s] >= 0) continue;
        const int id = static_cast<int>(sizes.size());
        std::size_t size = 0;
        comp[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t c = stack.back();
            stack.pop_back();
            ++size;
            for (int d = 0; d < sides_per_tile(cfg_.model); ++d) {
                const std::size_t q = lattice_.neighbor(c, d);
                if (!occupied(q) && comp[q] < 0) {
                    comp[q] = id;
                    stack.push_back(q);
                }
            }
        }
        sizes.push_back(size);
    }
    if (sizes.empty()) return {};
    const int main = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < n; ++s)
        if (!occupied(s) && comp[s] != main) out.push_back(s);
    return out;
}

// ---------------------------------------------------------------------------
// AssemblyState
// ---------------------------------------------------------------------------

std::vector<OrientedTile> expand_orientations(const Individual& individual, ModelKind m)
{
    std::vector<OrientedTile> out;
    const int rho = orientation_count(m);
    out.reserve(individual.genome.size() * static_cast<std::size_t>(rho));
    for (std::size_t i = 0; i < individual.genome.size(); ++i)
        for (int k = 0; k < rho; ++k)
            out.push_back({static_cast<int>(i), k, apply_orientation(individual.genome[i], m, k)});
    return out;
}

AssemblyState::AssemblyState(const Individual& individual, const Seed& seed, const SimConfig& cfg)
    : cfg_(cfg),
      assembly_(cfg, seed),
      oriented_(expand_orientations(individual, cfg.model)),
      slot_(assembly_.lattice().cell_count(), -1),
      used_(individual.genome.size(), false)
{
    for (const auto& tp : individual.genome)
        if (tp.side_count != sides_per_tile(cfg.model))
            throw std::invalid_argument("genome tile side count does not match the model");
    for (std::size_t o = 0; o < oriented_.size(); ++o)
        for (int d = 0; d < sides_per_tile(cfg.model); ++d) {
            const Label& l = oriented_[o].sides.side(d);
            if (l.is_epsilon()) continue;
            by_side_label_[static_cast<std::size_t>(d)][l.id].push_back(static_cast<int>(o));
            any_label_[static_cast<std::size_t>(d)].push_back(static_cast<int>(o));
        }
    const auto& lat = assembly_.lattice();
    for (std::size_t i = 0; i < assembly_.seed_size(); ++i)
        for (int d = 0; d < sides_per_tile(cfg.model); ++d) {
            const std::size_t q = lat.neighbor(assembly_.tiles()[i].cell, d);
            if (!assembly_.occupied(q)) refresh(q);
        }
}

const std::vector<int>& AssemblyState::binders(int d, const Label& facing) const
{
    static const std::vector<int> none;
    const auto& by_id = by_side_label_[static_cast<std::size_t>(d)];
    if (facing.is_wildcard()) return any_label_[static_cast<std::size_t>(d)];
    const auto it = by_id.find(facing.id);
    return it == by_id.end() ? none : it->second;
}

std::size_t AssemblyState::candidate_count() const
{
    std::size_t n = 0;
    for (const auto& op : open_) n += op.candidates.size();
    return n;
}

AssemblyState::PositionEval AssemblyState::evaluate(std::size_t cell) const
{
    PositionEval ev;
    const auto& lat = assembly_.lattice();
    const auto& tiles = assembly_.tiles();
    const int sides = sides_per_tile(cfg_.model);
    std::array<Coord, kMaxSides> implied{};
    std::array<bool, kMaxSides> present{};
    bool any = false;
    bool consistent = true;
    for (int d = 0; d < sides; ++d) {
        const int n = assembly_.occupant(lat.neighbor(cell, d));
        if (n < 0) continue;
        const auto du = static_cast<std::size_t>(d);
        present[du] = true;
        implied[du] = tiles[static_cast<std::size_t>(n)].pos - direction_vector(d);
        if (any && implied[du] != ev.pos) consistent = false;
        if (!any) ev.pos = implied[du];
        any = true;
    }
    if (!any) return ev;

    const NeighborView nv = assembly_.view(cell);
    if (consistent) {
        ev.kind = Kind::Open;
        // an admissible tile binds at least one neighbour, so only those are tried
        auto& pool = pool_;
        pool.clear();
        for (int d = 0; d < sides; ++d) {
            const auto du = static_cast<std::size_t>(d);
            if (!present[du] || nv.facing[du].is_epsilon()) continue;
            const auto& b = binders(d, nv.facing[du]);
            pool.insert(pool.end(), b.begin(), b.end());
        }
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
        for (const int o : pool) {
            const Admissibility a =
                placement_admissible(oriented_[static_cast<std::size_t>(o)].sides, nv, cfg_.tau, cfg_.model);
            if (a.admissible) ev.candidates.push_back({o, a.bonds, a.bond_sum});
        }
        return ev;
    }

    // The object would touch itself through the periodic boundary. Each
    // group of neighbours agreeing on the unwrapped position is tried alone.
    ev.kind = Kind::Collision;
    for (int g = 0; g < sides && !ev.collision_admissible; ++g) {
        if (!present[static_cast<std::size_t>(g)]) continue;
        NeighborView part;
        for (int d = 0; d < sides; ++d) {
            const auto du = static_cast<std::size_t>(d);
            if (present[du] && implied[du] == implied[static_cast<std::size_t>(g)]) {
                part.present[du] = true;
                part.facing[du] = nv.facing[du];
                part.closer[du] = nv.closer[du];
            }
        }
        for (const auto& o : oriented_)
            if (placement_admissible(o.sides, part, cfg_.tau, cfg_.model).admissible) {
                ev.collision_admissible = true;
                break;
            }
    }
    return ev;
}

void AssemblyState::remove_slot(std::size_t cell)
{
    const int s = slot_[cell];
    if (s < 0) return;
    total_weight_ -= open_[static_cast<std::size_t>(s)].weight;
    if (static_cast<std::size_t>(s) != open_.size() - 1) {
        open_[static_cast<std::size_t>(s)] = std::move(open_.back());
        slot_[open_[static_cast<std::size_t>(s)].cell] = s;
    }
    open_.pop_back();
    slot_[cell] = -1;
}

void AssemblyState::refresh(std::size_t cell)
{
    PositionEval ev = evaluate(cell);
    if (ev.kind != Kind::Open) {
        if (ev.kind == Kind::Collision && ev.collision_admissible) collision_ = true;
        remove_slot(cell);
        return;
    }
    if (slot_[cell] < 0) {
        slot_[cell] = static_cast<int>(open_.size());
        open_.push_back(OpenPosition{cell, ev.pos, {}, 0});
    }
    OpenPosition& op = open_[static_cast<std::size_t>(slot_[cell])];
    total_weight_ -= op.weight;
    op.pos = ev.pos;
    op.candidates = std::move(ev.candidates);
    op.weight = 0;
    for (const auto& c : op.candidates) op.weight += c.bond_sum;
    total_weight_ += op.weight;
}

void AssemblyState::step(Rng& rng)
{
    if (total_weight_ <= 0) throw std::logic_error("step on an empty candidate list");
    long r = std::uniform_int_distribution<long>(0, total_weight_ - 1)(rng);
    for (std::size_t s = 0; s < open_.size(); ++s) {
        if (r >= open_[s].weight) {
            r -= open_[s].weight;
            continue;
        }
        const auto& cands = open_[s].candidates;
        for (std::size_t c = 0; c < cands.size(); ++c) {
            if (r < cands[c].bond_sum) {
                apply(s, c);
                return;
            }
            r -= cands[c].bond_sum;
        }
    }
    throw std::logic_error("candidate weights out of sync");
}

void AssemblyState::apply(std::size_t slot, std::size_t which)
{
    const std::size_t cell = open_.at(slot).cell;
    const Coord pos = open_[slot].pos;
    const Candidate cand = open_[slot].candidates.at(which);
    const OrientedTile& o = oriented_[static_cast<std::size_t>(cand.oriented)];

    const auto placement = assembly_.place(cell, pos, o.sides, o.type, o.orientation);
    trace_.push_back(Accretion{assembly_.tiles().back().step, pos, o.type, o.orientation, placement.bonds,
                               placement.bond_sum, placement.hollow});
    used_[static_cast<std::size_t>(o.type)] = true;
    remove_slot(cell);

    const auto& lat = assembly_.lattice();
    for (int d = 0; d < sides_per_tile(cfg_.model); ++d) {
        const std::size_t q = lat.neighbor(cell, d);
        if (!assembly_.occupied(q)) refresh(q);
    }
    for (const auto q : placement.enclosed)
        if (slot_[q] >= 0) refresh(q);
}

AssemblyState::Snapshot AssemblyState::recompute() const
{
    Snapshot snap;
    const auto& lat = assembly_.lattice();
    std::vector<std::size_t> cells;
    for (const auto& t : assembly_.tiles())
        for (int d = 0; d < sides_per_tile(cfg_.model); ++d) {
            const std::size_t q = lat.neighbor(t.cell, d);
            if (!assembly_.occupied(q)) cells.push_back(q);
        }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (const auto c : cells) {
        PositionEval ev = evaluate(c);
        if (ev.kind == Kind::Collision && ev.collision_admissible) snap.collision_possible = true;
        if (ev.kind != Kind::Open) continue;
        OpenPosition op{c, ev.pos, std::move(ev.candidates), 0};
        for (const auto& cand : op.candidates) op.weight += cand.bond_sum;
        snap.positions.push_back(std::move(op));
    }
    return snap;
}

AssemblyState::Snapshot AssemblyState::snapshot() const
{
    Snapshot snap;
    snap.collision_possible = collision_;
    snap.positions = open_;
    for (auto& op : snap.positions) std::sort(op.candidates.begin(), op.candidates.end());
    std::sort(snap.positions.begin(), snap.positions.end(),
              [](const OpenPosition& a, const OpenPosition& b) { return a.cell < b.cell; });
    return snap;
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

SimOutcome simulate_once(const Individual& individual, const Seed& seed, const SimConfig& cfg, Rng& rng)
{
    if (cfg.max_tiles < 1) throw std::invalid_argument("max_tiles must be at least 1");
    AssemblyState state(individual, seed, cfg);
    while (state.has_candidates() && static_cast<int>(state.size()) < cfg.max_tiles) state.step(rng);

    SimOutcome out;
    out.terminal = !state.has_candidates() && !state.collision();
    out.collision = state.collision();
    out.trace = state.trace();
    out.used = state.used();
    out.bonds = state.assembly().total_bonds();
    out.runs = 1;
    for (const auto& t : state.assembly().tiles()) out.cells.push_back(t.pos);
    out.seed = finalize_seed(seed, out.trace, individual, cfg.model);
    return out;
}

SimOutcome simulate(const Individual& individual, const Seed& seed, const SimConfig& cfg, std::uint64_t stream_seed)
{
    if (cfg.max_sims < 1) throw std::invalid_argument("max_sims must be at least 1");
    SimOutcome best;
    bool have = false;
    for (int k = 0; k < cfg.max_sims; ++k) {
        Rng rng = make_rng(stream_seed, {static_cast<std::uint64_t>(k)});
        SimOutcome out = simulate_once(individual, seed, cfg, rng);
        out.runs = k + 1;
        if (out.terminal) return out;
        if (!have || out.size() < best.size()) {
            best = std::move(out);
            have = true;
        }
    }
    best.runs = cfg.max_sims;
    return best;
}

// ---------------------------------------------------------------------------
// Trace text
// ---------------------------------------------------------------------------

std::string format_accretion(const Accretion& a, int dims)
{
    std::ostringstream out;
    out << "u=" << a.step << " pos=" << format_coord(a.pos, dims) << " type=" << a.type << " orient=" << a.orientation
        << " bonds=" << a.bonds << " sum=" << a.bond_sum << " hollow=" << (a.hollow ? 1 : 0);
    return out.str();
}

std::string format_trace(const Trace& trace, int dims)
{
    std::string s;
    for (const auto& a : trace) s += format_accretion(a, dims) + '\n';
    return s;
}

Trace parse_trace(std::string_view text)
{
    Trace trace;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string tok;
        Accretion a;
        int fields = 0;
        while (ls >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("trace line " + std::to_string(line_no));
            const std::string key = tok.substr(0, eq);
            const std::string val = tok.substr(eq + 1);
            if (key == "pos") {
                std::vector<int> xyz;
                std::istringstream cs(val);
                std::string part;
                while (std::getline(cs, part, ',')) xyz.push_back(std::stoi(part));
                if (xyz.size() < 2 || xyz.size() > 3) throw std::invalid_argument("trace pos " + val);
                a.pos = {xyz[0], xyz[1], xyz.size() == 3 ? xyz[2] : 0};
            } else {
                const int v = std::stoi(val);
                if (key == "u") a.step = v;
                else if (key == "type") a.type = v;
                else if (key == "orient") a.orientation = v;
                else if (key == "bonds") a.bonds = v;
                else if (key == "sum") a.bond_sum = v;
                else if (key == "hollow") a.hollow = v != 0;
                else throw std::invalid_argument("trace key " + key);
            }
            ++fields;
        }
        if (fields != 7) throw std::invalid_argument("trace line " + std::to_string(line_no) + " needs 7 fields");
        trace.push_back(a);
    }
    return trace;
}

}  // namespace mtsp
