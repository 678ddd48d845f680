#include "mtsp/verifier.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "mtsp/simulator.hpp"

namespace mtsp {

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

struct Move {
    Coord pos;
    int type;
    int orientation;
};

class Explorer {
public:
    Explorer(const std::vector<TileType>& tiles, const Seed& seed, const Shape& target, int tau, ModelKind m,
             const VerifyOptions& opts)
        : target_(target), tau_(tau), m_(m), opts_(opts), sides_(sides_per_tile(m)), max_bonds_(max_bonds(target))
    {
        for (std::size_t i = 0; i < tiles.size(); ++i)
            for (int k = 0; k < orientation_count(m); ++k)
                oriented_.push_back({static_cast<int>(i), k, apply_orientation(tiles[i], m, k)});
        for (const auto& st : seed.tiles) placed_[st.offset] = st.tile;
        for (const auto& [pos, t] : placed_)
            for (int d = 0; d < sides_; ++d) {
                const auto it = placed_.find(pos + direction_vector(d));
                if (it == placed_.end()) continue;
                const Label& a = t.side(d);
                const Label& b = it->second.side(opposite(d));
                if (!a.is_wildcard() && !b.is_wildcard() && labels_bind(a, b, m)) ++bonds_;
            }
        bonds_ /= 2;
    }

    VerifyReport run()
    {
        explore();
        VerifyReport r;
        r.states = seen_.size();
        r.maximal_objects = maximal_;
        r.witness_for = witness_for_;
        r.witness = witness_;
        const bool complete = !over_budget_ && !unbounded_;
        r.termination = unbounded_ ? Verdict::Fail : (over_budget_ ? Verdict::Inconclusive : Verdict::Pass);
        r.unicity = shape_failed_ ? Verdict::Fail : (complete ? Verdict::Pass : Verdict::Inconclusive);
        r.fullness = bonds_failed_ ? Verdict::Fail : (complete ? Verdict::Pass : Verdict::Inconclusive);
        return r;
    }

private:
    bool stopped() const { return over_budget_ || unbounded_; }

    std::string key() const
    {
        std::string k;
        k.reserve(placed_.size() * (12 + 4 * static_cast<std::size_t>(sides_)));
        auto put = [&k](const void* p, std::size_t n) { k.append(static_cast<const char*>(p), n); };
        for (const auto& [pos, t] : placed_) {
            put(&pos.x, sizeof pos.x);
            put(&pos.y, sizeof pos.y);
            put(&pos.z, sizeof pos.z);
            for (int d = 0; d < sides_; ++d) {
                const Label& l = t.side(d);
                put(&l.id, sizeof l.id);
                k.push_back(static_cast<char>(l.polarity));
                k.push_back(static_cast<char>(l.intensity));
            }
        }
        return k;
    }

    // Empty cells adjacent to the object and reachable from outside its bounding box.
    std::vector<Coord> exterior_frontier() const
    {
        Coord lo = placed_.begin()->first;
        Coord hi = lo;
        for (const auto& [p, t] : placed_) {
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
        }
        const int dz = sides_ == 6 ? 1 : 0;
        lo = lo - Coord{1, 1, dz};
        hi = hi + Coord{1, 1, dz};
        const Coord ext = hi - lo + Coord{1, 1, 1};
        auto idx = [&](const Coord& c) {
            const Coord d = c - lo;
            return static_cast<std::size_t>(d.x + ext.x * (d.y + ext.y * d.z));
        };
        std::vector<char> outside(static_cast<std::size_t>(ext.x) * static_cast<std::size_t>(ext.y) *
                                      static_cast<std::size_t>(ext.z),
                                  0);
        std::vector<Coord> stack{lo};
        outside[idx(lo)] = 1;
        while (!stack.empty()) {
            const Coord c = stack.back();
            stack.pop_back();
            for (int d = 0; d < sides_; ++d) {
                const Coord q = c + direction_vector(d);
                if (q.x < lo.x || q.y < lo.y || q.z < lo.z || q.x > hi.x || q.y > hi.y || q.z > hi.z) continue;
                if (outside[idx(q)] || placed_.count(q)) continue;
                outside[idx(q)] = 1;
                stack.push_back(q);
            }
        }
        std::vector<Coord> out;
        for (const auto& [p, t] : placed_)
            for (int d = 0; d < sides_; ++d) {
                const Coord q = p + direction_vector(d);
                if (outside[idx(q)] && std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    NeighborView view(const Coord& c) const
    {
        NeighborView nv;
        for (int d = 0; d < sides_; ++d) {
            const auto it = placed_.find(c + direction_vector(d));
            if (it == placed_.end()) continue;
            nv.present[static_cast<std::size_t>(d)] = true;
            nv.facing[static_cast<std::size_t>(d)] = it->second.side(opposite(d));
        }
        return nv;
    }

    void record(int constraint)
    {
        if (witness_for_ != 0) return;
        witness_for_ = constraint;
        witness_ = path_;
    }

    void explore()
    {
        if (stopped()) return;
        if (!seen_.insert(key()).second) return;
        if (seen_.size() > opts_.state_budget) {
            over_budget_ = true;
            return;
        }
        if (static_cast<int>(placed_.size()) > opts_.bound) {
            unbounded_ = true;
            record(1);
            return;
        }
        bool any = false;
        for (const auto& c : exterior_frontier()) {
            const NeighborView nv = view(c);
            for (const auto& o : oriented_) {
                const Admissibility a = placement_admissible(o.sides, nv, tau_, m_);
                if (!a.admissible) continue;
                any = true;
                descend(c, o, a);
                if (stopped()) return;
            }
        }
        if (any) return;
        ++maximal_;
        std::vector<Coord> cells;
        for (const auto& [p, t] : placed_) cells.push_back(p);
        if (!same_shape(cells, target_, m_)) {
            shape_failed_ = true;
            record(2);
        }
        if (bonds_ < max_bonds_) {
            bonds_failed_ = true;
            record(3);
        }
    }

    void descend(const Coord& c, const OrientedTile& o, const Admissibility& a)
    {
        // bind, resolving seed wildcards, and remember what to undo
        std::vector<std::pair<Coord, int>> resolved;
        for (int d = 0; d < sides_; ++d) {
            const auto it = placed_.find(c + direction_vector(d));
            if (it == placed_.end()) continue;
            Label& b = it->second.side(opposite(d));
            if (b.is_wildcard() && !o.sides.side(d).is_epsilon()) {
                b = resolve_wildcard(o.sides.side(d));
                resolved.emplace_back(it->first, opposite(d));
            }
        }
        placed_[c] = o.sides;
        bonds_ += a.bonds;
        path_.push_back(Accretion{static_cast<int>(path_.size()) + 2, c, o.type, o.orientation, a.bonds, a.bond_sum,
                                  false});
        explore();
        path_.pop_back();
        bonds_ -= a.bonds;
        placed_.erase(c);
        for (const auto& [p, d] : resolved) placed_[p].side(d) = Label::wildcard();
    }

    const Shape& target_;
    int tau_;
    ModelKind m_;
    VerifyOptions opts_;
    int sides_;
    int max_bonds_;
    std::vector<OrientedTile> oriented_;
    std::map<Coord, TileType> placed_;
    int bonds_ = 0;
    Trace path_;
    std::unordered_set<std::string> seen_;
    std::size_t maximal_ = 0;
    bool over_budget_ = false;
    bool unbounded_ = false;
    bool shape_failed_ = false;
    bool bonds_failed_ = false;
    int witness_for_ = 0;
    Trace witness_;
};

}  // namespace

VerifyReport exhaustive_verify(const std::vector<TileType>& tiles, const Seed& seed, const Shape& target, int tau,
                               ModelKind m, const VerifyOptions& opts)
{
    validate_seed(seed, m);
    if (opts.bound < static_cast<int>(target.size())) throw std::invalid_argument("bound is smaller than the target");
    if (tau < 1) throw std::invalid_argument("temperature must be at least 1");
    for (const auto& t : tiles)
        if (t.side_count != sides_per_tile(m)) throw std::invalid_argument("tile side count does not match the model");
    return Explorer(tiles, seed, target, tau, m, opts).run();
}

std::string format_report(const VerifyReport& r, int dims)
{
    std::ostringstream out;
    out << "C1=" << to_string(r.termination) << '\n';
    out << "C2=" << to_string(r.unicity) << '\n';
    out << "C3=" << to_string(r.fullness) << '\n';
    out << "states=" << r.states << " maximal=" << r.maximal_objects << '\n';
    if (r.witness_for != 0) {
        out << "witness C" << r.witness_for << '\n';
        out << format_trace(r.witness, dims);
    }
    return out.str();
}

}  // namespace mtsp
