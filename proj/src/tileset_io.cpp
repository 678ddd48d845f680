#include "mtsp/tileset_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace mtsp {

namespace {

constexpr std::string_view kSideKeys[kMaxSides] = {"N", "E", "S", "W", "U", "D"};

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_ws(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

bool is_numeric_name(const std::string& name, std::uint16_t& id)
{
    if (name.size() < 2 || name[0] != 'l') return false;
    if (!std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return false;
    const unsigned long v = std::stoul(name.substr(1));
    if (v == 0 || v >= Label::kWildcardId) return false;
    id = static_cast<std::uint16_t>(v);
    return true;
}

int parse_int(const std::string& s, int line, const char* what)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
    }
}

struct RawSide {
    int dir = -1;
    std::string name;  // "eps", "?" or a label name
    Polarity polarity = Polarity::None;
    int intensity = 0;
};

struct RawLine {
    int line = 0;
    bool is_seed = false;
    Coord offset;
    std::vector<RawSide> sides;
};

RawSide parse_side(const std::string& tok, int line)
{
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected <side>=<label>, got '" + tok + "'");
    RawSide rs;
    const std::string key = tok.substr(0, eq);
    for (int d = 0; d < kMaxSides; ++d)
        if (key == kSideKeys[d]) rs.dir = d;
    if (rs.dir < 0) throw ParseError(line, "unknown side '" + key + "'");
    std::string val = tok.substr(eq + 1);
    if (val == "eps" || val == "?") {
        rs.name = val;
        return rs;
    }
    const auto slash = val.find('/');
    if (slash == std::string::npos) throw ParseError(line, "label '" + val + "' lacks an intensity");
    rs.intensity = parse_int(val.substr(slash + 1), line, "intensity");
    if (rs.intensity < 1 || rs.intensity > 255) throw ParseError(line, "intensity out of range in '" + val + "'");
    std::string name = val.substr(0, slash);
    if (!name.empty() && (name.back() == '+' || name.back() == '-')) {
        rs.polarity = name.back() == '+' ? Polarity::Plus : Polarity::Minus;
        name.pop_back();
    }
    if (name.empty() || name == "eps" || name.find_first_of("?=/:+-") != std::string::npos)
        throw ParseError(line, "bad label name in '" + val + "'");
    rs.name = name;
    return rs;
}

}  // namespace

std::string LabelNames::name(std::uint16_t id) const
{
    if (id == Label::kEpsilonId) return "eps";
    if (id == Label::kWildcardId) return "?";
    const auto it = by_id_.find(id);
    return it != by_id_.end() ? it->second : "l" + std::to_string(id);
}

std::optional<std::uint16_t> LabelNames::id(const std::string& name) const
{
    const auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

void LabelNames::bind(std::uint16_t id, const std::string& name)
{
    by_id_[id] = name;
    by_name_[name] = id;
}

TileSetFile parse_tileset(std::string_view text)
{
    std::vector<RawLine> raw;
    std::istringstream in{std::string(text)};
    std::string line_text;
    int line_no = 0;
    while (std::getline(in, line_text)) {
        ++line_no;
        if (const auto hash = line_text.find('#'); hash != std::string::npos) line_text.resize(hash);
        const std::string line = trim(line_text);
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError(line_no, "missing ':'");
        const auto head = split_ws(line.substr(0, colon));
        if (head.size() != 2 || (head[0] != "tile" && head[0] != "seed"))
            throw ParseError(line_no, "expected 'tile <id>:' or 'seed <x>,<y>[,<z>]:'");
        RawLine rl;
        rl.line = line_no;
        rl.is_seed = head[0] == "seed";
        if (rl.is_seed) {
            std::vector<int> xyz;
            std::istringstream cs(head[1]);
            std::string part;
            while (std::getline(cs, part, ',')) xyz.push_back(parse_int(part, line_no, "seed offset"));
            if (xyz.size() != 2 && xyz.size() != 3) throw ParseError(line_no, "seed offset needs 2 or 3 coordinates");
            rl.offset = {xyz[0], xyz[1], xyz.size() == 3 ? xyz[2] : 0};
        } else {
            parse_int(head[1], line_no, "tile id");
        }
        for (const auto& tok : split_ws(line.substr(colon + 1))) rl.sides.push_back(parse_side(tok, line_no));
        raw.push_back(std::move(rl));
    }
    if (raw.empty()) throw ParseError(line_no, "no tiles");

    TileSetFile out;
    // label ids: l<k> names keep k, other names get fresh ids above them
    std::map<std::string, int> intensity_of;
    std::set<std::string> names;
    std::uint16_t max_numeric = 0;
    for (const auto& rl : raw)
        for (const auto& s : rl.sides) {
            if (s.name == "eps" || s.name == "?") continue;
            const auto [it, fresh] = intensity_of.emplace(s.name, s.intensity);
            if (!fresh && it->second != s.intensity)
                throw ParseError(rl.line, "label '" + s.name + "' has inconsistent intensities");
            names.insert(s.name);
            std::uint16_t id = 0;
            if (is_numeric_name(s.name, id)) max_numeric = std::max(max_numeric, id);
        }
    std::uint16_t next = static_cast<std::uint16_t>(max_numeric + 1);
    std::vector<std::string> ordered_names;
    for (const auto& rl : raw)
        for (const auto& s : rl.sides)
            if (s.name != "eps" && s.name != "?" &&
                std::find(ordered_names.begin(), ordered_names.end(), s.name) == ordered_names.end())
                ordered_names.push_back(s.name);
    for (const auto& name : ordered_names) {
        std::uint16_t id = 0;
        if (!is_numeric_name(name, id)) id = next++;
        out.names.bind(id, name);
    }

    for (const auto& rl : raw) {
        const int count = static_cast<int>(rl.sides.size());
        if (count != 4 && count != 6) throw ParseError(rl.line, "a tile needs 4 or 6 sides");
        if (out.side_count == 0) out.side_count = count;
        if (count != out.side_count) throw ParseError(rl.line, "mixed 4- and 6-sided tiles");
        TileType t;
        t.side_count = static_cast<std::uint8_t>(count);
        std::array<bool, kMaxSides> seen{};
        for (const auto& s : rl.sides) {
            if (s.dir >= count) throw ParseError(rl.line, "side U/D on a square tile");
            if (seen[static_cast<std::size_t>(s.dir)]) throw ParseError(rl.line, "repeated side");
            seen[static_cast<std::size_t>(s.dir)] = true;
            if (s.name == "eps") continue;
            if (s.name == "?") {
                if (!rl.is_seed) throw ParseError(rl.line, "wildcards are only allowed on seed tiles");
                t.side(s.dir) = Label::wildcard();
                continue;
            }
            t.side(s.dir) = Label::make(*out.names.id(s.name), s.intensity, s.polarity);
        }
        if (rl.is_seed) {
            if (!out.seed) out.seed = Seed{};
            out.seed->tiles.push_back(SeedTile{rl.offset, t});
        } else {
            out.tiles.push_back(t);
        }
    }
    return out;
}

TileSetFile read_tileset_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_tileset(ss.str());
}

void check_tileset_model(const TileSetFile& file, ModelKind m)
{
    if (file.side_count != sides_per_tile(m))
        throw std::invalid_argument("tile side count does not match model " + std::string(to_string(m)));
    auto check = [&](const TileType& t) {
        for (int d = 0; d < t.side_count; ++d)
            if (m == ModelKind::TwoD && t.side(d).polarity != Polarity::None)
                throw std::invalid_argument("polarities are not used in the 2d model");
    };
    for (const auto& t : file.tiles) check(t);
    if (file.seed) {
        for (const auto& st : file.seed->tiles) check(st.tile);
        validate_seed(*file.seed, m);
    }
}

std::string format_label(const Label& l, const LabelNames& names)
{
    if (l.is_epsilon()) return "eps";
    if (l.is_wildcard()) return "?";
    std::string s = names.name(l.id);
    if (l.polarity == Polarity::Plus) s += '+';
    if (l.polarity == Polarity::Minus) s += '-';
    return s + "/" + std::to_string(l.intensity);
}

std::string format_tile_sides(const TileType& t, const LabelNames& names)
{
    std::string s;
    for (int d = 0; d < t.side_count; ++d) {
        if (d) s += ' ';
        s += std::string(kSideKeys[d]) + "=" + format_label(t.side(d), names);
    }
    return s;
}

std::string format_tileset(const std::vector<TileType>& tiles, const Seed* seed, const LabelNames& names)
{
    std::ostringstream out;
    if (seed)
        for (const auto& st : seed->tiles) {
            const int dims = st.tile.side_count == 6 ? 3 : 2;
            out << "seed " << format_coord(st.offset, dims) << ": " << format_tile_sides(st.tile, names) << '\n';
        }
    for (std::size_t i = 0; i < tiles.size(); ++i)
        out << "tile " << i << ": " << format_tile_sides(tiles[i], names) << '\n';
    return out.str();
}

}  // namespace mtsp
