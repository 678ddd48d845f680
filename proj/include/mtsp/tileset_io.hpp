#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtsp/model.hpp"

namespace mtsp {

// Tile-set text format, one tile per line:
//
//   tile <id>: N=<lbl><pol>/<I> E=... S=... W=... [U=... D=...]
//   seed <x>,<y>[,<z>]: N=... E=... ...
//
// `eps` stands for the null label and `?` for a wildcard (seed lines only).
// The polarity suffix is `+`, `-` or absent. Blank lines and `#` comments are
// ignored.

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    int line() const { return line_; }

private:
    int line_;
};

/// Bidirectional map between label ids and their names in a file. Ids without
/// an entry are written as `l<id>`.
class LabelNames {
public:
    std::string name(std::uint16_t id) const;
    std::optional<std::uint16_t> id(const std::string& name) const;
    void bind(std::uint16_t id, const std::string& name);

private:
    std::map<std::uint16_t, std::string> by_id_;
    std::map<std::string, std::uint16_t> by_name_;
};

struct TileSetFile {
    std::vector<TileType> tiles;
    std::optional<Seed> seed;
    LabelNames names;
    int side_count = 0;
};

TileSetFile parse_tileset(std::string_view text);
TileSetFile read_tileset_file(const std::string& path);

/// Throws std::invalid_argument if the file does not fit model `m`.
void check_tileset_model(const TileSetFile& file, ModelKind m);

std::string format_label(const Label& l, const LabelNames& names);
std::string format_tile_sides(const TileType& t, const LabelNames& names);
std::string format_tileset(const std::vector<TileType>& tiles, const Seed* seed, const LabelNames& names = {});

}  // namespace mtsp
