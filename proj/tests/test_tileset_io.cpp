#include "doctest.h"
#include "mtsp/tileset_io.hpp"
#include "support.hpp"

using namespace mtsp;

TEST_CASE("parse a tile set with a seed")
{
    const auto f = parse_tileset(
        "# comment\n"
        "seed 0,0: N=? E=x+/2 S=eps W=eps\n"
        "tile 0: N=x-/2 E=l7/1 S=eps W=eps   # trailing\n");
    REQUIRE(f.seed.has_value());
    CHECK(f.tiles.size() == 1);
    CHECK(f.side_count == 4);
    CHECK(f.seed->tiles[0].tile.side(North).is_wildcard());
    const Label x = f.seed->tiles[0].tile.side(East);
    CHECK(x.polarity == Polarity::Plus);
    CHECK(x.intensity == 2);
    CHECK(f.tiles[0].side(East).id == 7);
    CHECK(x.id == 8);  // named labels go above the numeric ids
    CHECK(f.names.name(x.id) == "x");
}

TEST_CASE("round trip through the text form")
{
    const auto f = test::load("data/square5-2d.tiles");
    const auto text = format_tileset(f.tiles, f.seed ? &*f.seed : nullptr, f.names);
    const auto g = parse_tileset(text);
    CHECK(g.tiles == f.tiles);
    CHECK(g.seed == f.seed);
}

TEST_CASE("parse errors carry the line")
{
    CHECK_THROWS_AS(parse_tileset(""), ParseError);
    CHECK_THROWS_AS(parse_tileset("tile 0: N=a/1 E=a/2 S=eps W=eps\n"), ParseError);
    CHECK_THROWS_AS(parse_tileset("tile 0: N=? E=eps S=eps W=eps\n"), ParseError);
    CHECK_THROWS_AS(parse_tileset("tile 0: N=a/1 E=eps S=eps\n"), ParseError);
    CHECK_THROWS_AS(parse_tileset("tile 0: Q=a/1 E=eps S=eps W=eps\n"), ParseError);
    try {
        parse_tileset("tile 0: N=eps E=eps S=eps W=eps\n\ntile 1: N=a\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("model checks")
{
    const auto f = test::load("data/square5-2d.tiles");
    CHECK_NOTHROW(check_tileset_model(f, ModelKind::TwoD));
    CHECK_THROWS_AS(check_tileset_model(f, ModelKind::ThreeDR), std::invalid_argument);
    const auto polar = parse_tileset("tile 0: N=a+/1 E=eps S=eps W=eps\n");
    CHECK_THROWS_AS(check_tileset_model(polar, ModelKind::TwoD), std::invalid_argument);
    CHECK_NOTHROW(check_tileset_model(polar, ModelKind::TwoDR));
}
