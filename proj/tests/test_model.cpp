#include <set>
#include <stdexcept>

#include "doctest.h"
#include "mtsp/model.hpp"

using namespace mtsp;

namespace {

SidePermutation compose(const SidePermutation& outer, const SidePermutation& inner)
{
    SidePermutation r{};
    for (int s = 0; s < kMaxSides; ++s) r[static_cast<std::size_t>(s)] = outer[inner[static_cast<std::size_t>(s)]];
    return r;
}

}  // namespace

TEST_CASE("model properties")
{
    CHECK(sides_per_tile(ModelKind::TwoD) == 4);
    CHECK(sides_per_tile(ModelKind::ThreeDR) == 6);
    CHECK(orientation_count(ModelKind::TwoD) == 1);
    CHECK(orientation_count(ModelKind::TwoDR) == 4);
    CHECK(orientation_count(ModelKind::ThreeDR) == 24);
    CHECK(parse_model("2dr") == ModelKind::TwoDR);
    CHECK_FALSE(parse_model("4d").has_value());
}

TEST_CASE("orientation tables form rotation groups")
{
    for (const auto m : {ModelKind::TwoD, ModelKind::TwoDR, ModelKind::ThreeDR}) {
        const auto table = orientation_table(m);
        REQUIRE(table.size() == static_cast<std::size_t>(orientation_count(m)));
        std::set<SidePermutation> all(table.begin(), table.end());
        CHECK(all.size() == table.size());
        CHECK(table[0] == SidePermutation{0, 1, 2, 3, 4, 5});
        for (const auto& a : table)
            for (const auto& b : table) CHECK(all.count(compose(a, b)) == 1);
        for (const auto& p : table)
            for (int s = 0; s < kMaxSides; ++s) {
                // rotations map opposite sides to opposite sides and agree with the vector action
                CHECK(p[static_cast<std::size_t>(opposite(s))] == opposite(p[static_cast<std::size_t>(s)]));
                CHECK(rotate(direction_vector(s), p) == direction_vector(p[static_cast<std::size_t>(s)]));
            }
    }
    const auto planar = orientation_table(ModelKind::TwoDR);
    const auto cube = orientation_table(ModelKind::ThreeDR);
    for (std::size_t k = 0; k < 4; ++k) CHECK(planar[k] == cube[k]);
}

TEST_CASE("rotations are proper")
{
    // determinant +1: E x N must rotate to the image of U
    for (const auto& p : orientation_table(ModelKind::ThreeDR)) {
        const Coord e = direction_vector(p[East]);
        const Coord n = direction_vector(p[North]);
        const Coord cross{e.y * n.z - e.z * n.y, e.z * n.x - e.x * n.z, e.x * n.y - e.y * n.x};
        CHECK(cross == direction_vector(p[Up]));
    }
}

TEST_CASE("apply_orientation moves labels with the permutation")
{
    TileType t = blank_tile(ModelKind::ThreeDR);
    for (int d = 0; d < 6; ++d) t.side(d) = Label::make(static_cast<std::uint16_t>(d + 1), 1);
    for (int k = 0; k < 24; ++k) {
        const auto& p = orientation_table(ModelKind::ThreeDR)[static_cast<std::size_t>(k)];
        const TileType r = apply_orientation(t, ModelKind::ThreeDR, k);
        for (int s = 0; s < 6; ++s) CHECK(r.side(p[static_cast<std::size_t>(s)]) == t.side(s));
    }
    CHECK(enumerate_orientations(t, ModelKind::ThreeDR).size() == 24);
}

TEST_CASE("label table cycles intensities")
{
    for (int tau = 1; tau <= 4; ++tau) {
        const LabelTable table = build_label_table(30, tau);
        CHECK(table.size() == 30);
        CHECK(table[0].is_epsilon());
        for (std::size_t k = 1; k < table.size(); ++k) {
            CHECK(table[k].id == k);
            CHECK(table[k].intensity == static_cast<int>((k - 1) % static_cast<std::size_t>(tau)) + 1);
        }
    }
    CHECK(build_label_table(1, 2).size() == 1);
    CHECK_THROWS_AS(build_label_table(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_label_table(5, 0), std::invalid_argument);
}

TEST_CASE("binding rules")
{
    const Label a = Label::make(3, 2);
    const Label b = Label::make(4, 2);
    CHECK(labels_bind(a, a, ModelKind::TwoD));
    CHECK_FALSE(labels_bind(a, b, ModelKind::TwoD));
    CHECK_FALSE(labels_bind(Label::epsilon(), Label::epsilon(), ModelKind::TwoD));
    const Label ap = Label::make(3, 2, Polarity::Plus);
    const Label am = Label::make(3, 2, Polarity::Minus);
    CHECK(labels_bind(ap, am, ModelKind::TwoDR));
    CHECK_FALSE(labels_bind(ap, ap, ModelKind::TwoDR));
    CHECK_FALSE(labels_bind(ap, a, ModelKind::ThreeDR));
    CHECK(labels_bind(a, a, ModelKind::TwoDR));
    CHECK(labels_bind(Label::wildcard(), a, ModelKind::TwoD));
    CHECK(labels_bind(ap, Label::wildcard(), ModelKind::TwoDR));
    CHECK_FALSE(labels_bind(Label::wildcard(), Label::wildcard(), ModelKind::TwoD));
    CHECK(bond_intensity(Label::wildcard(), a) == 2);
    CHECK(resolve_wildcard(ap) == am);
}

TEST_CASE("canonical forms identify rotated types")
{
    TileType t = blank_tile(ModelKind::TwoDR);
    t.side(North) = Label::make(1, 1);
    t.side(West) = Label::make(2, 2);
    for (const auto& r : enumerate_orientations(t, ModelKind::TwoDR)) {
        CHECK(canonical_form(r, ModelKind::TwoDR) == canonical_form(t, ModelKind::TwoDR));
        CHECK(rotation_equivalent(r, t, ModelKind::TwoDR));
    }
    const TileType turned = apply_orientation(t, ModelKind::TwoDR, 1);
    CHECK_FALSE(rotation_equivalent(turned, t, ModelKind::TwoD));
    CHECK(t.lambda() == 2);
}

TEST_CASE("seed validation")
{
    CHECK_NOTHROW(validate_seed(corner_seed(ModelKind::TwoD), ModelKind::TwoD));
    CHECK_NOTHROW(validate_seed(corner_seed(ModelKind::ThreeDR), ModelKind::ThreeDR));
    CHECK_THROWS_AS(validate_seed(Seed{}, ModelKind::TwoD), std::invalid_argument);
    CHECK_THROWS_AS(validate_seed(corner_seed(ModelKind::TwoD), ModelKind::ThreeDR), std::invalid_argument);

    Seed gap = corner_seed(ModelKind::TwoD);
    gap.tiles.push_back({Coord{2, 0}, blank_tile(ModelKind::TwoD)});
    CHECK_THROWS_AS(validate_seed(gap, ModelKind::TwoD), std::invalid_argument);

    Seed inward = corner_seed(ModelKind::TwoD);
    inward.tiles.push_back({Coord{1, 0}, blank_tile(ModelKind::TwoD)});
    CHECK_THROWS_AS(validate_seed(inward, ModelKind::TwoD), std::invalid_argument);
}

TEST_CASE("finalize_seed resolves wildcards")
{
    const ModelKind m = ModelKind::TwoDR;
    TileType t = blank_tile(m);
    t.side(North) = Label::make(5, 2, Polarity::Plus);
    const Individual ind{{t}};
    const int facing_side = opposite(East);
    // find the orientation whose rotated North faces back at the seed from the east
    int orient = -1;
    for (int k = 0; k < 4; ++k)
        if (orientation_table(m)[static_cast<std::size_t>(k)][North] == facing_side) orient = k;
    REQUIRE(orient >= 0);
    const Trace trace{Accretion{2, Coord{1, 0}, 0, orient, 1, 2, false}};
    const Seed s = finalize_seed(corner_seed(m), trace, ind, m);
    CHECK(s.tiles[0].tile.side(East) == Label::make(5, 2, Polarity::Minus));
    CHECK(s.tiles[0].tile.side(North).is_epsilon());
}
