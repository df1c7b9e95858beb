#include <doctest.h>

#include <algorithm>
#include <random>

#include "dirspec/constructions.hpp"
#include "dirspec/core.hpp"
#include "dirspec/decompose.hpp"

using namespace dirspec;

namespace {

LineWeighting random_weighting(Prime p, std::mt19937_64& rng) {
    auto dirs = all_directions(p);
    std::vector<Direction> order;
    int take = 1 + static_cast<int>(rng() % 3);
    while (static_cast<int>(order.size()) < take) {
        Direction d = dirs[rng() % dirs.size()];
        if (std::find(order.begin(), order.end(), d) == order.end()) order.push_back(d);
    }
    LineWeighting w{p, order, {}, {}};
    for (Direction d : order) {
        std::vector<Rat> row;
        for (int c = 0; c < p.value(); ++c)
            row.push_back(rat(static_cast<long>(rng() % 9) - 4, static_cast<long>(rng() % 3) + 1));
        w.weights[d] = std::move(row);
    }
    return w;
}

}  // namespace

TEST_SUITE("decompose") {
    TEST_CASE("uniform spread divides each line sum across its points") {
        Prime p(5);
        RatGrid tri = RatGrid::indicator(triangle_set(p));
        RatGrid spread = uniform_spread(p, direction_profile(tri, Direction::vertical()));
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y) CHECK(spread.at(x, y) == rat(x, 5));
        CHECK(spread.total() == tri.total());
    }

    TEST_CASE("peeling the special directions reproduces the input exactly") {
        for (int pv : {5, 7, 11}) {
            Prime p(pv);
            RatGrid f = RatGrid::from(figure_fixture(pv));
            LineWeighting w = decompose(f);
            CHECK(reconstruct(w) == f);
            auto specials = special_directions(f);
            CHECK(w.order == specials);
        }
        RatGrid tri = RatGrid::indicator(triangle_set(Prime(7)));
        CHECK(reconstruct(decompose(tri)) == tri);
    }

    TEST_CASE("constant grids decompose onto the vertical direction") {
        Prime p(5);
        RatGrid c(p);
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y) c.at(x, y) = rat(3, 2);
        LineWeighting w = decompose(c);
        CHECK(w.order == std::vector<Direction>{Direction::vertical()});
        CHECK(reconstruct(w) == c);

        RatGrid zero(p);
        CHECK(reconstruct(decompose(zero)) == zero);
    }

    TEST_CASE("peeling too few directions leaves a visible residual") {
        Prime p(5);
        RatGrid tri = RatGrid::indicator(triangle_set(p));
        PeelResult partial = decompose_along(tri, {Direction::slope(0)});
        CHECK_FALSE(partial.residual.is_zero());
        PeelResult fullpeel = decompose_along(tri, special_directions(tri));
        CHECK(fullpeel.residual.is_zero());
        CHECK(reconstruct(fullpeel.weighting) == tri);
    }

    TEST_CASE("every subset of the p = 3 plane decomposes") {
        Prime p(3);
        for (uint64_t mask = 0; mask < 512; ++mask) {
            RatGrid f = RatGrid::indicator(PointSet::from_mask64(p, mask));
            CHECK(reconstruct(decompose(f)) == f);
        }
    }

    TEST_CASE("random weighted line grids round trip") {
        std::mt19937_64 rng(417);
        for (int pv : {3, 7}) {
            Prime p(pv);
            for (int it = 0; it < 60; ++it) {
                RatGrid f = reconstruct(random_weighting(p, rng));
                LineWeighting back = decompose(f);
                CHECK(reconstruct(back) == f);
            }
        }
    }

    TEST_CASE("closed-form triangle weighting") {
        for (int pv : {5, 7, 11, 13}) {
            Prime p(pv);
            LineWeighting w = triangle_explicit_weights(p);
            CHECK(reconstruct(w) == RatGrid::indicator(triangle_set(p)));
            CHECK_FALSE(w.metadata.empty());
            for (int c = 0; c < pv; ++c) {
                CHECK(w.weights.at(Direction::vertical())[static_cast<size_t>(c)] == rat(c, pv));
                CHECK(w.weights.at(Direction::slope(0))[static_cast<size_t>(c)] == rat(-c, pv));
                CHECK(w.weights.at(Direction::slope(1))[static_cast<size_t>(c)] == rat(c, pv));
            }
        }
    }

    TEST_CASE("gauge freedom: order changes weights, not the reconstruction") {
        Prime p(5);
        RatGrid tri = RatGrid::indicator(triangle_set(p));
        auto dirs = special_directions(tri);
        REQUIRE(dirs.size() == 3);
        std::vector<Direction> reversed(dirs.rbegin(), dirs.rend());
        PeelResult a = decompose_along(tri, dirs);
        PeelResult b = decompose_along(tri, reversed);
        CHECK(a.residual.is_zero());
        CHECK(b.residual.is_zero());
        CHECK(reconstruct(a.weighting) == reconstruct(b.weighting));
        CHECK(a.weighting.weights.at(dirs[0]) != b.weighting.weights.at(dirs[0]));
    }

    TEST_CASE("weighting JSON round trip") {
        std::mt19937_64 rng(99);
        LineWeighting w = random_weighting(Prime(7), rng);
        w.metadata["note"] = "round trip";
        LineWeighting back = parse_weighting_json(write_weighting_json(w));
        CHECK(back.p == w.p);
        CHECK(back.order == w.order);
        CHECK(back.weights == w.weights);
        CHECK(back.metadata == w.metadata);

        LineWeighting tri = triangle_explicit_weights(Prime(5));
        LineWeighting tri2 = parse_weighting_json(write_weighting_json(tri));
        CHECK(reconstruct(tri2) == reconstruct(tri));
    }
}
