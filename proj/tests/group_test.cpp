#include <doctest.h>

#include <random>

#include "dirspec/core.hpp"
#include "dirspec/group.hpp"

using namespace dirspec;

namespace {

// deterministic sampler for invertible affine maps
AffineMap random_map(const Prime& p, std::mt19937_64& rng) {
    int P = p.value();
    while (true) {
        int a = static_cast<int>(rng() % static_cast<uint64_t>(P));
        int b = static_cast<int>(rng() % static_cast<uint64_t>(P));
        int c = static_cast<int>(rng() % static_cast<uint64_t>(P));
        int d = static_cast<int>(rng() % static_cast<uint64_t>(P));
        if (p.reduce(static_cast<long long>(a) * d - static_cast<long long>(b) * c) == 0) continue;
        int tx = static_cast<int>(rng() % static_cast<uint64_t>(P));
        int ty = static_cast<int>(rng() % static_cast<uint64_t>(P));
        return AffineMap{p, a, b, c, d, tx, ty};
    }
}

}  // namespace

TEST_SUITE("group") {
    TEST_CASE("compose and inverse") {
        Prime p(7);
        std::mt19937_64 rng(5);
        for (int t = 0; t < 200; ++t) {
            AffineMap g = random_map(p, rng);
            AffineMap h = random_map(p, rng);
            Point q{static_cast<int>(rng() % 7), static_cast<int>(rng() % 7)};
            CHECK(g.compose(h).apply(q) == g.apply(h.apply(q)));
            CHECK(g.inverse().apply(g.apply(q)) == q);
            CHECK(g.compose(g.inverse()).apply(q) == q);
        }
        CHECK(AffineMap::identity(p).apply(Point{3, 4}) == Point{3, 4});
        CHECK(AffineMap::translation(p, 2, 3).apply(Point{6, 6}) == Point{1, 2});
    }

    TEST_CASE("affine image of a set and of directions") {
        Prime p(5);
        std::mt19937_64 rng(17);
        for (int t = 0; t < 100; ++t) {
            PointSet s(p);
            for (int i = 0; i < 25; ++i)
                if (rng() % 3 == 0) s.insert(i % 5, i / 5);
            AffineMap g = random_map(p, rng);
            PointSet gs = apply_affine(g, s);
            CHECK(gs.size() == s.size());
            CHECK(apply_affine(g.inverse(), gs) == s);
        }
        // direction_image agrees with transporting two points of a line
        for (int t = 0; t < 100; ++t) {
            AffineMap g = random_map(p, rng);
            for (Direction d : all_directions(p)) {
                Point a{1, 2};
                Point v = direction_vector(d);
                Point b{p.reduce(a.x + v.x), p.reduce(a.y + v.y)};
                Point ga = g.apply(a), gb = g.apply(b);
                CHECK(direction_image(g, d) == direction_of(p, gb.x - ga.x, gb.y - ga.y));
            }
        }
    }

    TEST_CASE("triple transporter hits the canonical frame") {
        for (int pv : {3, 5, 7, 11}) {
            Prime p(pv);
            auto dirs = all_directions(p);
            std::mt19937_64 rng(pv);
            for (int t = 0; t < 60; ++t) {
                size_t i = rng() % dirs.size(), j = rng() % dirs.size(), k = rng() % dirs.size();
                if (i == j || j == k || i == k) continue;
                AffineMap g = triple_transporter(p, dirs[i], dirs[j], dirs[k]);
                CHECK(direction_image(g, dirs[i]) == Direction::vertical());
                CHECK(direction_image(g, dirs[j]) == Direction::slope(0));
                CHECK(direction_image(g, dirs[k]) == Direction::slope(1));
            }
        }
    }

    TEST_CASE("group sizes") {
        CHECK(affine_group(Prime(3)).size() == 432);
        CHECK(affine_group(Prime(5)).size() == 12000);
        long long count = 0;
        for_each_affine(Prime(3), [&](const AffineMap&) { ++count; });
        CHECK(count == 432);
        CHECK_THROWS_AS(affine_group(Prime(11)), CapError);
    }

    TEST_CASE("canonical form is idempotent and orbit-invariant") {
        Prime p(5);
        std::mt19937_64 rng(23);
        for (int t = 0; t < 40; ++t) {
            PointSet s(p);
            for (int i = 0; i < 25; ++i)
                if (rng() % 2) s.insert(i % 5, i / 5);
            PointSet c = canonical_form(s);
            CHECK(canonical_form(c) == c);
            AffineMap g = random_map(p, rng);
            CHECK(canonical_form(apply_affine(g, s)) == c);
            CHECK(!s.lex_less(c));  // canonical is the lex-least orbit member
        }
    }

    TEST_CASE("orbit masks and invariants") {
        Prime p(5);
        PointSet tri(p);
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < a; ++b) tri.insert(a, b);
        auto orb = orbit_masks(tri);
        CHECK(orb.size() == 2000);
        CHECK(orb.count(tri.as_mask64()) == 1);
        auto inv = orbit_invariant(tri);
        int checked = 0;
        for (uint64_t m : orb) {
            if (++checked > 50) break;
            CHECK(orbit_invariant(PointSet::from_mask64(p, m)) == inv);
        }
    }
}
