#include <doctest.h>

#include <algorithm>
#include <random>

#include "dirspec/constructions.hpp"
#include "dirspec/core.hpp"
#include "dirspec/group.hpp"
#include "dirspec/search.hpp"

using namespace dirspec;

namespace {

AffineMap random_map(const Prime& p, std::mt19937_64& rng) {
    for (;;) {
        int a = static_cast<int>(rng() % p.value());
        int b = static_cast<int>(rng() % p.value());
        int c = static_cast<int>(rng() % p.value());
        int d = static_cast<int>(rng() % p.value());
        if (p.reduce(static_cast<long long>(a) * d - static_cast<long long>(b) * c) == 0) continue;
        return AffineMap(p, a, b, c, d, static_cast<int>(rng() % p.value()),
                         static_cast<int>(rng() % p.value()));
    }
}

PointSet random_set(const Prime& p, int n, std::mt19937_64& rng) {
    PointSet s(p);
    while (s.size() < n) {
        int cell = static_cast<int>(rng() % (p.value() * p.value()));
        s.insert(cell % p.value(), cell / p.value());
    }
    return s;
}

}  // namespace

TEST_SUITE("properties") {
    TEST_CASE("affine maps permute the special directions") {
        std::mt19937_64 rng(2026);
        for (int pv : {3, 5, 7, 11, 13}) {
            Prime p(pv);
            for (int it = 0; it < 300; ++it) {
                PointSet s = random_set(p, 1 + static_cast<int>(rng() % (pv * pv)), rng);
                AffineMap g = random_map(p, rng);
                PointSet gs = apply_affine(g, s);
                CHECK(gs.size() == s.size());
                std::vector<Direction> mapped;
                for (Direction d : special_directions(s)) mapped.push_back(direction_image(g, d));
                std::sort(mapped.begin(), mapped.end());
                CHECK(special_directions(gs) == mapped);
            }
        }
    }

    TEST_CASE("complements keep the special directions") {
        std::mt19937_64 rng(7);
        for (int pv : {3, 5, 11}) {
            Prime p(pv);
            for (int it = 0; it < 200; ++it) {
                PointSet s = random_set(p, static_cast<int>(rng() % (pv * pv + 1)), rng);
                CHECK(special_directions(s.complement()) == special_directions(s));
            }
        }
    }

    TEST_CASE("size not divisible by p forces every direction special") {
        std::mt19937_64 rng(11);
        for (int pv : {5, 13}) {
            Prime p(pv);
            for (int it = 0; it < 100; ++it) {
                int n = 1 + static_cast<int>(rng() % (pv * pv - 1));
                if (n % pv == 0) ++n;
                PointSet s = random_set(p, n, rng);
                CHECK(special_directions(s).size() == static_cast<size_t>(pv) + 1);
            }
        }
    }

    TEST_CASE("line profiles conserve the total in every direction") {
        std::mt19937_64 rng(23);
        for (int pv : {5, 13}) {
            Prime p(pv);
            for (int it = 0; it < 25; ++it) {
                RatGrid g(p);
                for (int x = 0; x < pv; ++x)
                    for (int y = 0; y < pv; ++y)
                        g.at(x, y) = rat(static_cast<long>(rng() % 19) - 9,
                                         static_cast<long>(rng() % 6) + 1);
                for (Direction d : all_directions(p)) {
                    LineProfile prof = direction_profile(g, d);
                    Rat sum(0);
                    for (const Rat& v : prof.sums) sum += v;
                    CHECK(sum == g.total());
                }
            }
        }
    }

    TEST_CASE("shift and operator algebra") {
        Prime p(7);
        std::mt19937_64 rng(41);
        auto rand_row = [&] {
            RowVector v(p);
            for (int i = 0; i < 7; ++i)
                v[i] = rat(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 4) + 1);
            return v;
        };
        for (int it = 0; it < 50; ++it) {
            RowVector v = rand_row();
            RowVector w = rand_row();
            long long a = static_cast<long long>(rng() % 20);
            long long b = static_cast<long long>(rng() % 20);
            long long j = 1 + static_cast<long long>(rng() % 6);
            CHECK(shift(shift(v, a), b) == shift(v, a + b));
            CHECK(shift(v, 7) == v);
            CHECK(shift(v, a).total() == v.total());
            CHECK(L_operator(p, j, v + w) == L_operator(p, j, v) + L_operator(p, j, w));
            CHECK(L_operator(p, j, shift(v, a)) == shift(L_operator(p, j, v), a));
            CHECK(ones_row(p).scaled(rat(1, 7)) + L_operator(p, j, basis_vector(p, j)) ==
                  unit_row(p, 0));
        }
    }

    TEST_CASE("canonical forms are idempotent and orbit constant") {
        std::mt19937_64 rng(67);
        for (int pv : {3, 5, 7}) {
            Prime p(pv);
            LineMasks lm(p);
            for (int it = 0; it < 40; ++it) {
                PointSet s = PointSet::from_mask64(p, rng() & lm.plane());
                PointSet c = canonical_form(s);
                CHECK(canonical_form(c) == c);
                CHECK(canonical_form(apply_affine(random_map(p, rng), s)) == c);
                CHECK((c == s || c.lex_less(s)));
            }
        }
        Prime p(11);
        for (int it = 0; it < 3; ++it) {
            PointSet s = random_set(p, 5 + it, rng);
            PointSet c = canonical_form(s);
            CHECK(canonical_form(apply_affine(random_map(p, rng), s)) == c);
        }
    }

    TEST_CASE("scan reports do not depend on the job count") {
        SearchReport a = verify_no_two_special(Prime(3), 1);
        SearchReport b = verify_no_two_special(Prime(3), 3);
        CHECK(a.pass == b.pass);
        CHECK(a.sets_scanned == b.sets_scanned);
        CHECK(a.buckets == b.buckets);

        SearchReport c = verify_no_two_special(Prime(5), 1);
        SearchReport d = verify_no_two_special(Prime(5), 2);
        CHECK(c.pass == d.pass);
        CHECK(c.sets_scanned == d.sets_scanned);
        CHECK(c.buckets == d.buckets);

        CHECK(gap_spectrum(Prime(3), 1) == gap_spectrum(Prime(3), 3));
    }

    TEST_CASE("seeded local search is reproducible") {
        Prime p(5);
        std::vector<Direction> target = {Direction::slope(0), Direction::slope(1),
                                         Direction::slope(2), Direction::slope(3),
                                         Direction::vertical()};
        auto a = anneal_special_set(p, target, 2, 300000, 42);
        auto b = anneal_special_set(p, target, 2, 300000, 42);
        CHECK(a == b);
    }
}
