#include <doctest.h>

#include "dirspec/constructions.hpp"
#include "dirspec/core.hpp"
#include "dirspec/redei.hpp"

using namespace dirspec;

TEST_SUITE("redei") {
    TEST_CASE("polynomial arithmetic") {
        Prime p(7);
        UniPoly x1(p, {1, 1});
        UniPoly x2(p, {2, 1});
        CHECK(x1 * x2 == UniPoly(p, {2, 3, 1}));
        CHECK(x1 + x2 == UniPoly(p, {3, 2}));
        CHECK(x1.pow(2) == UniPoly(p, {1, 2, 1}));
        CHECK(UniPoly::constant(p, 1).times_linear(3) == UniPoly(p, {3, 1}));
        CHECK((x1 * x2).eval(4) == 2);  // 30 mod 7
        CHECK(x1.scaled(7).is_zero());
        CHECK(UniPoly(p, {7, 14}).is_zero());
        CHECK(UniPoly(p).degree() == -1);
        CHECK(UniPoly(p, {0, 0, 3}).degree() == 2);
        CHECK(UniPoly(p, {5, 9}).coeff(1) == 2);
        CHECK(UniPoly(p, {5, 9}).coeff(7) == 0);
    }

    TEST_CASE("vanishing polynomial is the product of all linear factors") {
        for (int pv : {3, 5, 7}) {
            Prime p(pv);
            UniPoly f = field_vanishing_poly(p);
            CHECK(f.degree() == pv);
            CHECK(f.coeff(pv) == 1);
            CHECK(f.coeff(1) == pv - 1);
            UniPoly prod = UniPoly::constant(p, 1);
            for (int a = 0; a < pv; ++a) prod = prod.times_linear(pv - a);
            CHECK(f == prod);
            for (int a = 0; a < pv; ++a) CHECK(f.eval(a) == 0);
        }
    }

    TEST_CASE("single point gives the single linear factor") {
        Prime p(7);
        PointSet s(p);
        s.insert(2, 3);
        // x - a m + b at m = 4: constant term 3 - 8 = -5 = 2
        CHECK(redei_at(s, 4) == UniPoly(p, {2, 1}));
        PointSet empty(p);
        CHECK_THROWS_AS(redei_at(empty, 0), std::invalid_argument);
    }

    TEST_CASE("triangle factors completely at its equidistributed slopes") {
        Prime p(5);
        PointSet tri = triangle_set(p);
        UniPoly full = field_vanishing_poly(p).pow(2);
        for (int m = 2; m < 5; ++m) {
            CHECK(redei_at(tri, m) == full);
            CHECK(is_equidistributed_redei(tri, m));
        }
        CHECK(redei_at(tri, 0) != full);
        CHECK(redei_at(tri, 1) != full);
        CHECK_FALSE(is_equidistributed_redei(tri, 0));
        CHECK_FALSE(is_equidistributed_redei(tri, 1));
    }

    TEST_CASE("factorization test agrees with direct counts, exhaustive p = 3") {
        Prime p(3);
        long long checked = 0;
        for (uint64_t mask = 1; mask < 512; ++mask) {
            PointSet s = PointSet::from_mask64(p, mask);
            if (s.size() % 3 != 0) continue;
            for (int m = 0; m < 3; ++m) {
                CHECK(is_equidistributed_redei(s, m) ==
                      is_equidistributed(s, Direction::slope(m)));
                ++checked;
            }
        }
        CHECK(checked == 3 * (84 + 84 + 1));
    }

    TEST_CASE("coefficient extraction reassembles the specialized polynomial") {
        Prime p(5);
        PointSet tri = triangle_set(p);
        SymCoeffs sc = symmetric_coefficients(tri);
        REQUIRE(sc.n == 10);
        REQUIRE(sc.g.size() == 11);
        CHECK(sc.g[0] == UniPoly::constant(p, 1));
        for (int i = 0; i <= sc.n; ++i) CHECK(sc.g[static_cast<size_t>(i)].degree() <= i);
        for (int m = 0; m < 5; ++m) CHECK(assemble_at(sc, m) == redei_at(tri, m));

        SymCoeffs alt = symmetric_coefficients(tri, SignConvention::alternating);
        for (int i = 0; i <= sc.n; ++i) {
            long long sign = (i % 2 == 0) ? 1 : -1;
            CHECK(alt.g[static_cast<size_t>(i)] == sc.g[static_cast<size_t>(i)].scaled(sign));
        }
    }

    TEST_CASE("triangle coefficients vanish through degree p - 3") {
        for (int pv : {5, 7, 11}) {
            Prime p(pv);
            SymCoeffs sc = symmetric_coefficients(triangle_set(p));
            for (int i = 1; i <= pv - 3; ++i) CHECK(sc.g[static_cast<size_t>(i)].is_zero());
            CHECK_FALSE(sc.g[static_cast<size_t>(pv - 2)].is_zero());
        }
    }

    TEST_CASE("column counts and power sums") {
        Prime p(5);
        PointSet tri = triangle_set(p);
        ColumnCounts cc = column_counts(tri);
        CHECK(cc.w == std::vector<long long>{0, 1, 2, 3, 4});
        // sum a^(l+1) over a < 5: 30, 100, 354
        CHECK(power_sum_leading(tri, 1) == 0);
        CHECK(power_sum_leading(tri, 2) == 0);
        CHECK(power_sum_leading(tri, 3) == 4);
    }

    TEST_CASE("orthogonality level of reference profiles") {
        for (int pv : {5, 7, 13}) {
            Prime p(pv);
            CHECK(orthogonality_level(column_counts(triangle_set(p))) == pv - 3);
            ColumnCounts ones{p, std::vector<long long>(static_cast<size_t>(pv), 1)};
            CHECK(orthogonality_level(ones) == pv - 2);
            ColumnCounts col{p, std::vector<long long>(static_cast<size_t>(pv), 0)};
            col.w[0] = pv;
            CHECK(orthogonality_level(col) == pv - 1);
            ColumnCounts plane{p, std::vector<long long>(static_cast<size_t>(pv), pv)};
            CHECK(orthogonality_level(plane) == pv - 1);
        }
    }

    TEST_CASE("affine column profiles are recognized mod p") {
        Prime p(5);
        ColumnCounts tri{p, {0, 1, 2, 3, 4}};
        auto r = affine_profile_test(tri);
        REQUIRE(r.has_value());
        CHECK(*r == std::pair<int, int>{1, 0});

        // counts above p - 1 still pass: 5 = 0 mod 5
        ColumnCounts wrapped{p, {5, 1, 2, 3, 4}};
        r = affine_profile_test(wrapped);
        REQUIRE(r.has_value());
        CHECK(*r == std::pair<int, int>{1, 0});

        ColumnCounts constant{p, {2, 2, 2, 2, 2}};
        r = affine_profile_test(constant);
        REQUIRE(r.has_value());
        CHECK(*r == std::pair<int, int>{0, 2});

        ColumnCounts lumpy{p, {0, 1, 0, 0, 0}};
        CHECK_FALSE(affine_profile_test(lumpy).has_value());
    }

    TEST_CASE("crosscheck harness is clean at p = 3") {
        CrosscheckReport r = verify_redei_crosscheck(Prime(3), 0, 1);
        CHECK(r.pass);
        CHECK(r.cases == 510);
        CHECK(r.detail.empty());
    }
}
