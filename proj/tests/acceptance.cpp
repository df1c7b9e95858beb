// Acceptance gate: one timed pass/fail line per criterion, exit 0 only when
// every selected criterion passes. Args select criterion numbers; none = all.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dirspec/constructions.hpp"
#include "dirspec/core.hpp"
#include "dirspec/decompose.hpp"
#include "dirspec/group.hpp"
#include "dirspec/redei.hpp"
#include "dirspec/search.hpp"

using namespace dirspec;

namespace {

const std::vector<int> kPrimes = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31};

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
    void expect(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

std::vector<Direction> three_targets() {
    return {Direction::slope(0), Direction::slope(1), Direction::vertical()};
}

std::vector<Direction> four_targets(int p) {
    return {Direction::slope(0), Direction::slope(1), Direction::slope(p - 1),
            Direction::vertical()};
}

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

// 1. Triangle sets: p(p-1)/2 points, special exactly in {(1,0),(1,1),(0,1)}.
Outcome criterion1() {
    Outcome o;
    for (int pv : kPrimes) {
        Prime p(pv);
        PointSet t = triangle_set(p);
        o.expect(t.size() == pv * (pv - 1) / 2, "cardinality off at p=" + std::to_string(pv));
        o.expect(special_directions(t) == three_targets(),
                 "special set off at p=" + std::to_string(pv));
    }
    return o;
}

// 2. Row-operator identity sweep, exhaustive over (j, k, l) for each prime.
Outcome criterion2() {
    Outcome o;
    for (int pv : kPrimes) {
        IdentityReport r = verify_l_identities(Prime(pv));
        o.expect(r.pass, "identity failed at p=" + std::to_string(pv) + ": " + r.detail);
        long long want = (pv - 1) + 2ll * (pv - 1) * (pv - 1);
        o.expect(r.cases == want, "case count off at p=" + std::to_string(pv));
    }
    return o;
}

// 3. p = 11 pipeline: combined matrix matches the printed transcription and
// the row-wise operator at k = -2 lands on the printed 33-point figure.
Outcome criterion3() {
    Outcome o;
    static const long long printed[11][11] = {
        {0, 1, 0, 0, -1, 0, 1, 0, 0, 0, -1}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, -1, 1, 0, 0, 0, -1, 0, 1, 0}, {0, 0, 0, 0, 0, 0, 0, -1, 0, 1, 0},
        {0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0}, {1, 1, 0, 0, -1, -1, 1, 0, 0, 0, -1},
        {0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, -1, 0, 1, 0},
        {0, 0, -1, 1, 0, 0, 0, -1, 0, 1, 0}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 1, 0, 0, -1, 0, 1, 0, 0, 0, -1}};
    SignedMatrix n = build_n11();
    for (int r = 0; r < 11; ++r)
        for (int c = 0; c < 11; ++c)
            o.expect(n.at(r, c) == printed[r][c],
                     "matrix entry off at (" + std::to_string(r) + "," + std::to_string(c) + ")");
    RowPairing pairing = fig11_pairing();
    RatGrid out = apply_L_rowwise(n, -2, pairing, derive_row_backgrounds(n, -2, pairing));
    o.expect(out == RatGrid::from(figure_fixture(11)), "row-wise operator output off");
    o.expect(out.total() == rat(33), "point count off");
    o.expect(special_directions(out) == four_targets(11), "special set off");
    return o;
}

// 4. Printed figure sets: exactly the 4 directions, meeting the printed lower
// bound; the p = 13 completion carries total weight 65.
Outcome criterion4() {
    Outcome o;
    for (int pv : {5, 7, 11}) {
        IntGrid g = figure_fixture(pv);
        int k = static_cast<int>(g.total()) / pv;
        o.expect(special_directions(g) == four_targets(pv),
                 "special set off at p=" + std::to_string(pv));
        o.expect(ghidelli_bound(pv, k) == 4, "bound not 4 at p=" + std::to_string(pv));
    }
    IntGrid m = fig13_multiset();
    o.expect(m.total() == 65, "completed multiset weight off");
    o.expect(special_directions(m) == four_targets(13), "multiset special set off");
    IntGrid s13 = figure_fixture(13);
    o.expect(s13.total() == 65 && s13.is_zero_one(), "derived p=13 set off");
    o.expect(special_directions(s13) == four_targets(13), "derived p=13 special set off");
    return o;
}

// 5. No subset of the p = 3 or p = 5 plane has exactly two special directions.
Outcome criterion5() {
    Outcome o;
    for (int pv : {3, 5}) {
        SearchReport r = verify_no_two_special(Prime(pv));
        o.expect(r.pass && r.counterexamples.empty(), "scan failed at p=" + std::to_string(pv));
        o.expect(r.buckets.at(2) == 0, "two-special bucket nonzero at p=" + std::to_string(pv));
        o.expect(r.sets_scanned == (pv == 3 ? 512ll : 1ll << 25), "scan size off");
    }
    return o;
}

// 6. Every 3-special 10-point set at p = 5 is affinely equivalent to the
// triangle; size 15 follows by complementation.
Outcome criterion6() {
    Outcome o;
    SearchReport r = verify_three_special_uniqueness(Prime(5));
    o.expect(r.pass, "uniqueness scan failed: " + r.detail);
    o.expect(r.buckets.at(10) == 2000, "3-special count at size 10 off");
    o.expect(r.buckets.at(15) == 2000, "3-special count at size 15 off");
    return o;
}

// 7. kp-point sets equidistributed in at least p-1 directions are exactly the
// unions of k parallel lines.
Outcome criterion7() {
    Outcome o;
    for (int pv : {3, 5}) {
        SearchReport r = verify_union_lines_iff(Prime(pv));
        o.expect(r.pass, "scan failed at p=" + std::to_string(pv) + ": " + r.detail);
    }
    return o;
}

// 8. Randomized weighted-line grids decompose and reconstruct exactly, with
// weight support inside the special directions plus the first peeled one.
Outcome criterion8() {
    Outcome o;
    std::mt19937_64 rng(88);
    for (int pv : {3, 5, 7, 11, 13}) {
        Prime p(pv);
        auto dirs = all_directions(p);
        for (int it = 0; it < 1000 && o.pass; ++it) {
            LineWeighting w{p, {}, {}, {}};
            int take = 1 + static_cast<int>(rng() % 3);
            while (static_cast<int>(w.order.size()) < take) {
                Direction d = dirs[rng() % dirs.size()];
                if (std::find(w.order.begin(), w.order.end(), d) == w.order.end())
                    w.order.push_back(d);
            }
            for (Direction d : w.order) {
                std::vector<Rat> row;
                for (int c = 0; c < pv; ++c)
                    row.push_back(rat(static_cast<long>(rng() % 9) - 4,
                                      static_cast<long>(rng() % 3) + 1));
                w.weights[d] = std::move(row);
            }
            RatGrid f = reconstruct(w);
            LineWeighting back = decompose(f);
            o.expect(reconstruct(back) == f, "round trip off at p=" + std::to_string(pv));
            auto specials = special_directions(f);
            for (const auto& [d, row] : back.weights) {
                bool zero = std::all_of(row.begin(), row.end(),
                                        [](const Rat& v) { return v == 0; });
                if (zero) continue;
                bool allowed = d == back.order.front() ||
                               std::find(specials.begin(), specials.end(), d) != specials.end();
                o.expect(allowed, "weight outside allowed support at p=" + std::to_string(pv));
            }
        }
    }
    return o;
}

// 9. Factorization test vs direct counts: exhaustive at p = 3, sampled with a
// fixed seed at p in {5, 7, 11}.
Outcome criterion9() {
    Outcome o;
    CrosscheckReport r3 = verify_redei_crosscheck(Prime(3), 0, 1);
    o.expect(r3.pass && r3.cases == 510, "exhaustive crosscheck failed: " + r3.detail);
    for (int pv : {5, 7, 11}) {
        CrosscheckReport r = verify_redei_crosscheck(Prime(pv), 10000, 1);
        o.expect(r.pass, "crosscheck failed at p=" + std::to_string(pv) + ": " + r.detail);
        o.expect(r.cases == 10000ll * pv, "case count off at p=" + std::to_string(pv));
    }
    return o;
}

// 10. Column power sums: the triangle reaches level p-3, the all-ones profile
// reaches p-2.
Outcome criterion10() {
    Outcome o;
    for (int pv : kPrimes) {
        Prime p(pv);
        o.expect(orthogonality_level(column_counts(triangle_set(p))) == pv - 3,
                 "triangle level off at p=" + std::to_string(pv));
        ColumnCounts ones{p, std::vector<long long>(static_cast<size_t>(pv), 1)};
        o.expect(orthogonality_level(ones) == pv - 2,
                 "all-ones level off at p=" + std::to_string(pv));
    }
    return o;
}

// 11. Property sweeps: affine invariance of special counts, profile totals,
// shift and operator algebra, canonical form idempotence, and job-count
// independence of the scan reports.
Outcome criterion11() {
    Outcome o;
    std::mt19937_64 rng(1111);

    for (int pv : {3, 5, 7, 11, 13}) {
        Prime p(pv);
        for (int it = 0; it < 10000 && o.pass; ++it) {
            PointSet s = random_set(p, 1 + static_cast<int>(rng() % (pv * pv)), rng);
            AffineMap g = random_map(p, rng);
            PointSet gs = apply_affine(g, s);
            std::vector<Direction> mapped;
            for (Direction d : special_directions(s)) mapped.push_back(direction_image(g, d));
            std::sort(mapped.begin(), mapped.end());
            o.expect(gs.size() == s.size() && special_directions(gs) == mapped,
                     "affine invariance failed at p=" + std::to_string(pv));
        }
    }

    for (int pv : {5, 13}) {
        Prime p(pv);
        for (int it = 0; it < 50 && o.pass; ++it) {
            RatGrid g(p);
            for (int x = 0; x < pv; ++x)
                for (int y = 0; y < pv; ++y)
                    g.at(x, y) =
                        rat(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 6) + 1);
            for (Direction d : all_directions(p)) {
                Rat sum(0);
                for (const Rat& v : direction_profile(g, d).sums) sum += v;
                o.expect(sum == g.total(), "profile total off at p=" + std::to_string(pv));
            }
        }
    }

    {
        Prime p(7);
        for (int it = 0; it < 200 && o.pass; ++it) {
            RowVector v(p), w(p);
            for (int i = 0; i < 7; ++i) {
                v[i] = rat(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 4) + 1);
                w[i] = rat(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 4) + 1);
            }
            long long a = static_cast<long long>(rng() % 20);
            long long j = 1 + static_cast<long long>(rng() % 6);
            o.expect(shift(shift(v, a), 3) == shift(v, a + 3), "shift additivity failed");
            o.expect(L_operator(p, j, v + w) == L_operator(p, j, v) + L_operator(p, j, w),
                     "operator linearity failed");
            o.expect(L_operator(p, j, shift(v, a)) == shift(L_operator(p, j, v), a),
                     "operator shift covariance failed");
            o.expect(ones_row(p).scaled(rat(1, 7)) + L_operator(p, j, basis_vector(p, j)) ==
                         unit_row(p, 0),
                     "balance identity failed");
        }
    }

    for (int pv : {3, 5, 7}) {
        Prime p(pv);
        LineMasks lm(p);
        for (int it = 0; it < 100 && o.pass; ++it) {
            PointSet s = PointSet::from_mask64(p, rng() & lm.plane());
            PointSet c = canonical_form(s);
            o.expect(canonical_form(c) == c, "canonical form not idempotent");
            o.expect(canonical_form(apply_affine(random_map(p, rng), s)) == c,
                     "canonical form not orbit constant");
        }
    }

    {
        SearchReport a = verify_no_two_special(Prime(3), 1);
        SearchReport b = verify_no_two_special(Prime(3), 3);
        o.expect(a.pass == b.pass && a.sets_scanned == b.sets_scanned && a.buckets == b.buckets,
                 "job count changed the p=3 scan report");
        SearchReport c = verify_no_two_special(Prime(5), 1);
        SearchReport d = verify_no_two_special(Prime(5), 2);
        o.expect(c.pass == d.pass && c.sets_scanned == d.sets_scanned && c.buckets == d.buckets,
                 "job count changed the p=5 scan report");
        o.expect(gap_spectrum(Prime(5), 1) == gap_spectrum(Prime(5), 2),
                 "job count changed the p=5 census");
    }
    return o;
}

struct Criterion {
    int id;
    const char* label;
    double limit_s;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "triangle sets are 3-special at the ten primes up to 31", 1.0, criterion1},
    {2, "row-operator identities hold exhaustively up to p = 31", 5.0, criterion2},
    {3, "p = 11 pipeline reproduces the printed matrix and figure", 1.0, criterion3},
    {4, "figure sets hit the 4-direction bound; p = 13 completion weighs 65", 1.0, criterion4},
    {5, "no two-special subset exists at p = 3 or p = 5", 600.0, criterion5},
    {6, "3-special 10-point sets at p = 5 form one affine orbit", 300.0, criterion6},
    {7, "near-full equidistribution means a union of parallel lines", 600.0, criterion7},
    {8, "random weighted-line grids decompose and rebuild exactly", 30.0, criterion8},
    {9, "factorization test matches direct counts on every probe", 60.0, criterion9},
    {10, "triangle orthogonality level is p - 3, all-ones is p - 2", 1.0, criterion10},
    {11, "invariance, algebra, canonical-form and determinism sweeps", 0.0, criterion11},
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        int id = std::atoi(argv[i]);
        if (id < 1 || id > 11) {
            std::fprintf(stderr, "usage: %s [criterion numbers in 1..11]\n", argv[0]);
            return 2;
        }
        selected.insert(id);
    }

    bool all_pass = true;
    for (const Criterion& c : kCriteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o = c.run();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = c.limit_s == 0.0 || secs < c.limit_s;
        bool pass = o.pass && in_time;
        all_pass = all_pass && pass;
        std::string note;
        if (!o.pass) note = " -- " + o.detail;
        else if (!in_time) note = " -- over time budget";
        std::printf("criterion %d: %s (%.2fs) %s%s\n", c.id, pass ? "PASS" : "FAIL", secs,
                    c.label, note.c_str());
    }
    return all_pass ? 0 : 1;
}
