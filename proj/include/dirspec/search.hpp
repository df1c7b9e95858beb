#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dirspec/core.hpp"

namespace dirspec {

// Popcount kernel for exhaustive scans: every line of the plane as a one-word
// bitmask, so a special-direction count costs at most (p+1)*p popcounts.
// Requires p <= 7 (p^2 <= 64 bits).
class LineMasks {
  public:
    explicit LineMasks(Prime p);
    const Prime& prime() const { return p_; }
    uint64_t line(int dir_idx, int c) const {
        return lines_[static_cast<size_t>(dir_idx) * p_.value() + c];
    }
    // Low p^2 bits set.
    uint64_t plane() const { return plane_; }
    int special_count(uint64_t s) const;
    // True when some direction has every line either contained in s or
    // disjoint from it; such sets are exactly the unions of parallel lines.
    bool union_of_parallel_lines(uint64_t s) const;

  private:
    Prime p_;
    uint64_t plane_;
    std::vector<uint64_t> lines_;
};

// One verification run. buckets is keyed per operation (documented at each
// op); counterexamples is nonempty only when pass is false and holds every
// offending set found, verbatim.
struct SearchReport {
    bool pass = false;
    std::string name;
    long long sets_scanned = 0;
    std::map<int, long long> buckets;
    std::vector<PointSet> counterexamples;
    std::string detail;
};

// Orbit census of all subsets of one cardinality. reps are the numerically
// smallest bitmask of each orbit, ascending; mass = sum of orbit sizes, which
// must equal C(p^2, cardinality).
struct OrbitCensus {
    std::vector<PointSet> reps;
    std::vector<long long> sizes;
    long long mass = 0;
};

// Exhaustive orbit enumeration. Caps: p <= 5 any cardinality, p = 7 only
// cardinality <= 5 (the seen-set grows like C(49, n)).
OrbitCensus orbit_census(const Prime& p, int cardinality, int jobs = 1);
std::vector<PointSet> enumerate_orbits(const Prime& p, int cardinality, int jobs = 1);

// Zero subsets with exactly two special directions. p in {3, 5}: the full
// powerset is scanned and buckets maps special count -> number of subsets.
// p = 7: every 7-point set is covered up to translation (masks containing the
// origin), larger multiples of 7 are covered by the k = 1 scan's complement
// and the printed bound (detail spells out the split); buckets maps special
// count -> number of scanned size-7 sets.
SearchReport verify_no_two_special(const Prime& p, int jobs = 1);

// Every 3-special set of size p(p-1)/2 lies in the affine orbit of
// triangle_set(p), size p(p+1)/2 ones in the complement orbit, and no other
// cardinality divisible by p admits one. p in {3, 5}: full scans of every
// such cardinality; p = 7: size-7 scan, a column-margin argument for size 14,
// and a margin-constrained DFS for size 21 (28, 35, 42 follow by
// complementation). buckets maps cardinality -> number of 3-special sets.
SearchReport verify_three_special_uniqueness(const Prime& p, int jobs = 1);

// For sets of size kp: equidistributed in >= p-1 directions iff a union of k
// parallel lines (0 special directions for k in {0, p}, exactly 1 otherwise).
// p in {3, 5}, exhaustive. buckets maps special count -> number of unions.
SearchReport verify_union_lines_iff(const Prime& p, int jobs = 1);

// Achievability of special-direction counts over sets whose cardinality is
// divisible by p. orbit_count >= 0 only in exhaustive reports; -1 marks a
// witness-only entry. absent lists counts proven unachievable (exhaustively,
// or d = 2 by the no-two-special theorem); unknown lists counts that no probe
// reached, which is never a nonexistence claim.
struct SpectrumEntry {
    long long cardinality;
    int special_count;
    long long orbit_count;
    PointSet representative;
    friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

struct SpectrumReport {
    int p = 0;
    bool exhaustive = false;
    long long sets_scanned = 0;
    std::vector<SpectrumEntry> entries;
    std::vector<int> absent;
    std::vector<int> unknown;
    friend bool operator==(const SpectrumReport&, const SpectrumReport&) = default;
};

// p in {3, 5}: exhaustive orbit census over cardinalities divisible by p.
// p = 7: constructive witnesses + an exhaustive size-7 stratum + seeded
// annealed probes; identical inputs give identical reports regardless of
// jobs.
SpectrumReport gap_spectrum(const Prime& p, int jobs = 1, uint64_t seed = 1);
std::string write_spectrum_json(const SpectrumReport& r);

// Threshold-accepting local search for a kp-point set whose special
// directions are exactly `target`: integer cost sums, over the directions
// meant to be equidistributed, the squared deviation of each line count from
// k. Wholly seed-determined; returns the first verified exact hit.
std::optional<PointSet> anneal_special_set(const Prime& p, const std::vector<Direction>& target,
                                           long long k, long long budget, uint64_t seed);

// Witness search for a d-special set of cardinality k*p at the smallest k
// whose printed lower bound allows d. Tries, in order: the JSON-lines cache
// (path in DIRSPEC_CACHE; every hit is re-verified), the known figure for
// p in {5, 7, 11}, the shift/correction pipeline, and annealing. A miss
// within budget is a normal outcome.
struct ProbeResult {
    std::optional<PointSet> witness;
    std::string source;
    long long cardinality = 0;
    long long iterations = 0;
};
ProbeResult min_cardinality_probe(const Prime& p, int d, long long budget, uint64_t seed = 1);

std::optional<PointSet> probe_cache_lookup(const Prime& p, long long cardinality, int d);
void probe_cache_append(const PointSet& s, int d, const std::string& source, uint64_t seed);

// Exact column-count vectors w in [0,p]^p with sum = total that satisfy the
// congruence w_j = alpha*j + beta (mod p) forced on any set equidistributed
// in every slope except 0 and 1: its power sums of x-coordinates vanish in
// degrees 1..p-3, so w is orthogonal to the first p-2 rows of the Vandermonde
// matrix, whose orthocomplement is spanned by (1) and (j). Returned sorted;
// callers strip the constant vectors (vertical would be equidistributed) and
// the {0,p}-valued ones (unions of full columns).
std::vector<std::vector<int>> margin_candidates(const Prime& p, long long total);

// All sets of size p(p-1)/2 with column counts exactly (0, 1, ..., p-1), row
// counts (gamma*i mod p), and every line of every slope in 2..p-1 holding
// exactly (p-1)/2 points. Any 3-special set of this size normalizes into one
// of these classes: a transporter moves its special triple to vertical,
// slope 0 and slope 1, the margin congruence plus a scalar map and
// translation pin the column counts, and the leftover y-shift clears the row
// intercept. gamma ranges over 1..p-1.
std::vector<PointSet> margin_constrained_sets(const Prime& p, int gamma);

}  // namespace dirspec
