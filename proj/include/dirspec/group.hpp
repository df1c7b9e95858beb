#pragma once

#include <functional>
#include <unordered_set>
#include <vector>

#include "dirspec/core.hpp"

namespace dirspec {

// Invertible affine map u -> A u + t on the plane, A = [[a, b], [c, d]].
class AffineMap {
  public:
    AffineMap(Prime p, int a, int b, int c, int d, int tx, int ty);
    static AffineMap identity(Prime p) { return AffineMap(p, 1, 0, 0, 1, 0, 0); }
    static AffineMap translation(Prime p, int tx, int ty) {
        return AffineMap(p, 1, 0, 0, 1, tx, ty);
    }
    static AffineMap linear(Prime p, int a, int b, int c, int d) {
        return AffineMap(p, a, b, c, d, 0, 0);
    }
    const Prime& prime() const { return p_; }
    int a() const { return a_; }
    int b() const { return b_; }
    int c() const { return c_; }
    int d() const { return d_; }
    int tx() const { return tx_; }
    int ty() const { return ty_; }
    Point apply(Point q) const {
        return {p_.reduce(static_cast<long long>(a_) * q.x + static_cast<long long>(b_) * q.y + tx_),
                p_.reduce(static_cast<long long>(c_) * q.x + static_cast<long long>(d_) * q.y + ty_)};
    }
    // (this . g)(u) = this(g(u))
    AffineMap compose(const AffineMap& g) const;
    AffineMap inverse() const;
    friend bool operator==(const AffineMap&, const AffineMap&) = default;

  private:
    Prime p_;
    int a_, b_, c_, d_, tx_, ty_;
};

PointSet apply_affine(const AffineMap& g, const PointSet& s);
IntGrid apply_affine(const AffineMap& g, const IntGrid& f);
RatGrid apply_affine(const AffineMap& g, const RatGrid& f);

// Image of a direction under the linear part of g.
Direction direction_image(const AffineMap& g, Direction d);

// A linear map sending d1, d2, d3 (pairwise distinct) to (0,1), (1,0), (1,1)
// in order. Exists because the projective action is triply transitive.
AffineMap triple_transporter(Prime p, Direction d1, Direction d2, Direction d3);

// All invertible linear maps, cached; cap p <= 13.
const std::vector<AffineMap>& linear_group(Prime p);
// The full affine group materialized; cap p <= 7 (98784 maps at p = 7).
const std::vector<AffineMap>& affine_group(Prime p);
// Visits every affine map once without materializing the group; cap p <= 13.
void for_each_affine(Prime p, const std::function<void(const AffineMap&)>& fn);

// Lexicographically least member of the affine orbit of s (PointSet::lex_less
// order, so single points canonicalize to {(0,0)}); cap p <= 13. Nonempty
// canonical forms always contain the origin, which restricts the search to
// translations moving a member point there.
PointSet canonical_form(const PointSet& s);

// Every orbit member packed as a 64-bit mask; requires p <= 7.
std::unordered_set<uint64_t> orbit_masks(const PointSet& s);

// Hash of the sorted per-direction count multisets; constant on orbits.
uint64_t orbit_invariant(const PointSet& s);

}  // namespace dirspec
