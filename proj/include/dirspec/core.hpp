#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirspec/rational.hpp"

namespace dirspec {

// Raised when an operation is asked to run above its supported size cap.
struct CapError : std::runtime_error {
    explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

// Odd prime modulus of the plane, 3 <= p <= 97.
class Prime {
  public:
    explicit Prime(int p);
    int value() const { return p_; }
    // Canonical residue in [0, p).
    int reduce(long long v) const {
        long long r = v % p_;
        return static_cast<int>(r < 0 ? r + p_ : r);
    }
    // Multiplicative inverse of a (a not divisible by p).
    int inv(long long a) const;
    friend bool operator==(const Prime&, const Prime&) = default;

  private:
    int p_;
};

struct Point {
    int x = 0;
    int y = 0;
    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

// One of the p + 1 directions of the affine plane: (1, m) for a slope
// m in [0, p), or the vertical direction (0, 1). Directions order by slope
// with vertical last, which is the canonical listing order everywhere.
class Direction {
  public:
    static Direction slope(int m) {
        if (m < 0) throw std::invalid_argument("slope must be a canonical residue");
        return Direction(m);
    }
    static Direction vertical() { return Direction(-1); }
    bool is_vertical() const { return m_ < 0; }
    int slope_value() const {
        if (is_vertical()) throw std::logic_error("vertical direction has no slope");
        return m_;
    }
    friend bool operator==(Direction, Direction) = default;
    friend bool operator<(Direction a, Direction b) {
        if (a.is_vertical()) return false;
        if (b.is_vertical()) return true;
        return a.m_ < b.m_;
    }

  private:
    explicit Direction(int m) : m_(m) {}
    int m_;
};

// Position of d in the canonical listing: m for slope m, p for vertical.
int direction_index(const Prime& p, Direction d);
std::vector<Direction> all_directions(const Prime& p);
// Direction of the nonzero vector (dx, dy); throws on the zero vector.
Direction direction_of(const Prime& p, long long dx, long long dy);
// Canonical representative vector: (1, m) or (0, 1).
Point direction_vector(Direction d);
// "(1,m)" or "(0,1)".
std::string to_string(Direction d);
// Accepts "(0,1)", "(1,m)" with any integer m (reduced mod p), and the
// shorthand forms "vertical" / a bare slope integer.
Direction parse_direction(const Prime& p, const std::string& s);

// Subset of the p x p plane, stored as a bitset. Cell index is y * p + x, so
// iteration order is row-major by y.
class PointSet {
  public:
    explicit PointSet(Prime p);
    const Prime& prime() const { return p_; }
    int p() const { return p_.value(); }
    bool contains(int x, int y) const {
        int i = cell_index(x, y);
        return (bits_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u;
    }
    bool contains(Point q) const { return contains(q.x, q.y); }
    void insert(int x, int y);
    void insert(Point q) { insert(q.x, q.y); }
    void erase(int x, int y);
    void erase(Point q) { erase(q.x, q.y); }
    int size() const { return size_; }
    std::vector<Point> points() const;
    PointSet complement() const;
    static PointSet full(Prime p);
    // Whole plane packed into one word; requires p <= 7.
    uint64_t as_mask64() const;
    static PointSet from_mask64(Prime p, uint64_t mask);
    const std::vector<uint64_t>& words() const { return bits_; }
    // Byte key for hashing orbit members.
    std::string key() const;
    friend bool operator==(const PointSet&, const PointSet&) = default;
    // Orders by first differing cell: the set containing that cell is
    // smaller, so sets with early points sort first and {(0,0)} is the least
    // nonempty set.
    bool lex_less(const PointSet& other) const;

    int cell_index(int x, int y) const;

  private:
    Prime p_;
    std::vector<uint64_t> bits_;
    int size_ = 0;
};

// Integer-valued function on the plane (multiset weights, signed matrices).
class IntGrid {
  public:
    explicit IntGrid(Prime p);
    static IntGrid indicator(const PointSet& s);
    const Prime& prime() const { return p_; }
    int p() const { return p_.value(); }
    long long& at(int x, int y) { return v_[index(x, y)]; }
    long long at(int x, int y) const { return v_[index(x, y)]; }
    long long total() const;
    bool is_zero_one() const;
    // Throws std::domain_error unless all values are 0 or 1.
    PointSet support_set() const;
    friend bool operator==(const IntGrid&, const IntGrid&) = default;
    IntGrid& operator+=(const IntGrid& o);
    IntGrid& operator-=(const IntGrid& o);

  private:
    size_t index(int x, int y) const;
    Prime p_;
    std::vector<long long> v_;
};

// Rational-valued function on the plane.
class RatGrid {
  public:
    explicit RatGrid(Prime p);
    static RatGrid indicator(const PointSet& s);
    static RatGrid from(const IntGrid& g);
    const Prime& prime() const { return p_; }
    int p() const { return p_.value(); }
    Rat& at(int x, int y) { return v_[index(x, y)]; }
    const Rat& at(int x, int y) const { return v_[index(x, y)]; }
    Rat total() const;
    bool is_zero() const;
    friend bool operator==(const RatGrid&, const RatGrid&) = default;
    RatGrid& operator+=(const RatGrid& o);
    RatGrid& operator-=(const RatGrid& o);

  private:
    size_t index(int x, int y) const;
    Prime p_;
    std::vector<Rat> v_;
};

// Sums of a function over the p parallel lines of one direction, indexed by
// line parameter c: for slope m the line y = m x + c, for vertical x = c.
struct LineProfile {
    Direction dir = Direction::vertical();
    std::vector<Rat> sums;
    friend bool operator==(const LineProfile&, const LineProfile&) = default;
};

// Line parameter c of the line through q with direction d.
int line_index(const Prime& p, Direction d, Point q);
// The p points of the line with direction d and parameter c.
PointSet line_points(const Prime& p, Direction d, int c);

std::vector<long long> direction_counts(const PointSet& s, Direction d);
std::vector<long long> direction_counts(const IntGrid& g, Direction d);
LineProfile direction_profile(const RatGrid& g, Direction d);
LineProfile direction_profile(const PointSet& s, Direction d);
LineProfile direction_profile(const IntGrid& g, Direction d);

// Equidistributed means all p line sums in that direction are equal; special
// means not equidistributed.
bool is_equidistributed(const PointSet& s, Direction d);
bool is_equidistributed(const IntGrid& g, Direction d);
bool is_equidistributed(const RatGrid& g, Direction d);

std::vector<Direction> special_directions(const PointSet& s);
std::vector<Direction> special_directions(const IntGrid& g);
std::vector<Direction> special_directions(const RatGrid& g);

// Directions determined by a set: d(u - v) over distinct u, v in s.
// Throws std::invalid_argument when |s| < 2.
std::vector<Direction> determined_directions(const PointSet& s);

// Ghidelli's lower bound on the number of special directions of a kp-point
// set that is not a union of parallel lines: ceil((p + k + 2) / (k + 1)).
int ghidelli_bound(int p, int k);

}  // namespace dirspec
