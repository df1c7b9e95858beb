#include "dirspec/core.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace dirspec {

std::string rat_to_string(const Rat& r) {
    std::ostringstream os;
    os << r;  // gmpxx prints canonical "num" or "num/den"
    return os.str();
}

Rat rat_from_string(const std::string& s) {
    size_t slash = s.find('/');
    auto parse_int = [&](const std::string& t) -> mpz_class {
        if (t.empty()) throw std::invalid_argument("empty numeral in rational '" + s + "'");
        size_t k = (t[0] == '+' || t[0] == '-') ? 1 : 0;
        if (k == t.size()) throw std::invalid_argument("bare sign in rational '" + s + "'");
        for (; k < t.size(); ++k)
            if (t[k] < '0' || t[k] > '9')
                throw std::invalid_argument("bad character in rational '" + s + "'");
        return mpz_class(t);
    };
    mpz_class num = parse_int(slash == std::string::npos ? s : s.substr(0, slash));
    mpz_class den = 1;
    if (slash != std::string::npos) {
        den = parse_int(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in rational '" + s + "'");
    }
    Rat r(num, den);
    r.canonicalize();
    return r;
}

namespace {

bool is_odd_prime(int p) {
    if (p < 3 || p % 2 == 0) return false;
    for (int d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

Prime::Prime(int p) : p_(p) {
    if (!is_odd_prime(p) || p > 97)
        throw std::invalid_argument("modulus must be an odd prime in [3, 97], got " +
                                    std::to_string(p));
}

int Prime::inv(long long a) const {
    int r = reduce(a);
    if (r == 0) throw std::invalid_argument("no inverse of 0 mod " + std::to_string(p_));
    // p is tiny; a scan is simplest and exact.
    for (int b = 1; b < p_; ++b)
        if (r * b % p_ == 1) return b;
    throw std::logic_error("unreachable: inverse not found");
}

int direction_index(const Prime& p, Direction d) {
    return d.is_vertical() ? p.value() : d.slope_value();
}

std::vector<Direction> all_directions(const Prime& p) {
    std::vector<Direction> out;
    out.reserve(static_cast<size_t>(p.value()) + 1);
    for (int m = 0; m < p.value(); ++m) out.push_back(Direction::slope(m));
    out.push_back(Direction::vertical());
    return out;
}

Direction direction_of(const Prime& p, long long dx, long long dy) {
    int rx = p.reduce(dx), ry = p.reduce(dy);
    if (rx == 0 && ry == 0) throw std::invalid_argument("zero vector has no direction");
    if (rx == 0) return Direction::vertical();
    return Direction::slope(p.reduce(static_cast<long long>(ry) * p.inv(rx)));
}

Point direction_vector(Direction d) {
    return d.is_vertical() ? Point{0, 1} : Point{1, d.slope_value()};
}

std::string to_string(Direction d) {
    if (d.is_vertical()) return "(0,1)";
    return "(1," + std::to_string(d.slope_value()) + ")";
}

Direction parse_direction(const Prime& p, const std::string& s) {
    std::string t;
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    if (t == "vertical" || t == "(0,1)") return Direction::vertical();
    auto parse_ll = [&](const std::string& u) -> long long {
        try {
            size_t used = 0;
            long long v = std::stoll(u, &used);
            if (used != u.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw std::invalid_argument("bad direction '" + s + "'");
        }
    };
    if (!t.empty() && t.front() == '(' && t.back() == ')') {
        std::string body = t.substr(1, t.size() - 2);
        size_t comma = body.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("bad direction '" + s + "'");
        long long a = parse_ll(body.substr(0, comma));
        long long b = parse_ll(body.substr(comma + 1));
        return direction_of(p, a, b);
    }
    return Direction::slope(p.reduce(parse_ll(t)));
}

PointSet::PointSet(Prime p)
    : p_(p), bits_((static_cast<size_t>(p.value()) * p.value() + 63) / 64, 0) {}

int PointSet::cell_index(int x, int y) const {
    int n = p_.value();
    if (x < 0 || x >= n || y < 0 || y >= n)
        throw std::out_of_range("point (" + std::to_string(x) + "," + std::to_string(y) +
                                ") outside the " + std::to_string(n) + "x" + std::to_string(n) +
                                " plane");
    return y * n + x;
}

void PointSet::insert(int x, int y) {
    int i = cell_index(x, y);
    uint64_t& w = bits_[static_cast<size_t>(i) >> 6];
    uint64_t bit = 1ull << (i & 63);
    if (!(w & bit)) {
        w |= bit;
        ++size_;
    }
}

void PointSet::erase(int x, int y) {
    int i = cell_index(x, y);
    uint64_t& w = bits_[static_cast<size_t>(i) >> 6];
    uint64_t bit = 1ull << (i & 63);
    if (w & bit) {
        w &= ~bit;
        --size_;
    }
}

std::vector<Point> PointSet::points() const {
    std::vector<Point> out;
    out.reserve(static_cast<size_t>(size_));
    int n = p_.value();
    for (size_t w = 0; w < bits_.size(); ++w) {
        uint64_t word = bits_[w];
        while (word) {
            int b = std::countr_zero(word);
            word &= word - 1;
            int idx = static_cast<int>(w * 64) + b;
            out.push_back({idx % n, idx / n});
        }
    }
    return out;
}

PointSet PointSet::complement() const {
    PointSet out(p_);
    int n = p_.value();
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (!contains(x, y)) out.insert(x, y);
    return out;
}

PointSet PointSet::full(Prime p) {
    PointSet out(p);
    for (int y = 0; y < p.value(); ++y)
        for (int x = 0; x < p.value(); ++x) out.insert(x, y);
    return out;
}

uint64_t PointSet::as_mask64() const {
    if (p_.value() > 7) throw CapError("mask64 requires p <= 7");
    return bits_[0];
}

PointSet PointSet::from_mask64(Prime p, uint64_t mask) {
    if (p.value() > 7) throw CapError("mask64 requires p <= 7");
    int cells = p.value() * p.value();
    if (cells < 64 && (mask >> cells)) throw std::invalid_argument("mask has bits beyond the plane");
    PointSet out(p);
    out.bits_[0] = mask;
    out.size_ = std::popcount(mask);
    return out;
}

std::string PointSet::key() const {
    std::string k(bits_.size() * 8, '\0');
    for (size_t i = 0; i < bits_.size(); ++i)
        for (int b = 0; b < 8; ++b) k[i * 8 + b] = static_cast<char>((bits_[i] >> (8 * b)) & 0xff);
    return k;
}

bool PointSet::lex_less(const PointSet& other) const {
    if (p_.value() != other.p_.value())
        throw std::invalid_argument("lex_less requires equal moduli");
    for (size_t i = 0; i < bits_.size(); ++i) {
        uint64_t diff = bits_[i] ^ other.bits_[i];
        if (diff) {
            uint64_t low = diff & (~diff + 1);
            return bits_[i] & low;  // the set owning the earliest differing cell wins
        }
    }
    return false;
}

IntGrid::IntGrid(Prime p)
    : p_(p), v_(static_cast<size_t>(p.value()) * p.value(), 0) {}

IntGrid IntGrid::indicator(const PointSet& s) {
    IntGrid g(s.prime());
    for (const Point& q : s.points()) g.at(q.x, q.y) = 1;
    return g;
}

size_t IntGrid::index(int x, int y) const {
    int n = p_.value();
    if (x < 0 || x >= n || y < 0 || y >= n) throw std::out_of_range("grid cell outside the plane");
    return static_cast<size_t>(y) * n + x;
}

long long IntGrid::total() const {
    long long t = 0;
    for (long long v : v_) t += v;
    return t;
}

bool IntGrid::is_zero_one() const {
    for (long long v : v_)
        if (v != 0 && v != 1) return false;
    return true;
}

PointSet IntGrid::support_set() const {
    if (!is_zero_one()) throw std::domain_error("grid has values outside {0,1}");
    PointSet s(p_);
    int n = p_.value();
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (at(x, y) == 1) s.insert(x, y);
    return s;
}

IntGrid& IntGrid::operator+=(const IntGrid& o) {
    if (!(p_ == o.p_)) throw std::invalid_argument("grid moduli differ");
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

IntGrid& IntGrid::operator-=(const IntGrid& o) {
    if (!(p_ == o.p_)) throw std::invalid_argument("grid moduli differ");
    for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

RatGrid::RatGrid(Prime p)
    : p_(p), v_(static_cast<size_t>(p.value()) * p.value(), Rat(0)) {}

RatGrid RatGrid::indicator(const PointSet& s) {
    RatGrid g(s.prime());
    for (const Point& q : s.points()) g.at(q.x, q.y) = 1;
    return g;
}

RatGrid RatGrid::from(const IntGrid& g) {
    RatGrid out(g.prime());
    for (int y = 0; y < g.p(); ++y)
        for (int x = 0; x < g.p(); ++x) out.at(x, y) = rat(g.at(x, y));
    return out;
}

size_t RatGrid::index(int x, int y) const {
    int n = p_.value();
    if (x < 0 || x >= n || y < 0 || y >= n) throw std::out_of_range("grid cell outside the plane");
    return static_cast<size_t>(y) * n + x;
}

Rat RatGrid::total() const {
    Rat t(0);
    for (const Rat& v : v_) t += v;
    return t;
}

bool RatGrid::is_zero() const {
    for (const Rat& v : v_)
        if (v != 0) return false;
    return true;
}

RatGrid& RatGrid::operator+=(const RatGrid& o) {
    if (!(p_ == o.p_)) throw std::invalid_argument("grid moduli differ");
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

RatGrid& RatGrid::operator-=(const RatGrid& o) {
    if (!(p_ == o.p_)) throw std::invalid_argument("grid moduli differ");
    for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

int line_index(const Prime& p, Direction d, Point q) {
    if (d.is_vertical()) return p.reduce(q.x);
    return p.reduce(q.y - static_cast<long long>(d.slope_value()) * q.x);
}

PointSet line_points(const Prime& p, Direction d, int c) {
    PointSet out{p};
    int cc = p.reduce(c);
    if (d.is_vertical()) {
        for (int y = 0; y < p.value(); ++y) out.insert(cc, y);
    } else {
        for (int x = 0; x < p.value(); ++x)
            out.insert(x, p.reduce(static_cast<long long>(d.slope_value()) * x + cc));
    }
    return out;
}

std::vector<long long> direction_counts(const PointSet& s, Direction d) {
    std::vector<long long> sums(static_cast<size_t>(s.p()), 0);
    for (const Point& q : s.points()) ++sums[static_cast<size_t>(line_index(s.prime(), d, q))];
    return sums;
}

std::vector<long long> direction_counts(const IntGrid& g, Direction d) {
    std::vector<long long> sums(static_cast<size_t>(g.p()), 0);
    for (int y = 0; y < g.p(); ++y)
        for (int x = 0; x < g.p(); ++x)
            sums[static_cast<size_t>(line_index(g.prime(), d, {x, y}))] += g.at(x, y);
    return sums;
}

LineProfile direction_profile(const RatGrid& g, Direction d) {
    LineProfile prof;
    prof.dir = d;
    prof.sums.assign(static_cast<size_t>(g.p()), Rat(0));
    for (int y = 0; y < g.p(); ++y)
        for (int x = 0; x < g.p(); ++x)
            prof.sums[static_cast<size_t>(line_index(g.prime(), d, {x, y}))] += g.at(x, y);
    return prof;
}

namespace {

LineProfile profile_from_counts(Direction d, const std::vector<long long>& counts) {
    LineProfile prof;
    prof.dir = d;
    prof.sums.reserve(counts.size());
    for (long long c : counts) prof.sums.push_back(rat(c));
    return prof;
}

template <typename Counts>
bool all_equal(const Counts& v) {
    for (const auto& s : v)
        if (s != v[0]) return false;
    return true;
}

}  // namespace

LineProfile direction_profile(const PointSet& s, Direction d) {
    return profile_from_counts(d, direction_counts(s, d));
}

LineProfile direction_profile(const IntGrid& g, Direction d) {
    return profile_from_counts(d, direction_counts(g, d));
}

bool is_equidistributed(const PointSet& s, Direction d) {
    return all_equal(direction_counts(s, d));
}

bool is_equidistributed(const IntGrid& g, Direction d) {
    return all_equal(direction_counts(g, d));
}

bool is_equidistributed(const RatGrid& g, Direction d) {
    return all_equal(direction_profile(g, d).sums);
}

namespace {

template <typename F>
std::vector<Direction> specials_impl(const Prime& p, F&& equidistributed) {
    std::vector<Direction> out;
    for (Direction d : all_directions(p))
        if (!equidistributed(d)) out.push_back(d);
    return out;
}

}  // namespace

std::vector<Direction> special_directions(const PointSet& s) {
    return specials_impl(s.prime(), [&](Direction d) { return is_equidistributed(s, d); });
}

std::vector<Direction> special_directions(const IntGrid& g) {
    return specials_impl(g.prime(), [&](Direction d) { return is_equidistributed(g, d); });
}

std::vector<Direction> special_directions(const RatGrid& g) {
    return specials_impl(g.prime(), [&](Direction d) { return is_equidistributed(g, d); });
}

std::vector<Direction> determined_directions(const PointSet& s) {
    if (s.size() < 2) throw std::invalid_argument("determined directions need at least 2 points");
    std::vector<bool> hit(static_cast<size_t>(s.p()) + 1, false);
    std::vector<Point> pts = s.points();
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            Direction d = direction_of(s.prime(), pts[j].x - pts[i].x, pts[j].y - pts[i].y);
            hit[static_cast<size_t>(direction_index(s.prime(), d))] = true;
        }
    std::vector<Direction> out;
    for (Direction d : all_directions(s.prime()))
        if (hit[static_cast<size_t>(direction_index(s.prime(), d))]) out.push_back(d);
    return out;
}

int ghidelli_bound(int p, int k) {
    if (p < 3 || k < 0) throw std::invalid_argument("ghidelli_bound needs p >= 3, k >= 0");
    return (p + k + 2 + k) / (k + 1);  // ceil((p + k + 2) / (k + 1))
}

}  // namespace dirspec
