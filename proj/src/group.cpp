#include "dirspec/group.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace dirspec {

namespace {

int det_of(const Prime& p, int a, int b, int c, int d) {
    return p.reduce(static_cast<long long>(a) * d - static_cast<long long>(b) * c);
}

}  // namespace

AffineMap::AffineMap(Prime p, int a, int b, int c, int d, int tx, int ty)
    : p_(p),
      a_(p.reduce(a)),
      b_(p.reduce(b)),
      c_(p.reduce(c)),
      d_(p.reduce(d)),
      tx_(p.reduce(tx)),
      ty_(p.reduce(ty)) {
    if (det_of(p_, a_, b_, c_, d_) == 0)
        throw std::invalid_argument("affine map must have an invertible linear part");
}

AffineMap AffineMap::compose(const AffineMap& g) const {
    if (!(p_ == g.p_)) throw std::invalid_argument("composing maps over different moduli");
    long long a = static_cast<long long>(a_) * g.a_ + static_cast<long long>(b_) * g.c_;
    long long b = static_cast<long long>(a_) * g.b_ + static_cast<long long>(b_) * g.d_;
    long long c = static_cast<long long>(c_) * g.a_ + static_cast<long long>(d_) * g.c_;
    long long d = static_cast<long long>(c_) * g.b_ + static_cast<long long>(d_) * g.d_;
    Point t = apply({g.tx_, g.ty_});
    return AffineMap(p_, p_.reduce(a), p_.reduce(b), p_.reduce(c), p_.reduce(d), t.x, t.y);
}

AffineMap AffineMap::inverse() const {
    int det = det_of(p_, a_, b_, c_, d_);
    int di = p_.inv(det);
    int ia = p_.reduce(static_cast<long long>(di) * d_);
    int ib = p_.reduce(-static_cast<long long>(di) * b_);
    int ic = p_.reduce(-static_cast<long long>(di) * c_);
    int id = p_.reduce(static_cast<long long>(di) * a_);
    int tx = p_.reduce(-(static_cast<long long>(ia) * tx_ + static_cast<long long>(ib) * ty_));
    int ty = p_.reduce(-(static_cast<long long>(ic) * tx_ + static_cast<long long>(id) * ty_));
    return AffineMap(p_, ia, ib, ic, id, tx, ty);
}

PointSet apply_affine(const AffineMap& g, const PointSet& s) {
    if (!(g.prime() == s.prime())) throw std::invalid_argument("map and set moduli differ");
    PointSet out(s.prime());
    for (const Point& q : s.points()) out.insert(g.apply(q));
    return out;
}

IntGrid apply_affine(const AffineMap& g, const IntGrid& f) {
    if (!(g.prime() == f.prime())) throw std::invalid_argument("map and grid moduli differ");
    IntGrid out(f.prime());
    for (int y = 0; y < f.p(); ++y)
        for (int x = 0; x < f.p(); ++x) {
            Point q = g.apply({x, y});
            out.at(q.x, q.y) = f.at(x, y);
        }
    return out;
}

RatGrid apply_affine(const AffineMap& g, const RatGrid& f) {
    if (!(g.prime() == f.prime())) throw std::invalid_argument("map and grid moduli differ");
    RatGrid out(f.prime());
    for (int y = 0; y < f.p(); ++y)
        for (int x = 0; x < f.p(); ++x) {
            Point q = g.apply({x, y});
            out.at(q.x, q.y) = f.at(x, y);
        }
    return out;
}

Direction direction_image(const AffineMap& g, Direction d) {
    Point v = direction_vector(d);
    const Prime& p = g.prime();
    long long vx = static_cast<long long>(g.a()) * v.x + static_cast<long long>(g.b()) * v.y;
    long long vy = static_cast<long long>(g.c()) * v.x + static_cast<long long>(g.d()) * v.y;
    return direction_of(p, vx, vy);
}

AffineMap triple_transporter(Prime p, Direction d1, Direction d2, Direction d3) {
    if (d1 == d2 || d1 == d3 || d2 == d3)
        throw std::invalid_argument("triple_transporter needs pairwise distinct directions");
    Point u1 = direction_vector(d1), u2 = direction_vector(d2), u3 = direction_vector(d3);
    // Solve [u2 u1] (alpha, beta)^T = u3; then B = [alpha*u2 | beta*u1] sends
    // (1,0) -> alpha*u2, (0,1) -> beta*u1, (1,1) -> u3, and A = B^{-1} does
    // the transport.
    int det = p.reduce(static_cast<long long>(u2.x) * u1.y - static_cast<long long>(u1.x) * u2.y);
    int di = p.inv(det);
    int alpha =
        p.reduce(static_cast<long long>(di) *
                 (static_cast<long long>(u1.y) * u3.x - static_cast<long long>(u1.x) * u3.y));
    int beta =
        p.reduce(static_cast<long long>(di) *
                 (static_cast<long long>(u2.x) * u3.y - static_cast<long long>(u2.y) * u3.x));
    AffineMap b = AffineMap::linear(p, p.reduce(static_cast<long long>(alpha) * u2.x),
                                    p.reduce(static_cast<long long>(beta) * u1.x),
                                    p.reduce(static_cast<long long>(alpha) * u2.y),
                                    p.reduce(static_cast<long long>(beta) * u1.y));
    AffineMap a = b.inverse();
    if (!(direction_image(a, d1) == Direction::vertical()) ||
        !(direction_image(a, d2) == Direction::slope(0)) ||
        !(direction_image(a, d3) == Direction::slope(1)))
        throw std::logic_error("transporter construction failed");
    return a;
}

const std::vector<AffineMap>& linear_group(Prime p) {
    if (p.value() > 13) throw CapError("linear_group materializes only for p <= 13");
    static std::map<int, std::vector<AffineMap>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p.value());
    if (it != cache.end()) return it->second;
    std::vector<AffineMap> maps;
    int n = p.value();
    maps.reserve(static_cast<size_t>(n) * n * n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    if (det_of(p, a, b, c, d) != 0) maps.push_back(AffineMap::linear(p, a, b, c, d));
    return cache.emplace(p.value(), std::move(maps)).first->second;
}

const std::vector<AffineMap>& affine_group(Prime p) {
    if (p.value() > 7) throw CapError("affine_group materializes only for p <= 7");
    static std::map<int, std::vector<AffineMap>> cache;
    static std::mutex mu;
    const std::vector<AffineMap>& lin = linear_group(p);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p.value());
    if (it != cache.end()) return it->second;
    std::vector<AffineMap> maps;
    int n = p.value();
    maps.reserve(lin.size() * static_cast<size_t>(n) * n);
    for (const AffineMap& g : lin)
        for (int tx = 0; tx < n; ++tx)
            for (int ty = 0; ty < n; ++ty)
                maps.push_back(AffineMap(p, g.a(), g.b(), g.c(), g.d(), tx, ty));
    return cache.emplace(p.value(), std::move(maps)).first->second;
}

void for_each_affine(Prime p, const std::function<void(const AffineMap&)>& fn) {
    int n = p.value();
    for (const AffineMap& g : linear_group(p))
        for (int tx = 0; tx < n; ++tx)
            for (int ty = 0; ty < n; ++ty) fn(AffineMap(p, g.a(), g.b(), g.c(), g.d(), tx, ty));
}

PointSet canonical_form(const PointSet& s) {
    const Prime& p = s.prime();
    if (p.value() > 13) throw CapError("canonical_form supports p <= 13");
    if (s.size() == 0) return s;
    std::vector<Point> pts = s.points();
    bool have = false;
    PointSet best(p);
    for (const AffineMap& g : linear_group(p)) {
        for (const Point& q : pts) {
            Point img = g.apply(q);
            AffineMap cand(p, g.a(), g.b(), g.c(), g.d(), p.reduce(-img.x), p.reduce(-img.y));
            PointSet image(p);
            for (const Point& r : pts) image.insert(cand.apply(r));
            if (!have || image.lex_less(best)) {
                best = image;
                have = true;
            }
        }
    }
    return best;
}

std::unordered_set<uint64_t> orbit_masks(const PointSet& s) {
    if (s.p() > 7) throw CapError("orbit_masks requires p <= 7");
    std::unordered_set<uint64_t> out;
    std::vector<Point> pts = s.points();
    const Prime& p = s.prime();
    for (const AffineMap& g : affine_group(p)) {
        uint64_t mask = 0;
        for (const Point& q : pts) {
            Point img = g.apply(q);
            mask |= 1ull << (img.y * p.value() + img.x);
        }
        out.insert(mask);
    }
    return out;
}

uint64_t orbit_invariant(const PointSet& s) {
    std::vector<std::vector<long long>> profs;
    for (Direction d : all_directions(s.prime())) {
        std::vector<long long> c = direction_counts(s, d);
        std::sort(c.begin(), c.end());
        profs.push_back(std::move(c));
    }
    std::sort(profs.begin(), profs.end());
    uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(s.p()));
    for (const auto& prof : profs)
        for (long long v : prof) mix(static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ull);
    return h;
}

}  // namespace dirspec
