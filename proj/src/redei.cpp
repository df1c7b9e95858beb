#include "dirspec/redei.hpp"

#include <random>

namespace dirspec {

UniPoly::UniPoly(Prime p, std::vector<long long> coeffs) : p_(p) {
    c_.reserve(coeffs.size());
    for (long long v : coeffs) c_.push_back(p_.reduce(v));
    trim();
}

void UniPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int UniPoly::eval(long long x) const {
    int xr = p_.reduce(x);
    long long acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = (acc * xr + c_[i]) % p_.value();
    return static_cast<int>(acc);
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
    if (!(p_ == o.p_)) throw std::invalid_argument("polynomial moduli differ");
    UniPoly out(p_);
    out.c_.resize(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < out.c_.size(); ++i)
        out.c_[i] = p_.reduce(static_cast<long long>(coeff(static_cast<int>(i))) +
                              o.coeff(static_cast<int>(i)));
    out.trim();
    return out;
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
    if (!(p_ == o.p_)) throw std::invalid_argument("polynomial moduli differ");
    if (is_zero() || o.is_zero()) return UniPoly(p_);
    UniPoly out(p_);
    out.c_.assign(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            out.c_[i + j] =
                p_.reduce(out.c_[i + j] + static_cast<long long>(c_[i]) * o.c_[j]);
    }
    out.trim();
    return out;
}

UniPoly UniPoly::scaled(long long k) const {
    UniPoly out(p_);
    out.c_.reserve(c_.size());
    for (int v : c_) out.c_.push_back(p_.reduce(v * k));
    out.trim();
    return out;
}

UniPoly UniPoly::times_linear(long long a) const {
    // (x + a) * this
    UniPoly out(p_);
    if (is_zero()) return out;
    int ar = p_.reduce(a);
    out.c_.assign(c_.size() + 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        out.c_[i + 1] = p_.reduce(out.c_[i + 1] + c_[i]);
        out.c_[i] = p_.reduce(out.c_[i] + static_cast<long long>(ar) * c_[i]);
    }
    out.trim();
    return out;
}

UniPoly UniPoly::pow(int n) const {
    if (n < 0) throw std::invalid_argument("negative power");
    UniPoly acc = UniPoly::constant(p_, 1);
    for (int i = 0; i < n; ++i) acc = acc * *this;
    return acc;
}

UniPoly field_vanishing_poly(Prime p) {
    std::vector<long long> c(static_cast<size_t>(p.value()) + 1, 0);
    c[1] = p.value() - 1;  // -x
    c[static_cast<size_t>(p.value())] = 1;
    return UniPoly(p, std::move(c));
}

UniPoly redei_at(const PointSet& s, int m) {
    if (s.size() == 0) throw std::invalid_argument("redei_at needs a nonempty set");
    const Prime& p = s.prime();
    UniPoly h = UniPoly::constant(p, 1);
    for (const Point& q : s.points())
        h = h.times_linear(static_cast<long long>(q.y) - static_cast<long long>(q.x) * m);
    return h;
}

bool is_equidistributed_redei(const PointSet& s, int m) {
    const Prime& p = s.prime();
    if (s.size() % p.value() != 0)
        throw std::invalid_argument("factorization test needs p | |S|");
    int n = s.size() / p.value();
    if (n == 0) return true;
    return redei_at(s, m) == field_vanishing_poly(p).pow(n);
}

SymCoeffs symmetric_coefficients(const PointSet& s, SignConvention convention) {
    const Prime& p = s.prime();
    SymCoeffs sc{p, s.size(), convention, {}};
    sc.g.reserve(static_cast<size_t>(s.size()) + 1);
    sc.g.push_back(UniPoly::constant(p, 1));
    // Elementary symmetric DP over the linear forms t_j(y) = b_j - a_j y.
    for (const Point& q : s.points()) {
        UniPoly t(p, {q.y, -static_cast<long long>(q.x)});
        sc.g.push_back(UniPoly(p));
        for (size_t i = sc.g.size() - 1; i >= 1; --i) sc.g[i] = sc.g[i] + t * sc.g[i - 1];
    }
    if (convention == SignConvention::alternating)
        for (size_t i = 1; i < sc.g.size(); i += 2) sc.g[i] = sc.g[i].scaled(-1);
    return sc;
}

UniPoly assemble_at(const SymCoeffs& sc, int m) {
    UniPoly h(sc.p);
    for (int i = 0; i <= sc.n; ++i) {
        int gi = sc.g[static_cast<size_t>(i)].eval(m);
        if (sc.convention == SignConvention::alternating && i % 2 == 1) gi = sc.p.reduce(-gi);
        if (gi == 0) continue;
        std::vector<long long> mono(static_cast<size_t>(sc.n - i) + 1, 0);
        mono.back() = gi;
        h = h + UniPoly(sc.p, std::move(mono));
    }
    return h;
}

ColumnCounts column_counts(const PointSet& s) {
    ColumnCounts out{s.prime(), std::vector<long long>(static_cast<size_t>(s.p()), 0)};
    for (const Point& q : s.points()) ++out.w[static_cast<size_t>(q.x)];
    return out;
}

int power_sum_leading(const PointSet& s, int l) {
    if (l < 1) throw std::invalid_argument("power sum exponent must be >= 1");
    const Prime& p = s.prime();
    long long acc = 0;
    for (const Point& q : s.points()) {
        long long t = 1;
        for (int i = 0; i < l; ++i) t = t * q.x % p.value();
        acc += t;
    }
    return p.reduce(acc);
}

namespace {

int weighted_power_sum(const ColumnCounts& w, int l) {
    const Prime& p = w.p;
    long long acc = 0;
    for (int j = 0; j < p.value(); ++j) {
        long long t = 1;
        for (int i = 0; i < l; ++i) t = t * j % p.value();
        acc = (acc + p.reduce(w.w[static_cast<size_t>(j)]) * t) % p.value();
    }
    return p.reduce(acc);
}

}  // namespace

int orthogonality_level(const ColumnCounts& w) {
    const Prime& p = w.p;
    for (int l = 1; l <= p.value() - 1; ++l)
        if (weighted_power_sum(w, l) != 0) return l - 1;
    return p.value() - 1;
}

std::optional<std::pair<int, int>> affine_profile_test(const ColumnCounts& w) {
    const Prime& p = w.p;
    int beta = p.reduce(w.w[0]);
    int alpha = p.reduce(w.w[1] - w.w[0]);
    for (int j = 0; j < p.value(); ++j)
        if (p.reduce(w.w[static_cast<size_t>(j)]) !=
            p.reduce(static_cast<long long>(alpha) * j + beta))
            return std::nullopt;
    return std::make_pair(alpha, beta);
}

CrosscheckReport verify_redei_crosscheck(Prime p, int samples, uint64_t seed) {
    CrosscheckReport rep;
    auto check = [&](const PointSet& s) {
        for (int m = 0; m < p.value() && rep.pass; ++m) {
            bool via_poly = is_equidistributed_redei(s, m);
            bool via_counts = is_equidistributed(s, Direction::slope(m));
            ++rep.cases;
            if (via_poly != via_counts) {
                rep.pass = false;
                rep.detail = "disagreement at m=" + std::to_string(m) + " on a set of size " +
                             std::to_string(s.size());
            }
        }
    };
    if (p.value() == 3) {
        for (uint64_t mask = 0; mask < (1u << 9) && rep.pass; ++mask) {
            PointSet s = PointSet::from_mask64(p, mask);
            if (s.size() % 3 == 0) check(s);
        }
        return rep;
    }
    std::mt19937_64 rng(seed);
    int cells = p.value() * p.value();
    for (int it = 0; it < samples && rep.pass; ++it) {
        int n = 1 + static_cast<int>(rng() % static_cast<uint64_t>(p.value()));
        PointSet s(p);
        while (s.size() < n * p.value()) {
            int cell = static_cast<int>(rng() % static_cast<uint64_t>(cells));
            s.insert(cell % p.value(), cell / p.value());
        }
        check(s);
    }
    return rep;
}

}  // namespace dirspec
