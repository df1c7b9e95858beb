#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dirspec/core.hpp"

namespace dirspec {

// Dense polynomial over F_p, coefficients ascending by degree, trimmed so the
// leading coefficient is nonzero (the zero polynomial has no coefficients).
class UniPoly {
  public:
    explicit UniPoly(Prime p) : p_(p) {}
    UniPoly(Prime p, std::vector<long long> coeffs);
    static UniPoly constant(Prime p, long long c) { return UniPoly(p, {c}); }
    const Prime& prime() const { return p_; }
    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    int coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(k)] : 0;
    }
    const std::vector<int>& coeffs() const { return c_; }
    int eval(long long x) const;
    UniPoly operator+(const UniPoly& o) const;
    UniPoly operator*(const UniPoly& o) const;
    UniPoly scaled(long long k) const;
    // Multiply by the monic linear factor (x + a).
    UniPoly times_linear(long long a) const;
    UniPoly pow(int n) const;
    friend bool operator==(const UniPoly&, const UniPoly&) = default;

  private:
    void trim();
    Prime p_;
    std::vector<int> c_;
};

// x^p - x over F_p, the product of all monic linear factors.
UniPoly field_vanishing_poly(Prime p);

// Redei polynomial specialized at slope parameter m: the product over
// (a, b) in S of (x - a m + b). Throws std::invalid_argument on empty S.
UniPoly redei_at(const PointSet& s, int m);

// Factorization test for slope m: requires p | |S| and holds iff
// redei_at(S, m) == (x^p - x)^{|S|/p}. Agrees with the direct line-count
// test for the slope-m direction. The vertical direction has no slope
// parameter and is always checked through profiles instead.
bool is_equidistributed_redei(const PointSet& s, int m);

enum class SignConvention {
    // g_i = sigma_i(b_1 - a_1 y, ..., b_n - a_n y): the exact coefficient of
    // x^{|S|-i} in prod (x + b_j - a_j y).
    product,
    // sigma_i(a_j y - b_j) = (-1)^i times the product convention.
    alternating,
};

struct SymCoeffs {
    Prime p;
    int n = 0;  // |S|
    SignConvention convention = SignConvention::product;
    // g[i] for 0 <= i <= n, each a polynomial in y with deg <= i; g[0] = 1.
    std::vector<UniPoly> g;
};

SymCoeffs symmetric_coefficients(const PointSet& s,
                                 SignConvention convention = SignConvention::product);

// Reassemble H_S(x, m) from coefficients: sum g_i(m) x^{n-i}.
UniPoly assemble_at(const SymCoeffs& sc, int m);

struct ColumnCounts {
    Prime p;
    std::vector<long long> w;  // w[j] = number of points with x = j
    friend bool operator==(const ColumnCounts&, const ColumnCounts&) = default;
};

ColumnCounts column_counts(const PointSet& s);

// Sum over (a, b) in S of a^l mod p; equals sum_j w_j j^l.
int power_sum_leading(const PointSet& s, int l);

// Largest L with sum_j w_j j^l == 0 mod p for all 1 <= l <= L; 0 when l = 1
// already fails, p - 1 when every l vanishes.
int orthogonality_level(const ColumnCounts& w);

// (alpha, beta) with w_j == alpha j + beta mod p for all j, when they exist.
// The congruence is mod p: counts may exceed p - 1 and still pass.
std::optional<std::pair<int, int>> affine_profile_test(const ColumnCounts& w);

struct CrosscheckReport {
    bool pass = true;
    long long cases = 0;
    std::string detail;  // first disagreement when pass is false
};

// Agreement of the factorization test with direct line counts over all slope
// parameters: exhaustive over all subsets at p = 3, seeded random sets with
// p | |S| otherwise.
CrosscheckReport verify_redei_crosscheck(Prime p, int samples, uint64_t seed);

}  // namespace dirspec
