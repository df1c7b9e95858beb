#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dirspec/core.hpp"

namespace dirspec {

enum class TriangleVariant { lower, upper };

// lower: {(a, b): b < a} as integers, p(p-1)/2 points, special directions
// exactly {(1,0), (1,1), (0,1)}. upper: {(a, b): a + b >= p}, the mirror
// image with special directions {(1,0), (1,p-1), (0,1)}.
PointSet triangle_set(Prime p, TriangleVariant variant = TriangleVariant::lower);

// Length-p rational vector with cyclic index arithmetic.
class RowVector {
  public:
    explicit RowVector(Prime p) : p_(p), v_(static_cast<size_t>(p.value()), Rat(0)) {}
    RowVector(Prime p, std::vector<Rat> v);
    const Prime& prime() const { return p_; }
    int size() const { return p_.value(); }
    Rat& operator[](long long i) { return v_[static_cast<size_t>(p_.reduce(i))]; }
    const Rat& operator[](long long i) const { return v_[static_cast<size_t>(p_.reduce(i))]; }
    Rat total() const;
    RowVector operator+(const RowVector& o) const;
    RowVector operator-(const RowVector& o) const;
    RowVector scaled(const Rat& k) const;
    friend bool operator==(const RowVector&, const RowVector&) = default;

  private:
    Prime p_;
    std::vector<Rat> v_;
};

RowVector ones_row(Prime p);
RowVector unit_row(Prime p, long long idx);
// e_0 - e_j; rejects j == 0 mod p.
RowVector basis_vector(Prime p, long long j);
// result(i) = v(i - k); additive in k, periodic with period p.
RowVector shift(const RowVector& v, long long k);
// L_j(v) = sum_{i=0}^{p-2} ((p-i-1)/p) * shift(v, i*j); rejects j == 0 mod p.
RowVector L_operator(Prime p, long long j, const RowVector& v);

struct IdentityReport {
    bool pass = true;
    long long cases = 0;
    std::string detail;
};

// Exhaustively checks, for every j != 0: (1/p)*ones + L_j(v_j) = e_0, and for
// every k != 0, l with k*l == j: (l/p)*ones + L_k(v_j) = sum_{a<l} e_{a*k}.
// Also checks the v_j = sum of shifted v_k expansion those identities rest on.
IdentityReport verify_l_identities(Prime p);

// p x p integer matrix. Row r corresponds to the plane row y = r, column c to
// x = c, matching the grid file orientation.
struct SignedMatrix {
    Prime p;
    std::vector<long long> v;
    explicit SignedMatrix(Prime prime)
        : p(prime), v(static_cast<size_t>(prime.value()) * prime.value(), 0) {}
    long long& at(int r, int c) { return v[static_cast<size_t>(r) * p.value() + c]; }
    long long at(int r, int c) const { return v[static_cast<size_t>(r) * p.value() + c]; }
    std::vector<long long> row_sums() const;
    friend bool operator==(const SignedMatrix&, const SignedMatrix&) = default;
};

SignedMatrix operator+(const SignedMatrix& a, const SignedMatrix& b);
IntGrid to_grid(const SignedMatrix& m);

// Difference of the two triangles: entry [r + c >= p] - [1 <= c <= r].
SignedMatrix triangle_diff_matrix(Prime p);
// out(r, c) = m(r, c - k mod p).
SignedMatrix shift_columns(const SignedMatrix& m, long long k);
// Constant +1 on plus_cols, -1 on minus_cols; the column sets must be
// disjoint and equally sized so row sums stay 0.
SignedMatrix correction_matrix(Prime p, const std::vector<int>& plus_cols,
                               const std::vector<int>& minus_cols);

// The p = 11 pipeline matrices. The correction columns are 1, 6 (+1) and
// 4, 10 (-1); the printed prose counts them 1-indexed as second, seventh,
// fifth and last.
SignedMatrix build_m11();
SignedMatrix build_c11();
SignedMatrix build_n11();

// Per row, an ordered list of (plus_pos, minus_pos) pairs; a position occurs
// as many times as the absolute value of its entry.
struct RowPairing {
    std::vector<std::vector<std::pair<int, int>>> rows;
};

// The published pairing for the rows of build_n11().
RowPairing fig11_pairing();

// Raised by apply_L_rowwise when a row's output is not a nonnegative
// integer vector under the given pairing and k.
struct RowError : std::runtime_error {
    int row;
    RowError(int r, const std::string& what) : std::runtime_error(what), row(r) {}
};

// For each pair (q, m) of a row: j = m - q, l = j * k^{-1}, and the pair
// contributes the indicator of {q + a*k : 0 <= a < l}; the row then receives
// background[r] - (sum of l)/p added to every entry. With the natural
// background (derive_row_backgrounds) this is exactly (background)*ones +
// L_k(row). Validates that the pairing matches the matrix entries and that
// every output entry is a nonnegative integer.
RatGrid apply_L_rowwise(const SignedMatrix& m, long long k, const RowPairing& pairing,
                        const std::vector<Rat>& background);
// The background making each output row a {0,1}-patterned candidate:
// (sum of pair lengths l) / p per row.
std::vector<Rat> derive_row_backgrounds(const SignedMatrix& m, long long k,
                                        const RowPairing& pairing);

// Printed example sets with exactly 4 special directions. p = 5: the 5-point
// plus shape; p = 7: 14 points; p = 11: the 33-point pipeline output; p = 13:
// the 65-point set derived from the printed multiset (see fig13 helpers).
IntGrid figure_fixture(int p);

// The p = 13 table is printed with only 12 rows and two misplaced weight-2
// entries. These expose the verbatim rows, the minimal column repair, the
// insertion positions of the missing all-zero row that restore the 4 special
// directions (exactly one exists), the completed 65-weight multiset, and its
// conversion to the plain 65-point set used by figure_fixture(13).
std::vector<std::vector<long long>> fig13_printed_rows();
std::vector<std::vector<long long>> fig13_corrected_rows();
std::vector<int> fig13_admissible_insertions();
int fig13_insertion_row();
IntGrid fig13_multiset();
IntGrid fig13_set();

enum class PipelineStatus { found, budget_exhausted, menu_exhausted };

struct PipelineOptions {
    std::optional<int> shift_offset;  // column shift s of the second copy
    std::optional<std::pair<std::vector<int>, std::vector<int>>> correction;
    std::optional<long long> k;
    std::optional<RowPairing> pairing;
    bool allow_weights = false;  // accept entries > 1 (integer multisets)
    long long budget = 20000;    // (shift, correction, k) combinations
    int max_correction_cols = 2;
    long long pairings_per_candidate = 256;
};

struct PipelineOutcome {
    PipelineStatus status = PipelineStatus::menu_exhausted;
    std::optional<IntGrid> grid;
    long long combos_tried = 0;
    std::string params;  // winning parameters, human-readable
};

// Sweeps N = T + shift_columns(T, s) + correction over a deterministic
// parameter menu, pairs each row by backtracking (or uses the pinned
// pairing), applies the L calculus row-wise and returns the first candidate
// whose entries are {0,1} (or nonnegative integers with allow_weights) and
// whose special directions are exactly {(1,0),(1,1),(1,p-1),(0,1)}.
// budget_exhausted and menu_exhausted outcomes are distinct.
PipelineOutcome four_direction_search(Prime p, const PipelineOptions& opt = {});

}  // namespace dirspec
