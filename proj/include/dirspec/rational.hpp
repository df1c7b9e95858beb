#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace dirspec {

// Exact rational scalar. All grid arithmetic in this library is exact; there
// is no floating point anywhere in the computation paths.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// "3", "-7", "2/5". Denominator 1 prints without the slash.
std::string rat_to_string(const Rat& r);

// Accepts optional sign, "a" or "a/b" with b > 0 after canonicalization.
// Throws std::invalid_argument on malformed input or zero denominator.
Rat rat_from_string(const std::string& s);

}  // namespace dirspec
