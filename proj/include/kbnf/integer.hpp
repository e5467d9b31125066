#pragma once

// Arbitrary-precision integer type used throughout the library, plus the
// handful of arithmetic helpers the reduction kernels rely on.
//
// Everything is typedef'd so the backing big-integer implementation can be
// swapped in one place.

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cstddef>
#include <cstdint>

namespace kbnf {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline int sign(const Int& x) { return x.sign(); }

// Floor division, b > 0.  Int's operator/ truncates toward zero.
inline Int floor_div(const Int& a, const Int& b) {
    assert(b > 0);
    Int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

// Residue in [0, b), b > 0.
inline Int floor_mod(const Int& a, const Int& b) {
    Int r = a % b;
    if (r < 0) r += b;
    return r;
}

// Decimal digit count of |x|, up to +/-1 (bit-length based; 0 counts as 1).
// Cheap enough to run over whole matrices; used only for diagnostics.
inline std::size_t decimal_digits_estimate(const Int& x) {
    if (x == 0) return 1;
    const std::size_t bits = boost::multiprecision::msb(abs(x)) + 1;
    return static_cast<std::size_t>(static_cast<double>(bits) * 0.30102999566398119) + 1;
}

}  // namespace kbnf
