#pragma once

#include <bit>
#include <compare>
#include <cstdint>

namespace ck {

// theta-index sets are bitmasks; bit b (0-based) stands for theta_{b+1}.
using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

inline Mask bit(int i) { return Mask{1} << (i - 1); } // 1-based index

// #{(s,t) in A x B : s > t}; the reordering sign of theta_A * theta_B is (-1)^this.
inline int inversions(Mask a, Mask b) {
    int count = 0;
    for (Mask rest = b; rest;) {
        int t = std::countr_zero(rest);
        rest &= rest - 1;
        count += std::popcount(a & ~((Mask{2} << t) - 1));
    }
    return count;
}

// #{j in S : j < i} for 1-based i; sign exponent of the left derivative d_i(theta_S).
inline int bits_below(Mask s, int i) { return std::popcount(s & (bit(i) - 1)); }

// Basis monomial x^xdeg * theta_S with S ascending.
struct Monomial {
    int xdeg = 0;
    Mask mask = 0;

    int parity() const { return popcount(mask) & 1; }
    auto operator<=>(const Monomial&) const = default;
};

} // namespace ck
