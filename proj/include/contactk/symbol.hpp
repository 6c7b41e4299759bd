#pragma once

#include "monomial.hpp"
#include "superpoly.hpp"

#include <compare>
#include <string>

namespace ck {

// Normal-form operator monomial dx^k o eta_{i1} o ... o eta_{im} with
// i1 < ... < im. The rightmost factor (largest index) acts first.
// Composition uses eta_i o eta_i = -dx and eta_i o eta_j = -eta_j o eta_i.
struct Sym {
    int k = 0;
    Mask etas = 0;

    int parity() const { return popcount(etas) & 1; }
    bool is_identity() const { return k == 0 && etas == 0; }
    auto operator<=>(const Sym&) const = default;
};

struct SignedSym {
    int sign; // +1 or -1
    Sym sym;
};

// Product a o b in the symbol algebra.
inline SignedSym sym_mul(Sym a, Sym b) {
    int sign = 1;
    Mask cur = a.etas;
    int k = a.k + b.k;
    for (Mask rest = b.etas; rest;) {
        int t = std::countr_zero(rest);
        rest &= rest - 1;
        if (popcount(cur & ~((Mask{2} << t) - 1)) & 1) sign = -sign;
        if (cur & (Mask{1} << t)) { // eta_t o eta_t = -dx
            sign = -sign;
            ++k;
            cur &= ~(Mask{1} << t);
        } else {
            cur |= Mask{1} << t;
        }
    }
    return {sign, {k, cur}};
}

// Evaluate the symbol on a polynomial: etas right-to-left, then dx^k.
inline SuperPoly apply_sym(Sym s, const SuperPoly& p) {
    SuperPoly r = p;
    Mask rest = s.etas;
    while (rest) {
        int t = 31 - std::countl_zero(rest); // largest index first
        rest &= ~(Mask{1} << t);
        r = r.eta(t + 1);
    }
    for (int i = 0; i < s.k; ++i) r = r.dx();
    return r;
}

inline std::string format_sym(Sym s) {
    std::string out;
    if (s.k == 1) out = "dx";
    else if (s.k > 1) out = "dx^" + std::to_string(s.k);
    for (Mask rest = s.etas; rest;) {
        int b = std::countr_zero(rest);
        rest &= rest - 1;
        if (!out.empty()) out += "*";
        out += "e" + std::to_string(b + 1);
    }
    return out.empty() ? "1" : out;
}

} // namespace ck
