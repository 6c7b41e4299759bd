#pragma once

#include "contactk/superpoly.hpp"

#include <vector>

namespace ck::testing {

inline std::vector<Monomial> monomials(int n, int max_xdeg) {
    std::vector<Monomial> out;
    Mask full = (Mask{1} << n) - 1;
    for (int m = 0; m <= max_xdeg; ++m)
        for (Mask s = 0; s <= full; ++s) out.push_back({m, s});
    return out;
}

inline std::vector<SuperPoly> monomial_polys(int n, int max_xdeg) {
    std::vector<SuperPoly> out;
    for (auto m : monomials(n, max_xdeg)) out.push_back(SuperPoly::mono(n, m));
    return out;
}

} // namespace ck::testing
