#pragma once

#include "binop.hpp"

#include <array>
#include <optional>

namespace ck {

// Reinterpret arity-(n-1) objects inside n odd variables (masks unchanged).
SuperPoly embed_poly(const SuperPoly& p, int n);
DiffOp embed_op(const DiffOp& a, int n);
BinOp embed_binop(const BinOp& t, int n);

// Projection to the theta_n-free part F1 of F = F1 + F2 theta_n.
DiffOp part1_op(int n); // 1 - theta_n d_n
// Extraction of F2 (sigma o d_n).
DiffOp part2_op(int n);
// Right multiplication by theta_n as a left composition: V theta_n = theta_n sigma(V).
DiffOp out2_op(int n);

// Transport along the theta_n splitting: four operators over n-1 variables with weight
// shifts (lam+j/2, mu+k/2), Pi-tagged when j+k is odd, assemble to one operator
// on D^n_{lam,mu}. Index = j + 2k.
struct PhiParts {
    int n = 0; // ambient arity of the result
    Rat lam, mu;
    std::array<std::optional<DiffOp>, 4> parts;
};

DiffOp phi_lift(const PhiParts& p);

// The binary version of the splitting transport: eight binary operators over n-1 variables with
// signatures (lam+j/2, mu+l/2; nu+k/2), Pi-tagged when j+l+k is odd.
// Index = j + 2l + 4k. The sigma insertions of the identification table show up
// as a parity sign on the second slot whenever j = 1.
struct PsiParts {
    int n = 0;
    Rat lam, mu, nu;
    std::array<std::optional<BinOp>, 8> parts;
};

BinOp psi_lift(const PsiParts& p);

// chi(A) = Pi(sigma o A), the parity transport D_{lam,mu} -> Pi(D_{lam,mu}).
DiffOp chi_op(const DiffOp& a);

} // namespace ck
