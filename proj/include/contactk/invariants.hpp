#pragma once

#include "binop.hpp"
#include "contact.hpp"
#include "densities.hpp"
#include "exactla.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ck {

// One operator from the invariant catalog (the K(1) list and the even
// operators a, b, c, d, e for n >= 2), instantiated at concrete weights.
struct CatalogEntry {
    std::string name;
    int n;
    Rat lam, mu, nu;
    BinOp op;
    std::string provenance;
};

// All catalog operators applicable at (n, lambda, mu, nu); empty when none.
std::vector<CatalogEntry> catalog(int n, const Rat& lam, const Rat& mu, const Rat& nu);

// The operators by name at weights where they apply (for tests and the CLI).
std::optional<CatalogEntry> catalog_entry(const std::string& name, int n,
                                          const Rat& lam, const Rat& mu, const Rat& nu);
std::vector<std::string> catalog_names(int n);

struct InvarianceResult {
    bool ok = false;
    SuperPoly witness;     // first generator with nonzero defect
    BinOp defect;          // the nonzero action X_witness . T
};

// True iff binary_module_action(X, T) = 0 for every X in generators(n, dmax).
InvarianceResult is_invariant(const BinOp& t, int dmax);
// Certified variant: X runs over all monomial fields within the evaluation-
// completeness bound derived from T's orders, full masks included.
InvarianceResult is_invariant_certified(const BinOp& t);

// Ansatz term of the search: theta-monomial coefficient, symbol pair.
struct AnsatzKey {
    Monomial c;
    Sym d1, d2;
    auto operator<=>(const AnsatzKey&) const = default;
};

int ansatz_order(const AnsatzKey& k); // k1 + k2 + ceil((e1+e2)/2)
int ansatz_sector(const AnsatzKey& k); // 2(k1+k2) + e1 + e2 - |c.mask| - 2 c.xdeg

struct SearchResult {
    std::vector<BinOp> basis;      // invariant operators, canonically scaled
    std::vector<AnsatzKey> ansatz; // the candidate terms searched
    bool verified = false;         // every basis element re-verified
    bool matches_catalog = false;  // basis lies in the span of catalog entries
};

// Exact ansatz search for invariant binary operators F_lam (x) F_mu -> F_nu.
// The ansatz has x-independent theta-polynomial coefficients, filtered to the
// X_x-grading sector 2(nu-lam-mu) unless grading_filter is false.
SearchResult search_invariant(int n, const Rat& lam, const Rat& mu, const Rat& nu,
                              int max_order, bool grading_filter = true);

// Poisson bracket of weighted densities (weight lam+mu+1):
//   mu F'G - lam FG' - 1/2 (-1)^{|F|} sum eta_i(F) eta_i(G).
Density poisson(const Density& d1, const Density& d2);

struct PoissonReport {
    bool antisymmetry = false;
    bool jacobi = false;
    bool leibniz = false;
    bool ok() const { return antisymmetry && jacobi && leibniz; }
};

// Exhaustive exact check of the Poisson superalgebra laws on monomials of
// x-degree <= max_xdeg at the given weight samples.
PoissonReport verify_poisson_laws(int n, const std::vector<Rat>& weights, int max_xdeg = 2);

} // namespace ck
