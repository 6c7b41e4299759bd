#pragma once

#include "binop.hpp"
#include "contact.hpp"
#include "exactla.hpp"
#include "invariants.hpp"
#include "lifts.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ck {

// Differential 1-cochain K(n) -> D^n_{lam,mu}, stored as a bilinear operator
// whose first slot receives the generator G of X_G (the adjoint module is
// F^n_{-1}, so cochains are binary operators with source weights (-1, lam)):
//   Y(X_G) = sum a(theta) (D1 G) (D2 .)
struct Cochain1 {
    int n = 0;
    Rat lam, mu;
    BinOp body; // weights (-1, lam; mu)

    Cochain1() = default;
    Cochain1(int n_, Rat l, Rat m) : n(n_), lam(l), mu(m), body(n_, Rat(-1), l, m) {}
    Cochain1(int n_, Rat l, Rat m, BinOp b) : n(n_), lam(std::move(l)), mu(std::move(m)), body(std::move(b)) {}

    DiffOp eval_at(const SuperPoly& g) const; // the operator Y(X_G)
    bool is_zero() const { return body.is_zero(); }
    int parity_bit() const { return body.parity_bit(); }
    Cochain1 operator+(const Cochain1& o) const;
    Cochain1 operator-(const Cochain1& o) const;
    Cochain1 operator*(const Rat& c) const;
    bool equal_terms(const Cochain1& o) const { return body.equal_terms(o.body); }
};

// delta of a 0-cochain: (delta A)(X_G) = (-1)^{|G||A|} X_G . A, materialized in
// cochain normal form. Works for x-dependent A as well.
Cochain1 delta0(const DiffOp& a);

// The Pi-twisted counterpart, for cocycles valued in Pi(D_{lam,mu}).
Cochain1 delta0_pi(const DiffOp& a);

// delta(Y)(X_F, X_G) as an exact operator; zero for every pair iff Y is a cocycle.
DiffOp delta1_defect(const Cochain1& y, const ContactField& xf, const ContactField& xg);
DiffOp delta1_defect_pi(const Cochain1& y, const ContactField& xf, const ContactField& xg);

struct CocycleCheck {
    bool ok = false;
    SuperPoly witness_f, witness_g; // first failing pair
};

// Certified cocycle test. Pairs run over a Lie-generating family crossed with
// the full monomial window of the evaluation-completeness bound; the
// bracket-closure certificate (below) makes the check exhaustive.
CocycleCheck is_cocycle(const Cochain1& y, int dmax = 3);
CocycleCheck is_cocycle_pi(const Cochain1& y, int dmax = 3);

// Verifies that iterated brackets of {x^m, x^m theta_i : m <= 3} span every
// monomial field of x-degree <= deg (certificate backing is_cocycle).
bool generation_certificate(int n, int deg);

// The Lie-generating seed family used by the certified checks.
std::vector<SuperPoly> cocycle_seed_family(int n);

// Restriction test: Y vanishes on the subalgebra {X_F : d_i F = 0 for i in
// avoid} (checked on the completeness window).
bool vanishes_on_subalgebra(const Cochain1& y, Mask avoid);

// Cocycle condition restricted to the subalgebra avoiding the masked thetas.
CocycleCheck is_cocycle_on(const Cochain1& y, Mask avoid, int dmax = 3);

// Solve delta0(A) = Y over operators with coefficients of x-degree <= 1 and
// order <= max_order; nullopt means no potential exists at this order.
std::optional<DiffOp> is_coboundary(const Cochain1& y, int max_order);
std::optional<DiffOp> is_coboundary_pi(const Cochain1& y, int max_order);

// Same question restricted to a subalgebra: delta0(A) = Y on all X_F with
// d_i F = 0 for i in avoid.
std::optional<DiffOp> is_coboundary_on(const Cochain1& y, Mask avoid, int max_order);

// Unary ansatz machinery shared by the coboundary solver and H^1 pipeline.
struct UnaryKey {
    Monomial c;
    Sym s;
    auto operator<=>(const UnaryKey&) const = default;
};
std::vector<UnaryKey> unary_ansatz(int n, int max_order, int max_xdeg);
int unary_order(const UnaryKey& k);  // k + ceil(|etas|/2)
int unary_sector(const UnaryKey& k); // 2k + |etas| - |c.mask| - 2 c.xdeg
DiffOp materialize_unary(int n, const Rat& lam, const Rat& mu,
                         const std::vector<UnaryKey>& keys, const SparseVec& v);

// --- cocycle catalog -------------------------------------------------------

struct CocycleEntry {
    std::string name;
    int n;
    Rat mu_minus_lambda;
    std::function<bool(const Rat&)> lam_ok;
    std::function<Cochain1(const Rat&)> build; // lambda -> cochain
    std::string provenance;
    int order; // ansatz order of the cochain
};

std::vector<CocycleEntry> cocycle_catalog(int n);
std::optional<Cochain1> build_cocycle(const std::string& name, int n, const Rat& lam);
std::vector<std::string> cocycle_names(int n);

// Upsilon^{3,i}_{-1/2,0} of the relative analysis (i = 1, 2, 3; i = 3 is the
// distinguished cocycle of the (-1/2, 0) module).
Cochain1 odd_cocycle_variant(int i);

// Exact identity: ups3 + (-1)^j ups3i(j) = 2 (-1)^j delta((theta3 eta_j + theta_j eta3) eta_{3-j}).
bool verify_index_swap_identity(int j);

// Catalog of coboundary potentials over K(2)^i vanishing on K(1)^{m_i},
// in ambient n = 3 with variable i unused. Empty when (lam, mu) is off-table.
std::vector<DiffOp> coboundary_catalog_k2(int i, int m_i, const Rat& lam, const Rat& mu);

// --- H^1 computation --------------------------------------------------------

struct H1Report {
    int n = 0;
    Rat lam, mu;
    int max_order = 0;
    int generator_dmax = 0;
    int z_dim = 0, b_dim = 0, h1_dim = 0;
    std::vector<std::string> representatives; // basis of a complement of B in Z
    std::vector<std::string> matched_catalog; // catalog entries spanning the quotient
    bool catalog_covers = false;
    bool verified = false;
    std::string note;
};

struct H1Options {
    int dmax = 3;
    bool all_sectors = false; // cross-check mode: compute every grading sector
};

// Bounded-order H^1_diff(K(n); D_{lam,mu}). The cochain ansatz has
// x-independent theta-polynomial coefficients; the coboundary space is the
// x-independent part of delta0 over potentials with x-degree <= 1 and order
// <= max_order + 2. Computation is restricted to the zero-eigenvalue sector of
// the X_x grading (nonzero sectors are exact via the contraction homotopy
// delta iota_X + iota_X delta = L_X); --all-sectors re-verifies this.
H1Report h1_dim(int n, const Rat& lam, const Rat& mu, int max_order, const H1Options& opts = {});

// K(n-1)^i-relative version: cocycles vanishing on the subalgebra, modulo
// delta0 of invariant operators.
H1Report relative_h1_dim(int n, int i, const Rat& lam, const Rat& mu, int max_order,
                         const H1Options& opts = {});

// Streams the certified cocycle-constraint rows (entries indexed by ansatz
// term) for pairs (seed, window monomial) in deterministic order.
void assemble_cocycle_constraints(int n, const Rat& lam, const Rat& mu,
                                  const std::vector<AnsatzKey>& keys, int window,
                                  const std::function<void(SparseVec&)>& sink);

} // namespace ck
