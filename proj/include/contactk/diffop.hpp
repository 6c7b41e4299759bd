#pragma once

#include "rat.hpp"
#include "superpoly.hpp"
#include "symbol.hpp"

#include <map>
#include <string>
#include <vector>

namespace ck {

// Differential operator F_lambda -> F_mu in eta-normal form:
//   A = sum a(x,theta) dx^k eta_{i1}...eta_{im},  coefficient on the left.
// The normal form is a free basis, so structural equality of the term map
// is equality of operators.
class DiffOp {
public:
    DiffOp() = default;
    DiffOp(int n, Rat src_w, Rat tgt_w) : n_(n), src_(std::move(src_w)), tgt_(std::move(tgt_w)) {}

    static DiffOp identity(int n, const Rat& src, const Rat& tgt);
    static DiffOp from_sym(int n, Sym s, const Rat& src, const Rat& tgt);
    static DiffOp mult(const SuperPoly& a, const Rat& src, const Rat& tgt); // left multiplication by a

    int arity() const { return n_; }
    const Rat& src_weight() const { return src_; }
    const Rat& tgt_weight() const { return tgt_; }
    const std::map<Sym, SuperPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(Sym s, const SuperPoly& coeff);
    DiffOp with_weights(const Rat& src, const Rat& tgt) const;

    DiffOp operator-() const;
    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp operator*(const Rat& c) const;
    bool equal_terms(const DiffOp& o) const { return terms_ == o.terms_; }

    SuperPoly apply(const SuperPoly& p) const;

    Parity parity() const;
    int parity_bit() const; // requires parity-homogeneous
    int max_order() const;  // max over terms of k + |etas|

private:
    int n_ = 0;
    Rat src_, tgt_;
    std::map<Sym, SuperPoly> terms_;
};

// Normal-form recompose of dx^k eta_E o (b .) for homogeneous monomials of b:
// returns pairs (c_j, T_j) meaning sum (c_j .) o T_j.
std::vector<std::pair<SuperPoly, Sym>> push_through(Sym s, const SuperPoly& b);

// Operator composition A o B, renormalized (weight chains checked).
DiffOp normal_compose(const DiffOp& a, const DiffOp& b);

// Super-commutator [A, B] = A o B - (-1)^{|A||B|} B o A (same weights both ways).
DiffOp super_commutator(const DiffOp& a, const DiffOp& b);

// L^w_{X_F} = (F.) dx - 1/2 (-1)^{|F|} sum (eta_i F .) eta_i + (w F' .),
// the density action operator of weight w. F must be parity-homogeneous.
DiffOp density_action_op(const SuperPoly& f, const Rat& w);

// X_F . A = L^mu_{X_F} o A - (-1)^{|A||F|} A o L^lambda_{X_F}   (Eq-7 style action)
DiffOp module_action(const SuperPoly& f, const DiffOp& a);

// Same action with the density operators precomputed; koszul_bit = |A||F| mod 2.
DiffOp module_action_with(const DiffOp& l_tgt, const DiffOp& l_src, int koszul_bit, const DiffOp& a);

// Pi-twisted action on Pi(D_{lambda,mu}): the Koszul sign uses |A|+1.
DiffOp module_action_pi(const SuperPoly& f, const DiffOp& a);

// sigma(F) = (-1)^{|F|} F as a differential operator: prod_i (1 - 2 theta_i eta_i).
const DiffOp& sigma_op(int n);

std::string format_diffop(const DiffOp& a);

} // namespace ck
