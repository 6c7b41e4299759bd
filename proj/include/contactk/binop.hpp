#pragma once

#include "diffop.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ck {

// Working term of a bilinear differential operator. On parity-homogeneous
// arguments (F, G) it evaluates as
//   q * (-1)^{s1|F| + s2|G| + s12|F||G|} * c * (d1 F) * (d2 G),
// extended bilinearly. The parity-sign flags appear transiently while
// composing; normalization expands them through the concrete operator
// sigma = prod_i (1 - 2 theta_i eta_i), so the stored normal form is flag-free
// and equality is structural.
struct WTerm {
    Rat q;
    Monomial c;
    bool s1 = false, s2 = false, s12 = false;
    Sym d1, d2;
};

using WTerms = std::vector<WTerm>;

using SymPair = std::pair<Sym, Sym>;

// Bilinear differential operator F_{w1} (x) F_{w2} -> F_{wout} in normal form:
// sum a(x,theta) (D1 F)(D2 G) keyed by the symbol pair.
class BinOp {
public:
    BinOp() = default;
    BinOp(int n, Rat w1, Rat w2, Rat wout)
        : n_(n), w1_(std::move(w1)), w2_(std::move(w2)), wout_(std::move(wout)) {}

    int arity() const { return n_; }
    const Rat& w1() const { return w1_; }
    const Rat& w2() const { return w2_; }
    const Rat& wout() const { return wout_; }
    const std::map<SymPair, SuperPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(SymPair k, const SuperPoly& coeff);

    BinOp operator-() const;
    BinOp operator+(const BinOp& o) const;
    BinOp operator-(const BinOp& o) const;
    BinOp operator*(const Rat& c) const;
    bool equal_terms(const BinOp& o) const { return terms_ == o.terms_; }

    SuperPoly evaluate(const SuperPoly& f, const SuperPoly& g) const;

    Parity parity() const;
    int parity_bit() const;
    int max_order() const; // max over terms of k1+|E1|+k2+|E2|

private:
    int n_ = 0;
    Rat w1_, w2_, wout_;
    std::map<SymPair, SuperPoly> terms_;
};

WTerms wterms_of(const BinOp& t);
BinOp normalize(const WTerms& terms, int n, const Rat& w1, const Rat& w2, const Rat& wout);

// T(B F, G): composes B into slot 1.
WTerms wt_compose_slot1(const WTerms& terms, const DiffOp& b);
// T(F, B G): composes B into slot 2 (coefficients crossing slot 1 toggle s1).
WTerms wt_compose_slot2(const WTerms& terms, const DiffOp& b);
// A(T(F, G)): composes A after the output.
WTerms wt_compose_out(const DiffOp& a, const WTerms& terms);
WTerms wt_twist_s1(WTerms terms); // multiply by (-1)^{|F|}
WTerms wt_scale(WTerms terms, const Rat& c);

// Convenience wrappers staying in normal form.
BinOp compose_slot1(const BinOp& t, const DiffOp& b);
BinOp compose_slot2(const BinOp& t, const DiffOp& b);
BinOp compose_out(const DiffOp& a, const BinOp& t);

// X_H . T = L^wout_H o T - (-1)^{|T||H|} ( T o (L^w1_H (x) 1) + T o (sigma^{|H|} (x) L^w2_H) ),
// the natural action on binary operators with the Leibniz rule on the source.
BinOp binary_module_action(const SuperPoly& h, const BinOp& t);

// The same action computed purely by evaluation; cross-check oracle for the
// symbolic route.
SuperPoly binary_action_eval(const SuperPoly& h, const BinOp& t, const SuperPoly& f, const SuperPoly& g);

std::string format_binop(const BinOp& t);

// Term-by-term construction from readable specs. Slots may be given as whole
// DiffOps (with coefficients); sign flags refer to the parities of the final
// arguments (F, G).
class BinBuilder {
public:
    explicit BinBuilder(int n) : n_(n) {}

    void term(const Rat& q, const SuperPoly& coef, bool s1, bool s2, bool s12,
              const DiffOp& d1, const DiffOp& d2);
    void term(const Rat& q, bool s1, Sym d1, Sym d2);

    BinOp build(const Rat& w1, const Rat& w2, const Rat& wout) const {
        return normalize(ts_, n_, w1, w2, wout);
    }
    const WTerms& wterms() const { return ts_; }

private:
    int n_;
    WTerms ts_;
};

} // namespace ck
