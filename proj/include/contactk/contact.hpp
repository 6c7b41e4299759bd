#pragma once

#include "diffop.hpp"
#include "superpoly.hpp"

#include <vector>

namespace ck {

// Contact vector field X_F = F dx - 1/2 (-1)^{|F|} sum eta_i(F) eta_i on R^{1|n},
// represented by its generator F. Generators must be parity-homogeneous; mixed
// input is rejected so that the (-1)^{|F|} signs stay single-valued.
struct ContactField {
    int n = 0;
    SuperPoly gen;

    ContactField() = default;
    ContactField(int n_, SuperPoly f) : n(n_), gen(std::move(f)) {
        if (gen.arity() != n) throw error("generator arity mismatch");
        if (!gen.is_homogeneous()) throw error("contact field generator must be parity-homogeneous");
    }
    int parity_bit() const { return gen.parity_bit(); }
};

// Contact bracket {F,G} = FG' - F'G - 1/2 (-1)^{|F|} sum eta_i(F) eta_i(G).
SuperPoly contact_bracket(const SuperPoly& f, const SuperPoly& g);

// X_F as a first-order operator on R[x,theta] (weight 0 -> 0) in normal form.
DiffOp vector_field_of(const ContactField& x);

// [X_F, X_G] = X_{{F,G}}.
ContactField bracket_as_fields(const ContactField& x, const ContactField& y);

// Generator family: all X_{x^m theta_S} with m <= dmax. For n >= 2 only proper
// masks S (d_1...d_n F = 0); for n = 1 all masks, since brackets of even fields
// never reach the odd part.
std::vector<ContactField> generators(int n, int dmax);

// All monomial fields x^m theta_S, m <= dmax, every mask. Used wherever a
// spanning family (rather than a Lie-generating one) is needed.
std::vector<ContactField> monomial_fields(int n, int dmax);

} // namespace ck
