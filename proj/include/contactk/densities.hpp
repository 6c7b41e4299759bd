#pragma once

#include "contact.hpp"
#include "rat.hpp"
#include "superpoly.hpp"

namespace ck {

// Weighted density F * alpha_n^lambda in F^n_lambda.
struct Density {
    SuperPoly coeff;
    Rat weight;

    Density() = default;
    Density(SuperPoly c, Rat w) : coeff(std::move(c)), weight(std::move(w)) {}
    int arity() const { return coeff.arity(); }
    bool operator==(const Density& o) const { return coeff == o.coeff && weight == o.weight; }
};

// Image under phi_lambda: F = F1 + F2 theta_n maps to (F1 a^lambda, Pi(F2 a^{lambda+1/2}))
// over n-1 odd variables; the Pi flag flips the effective parity of pi_part.
struct SplitDensity {
    Density even_part; // weight lambda
    Density pi_part;   // weight lambda + 1/2, Pi-tagged
};

// L^lambda_{X_F} d = (X_F(coeff) + lambda F' coeff) alpha^lambda.
Density act_density(const ContactField& x, const Density& d);

SplitDensity split_phi(const Density& d);
Density unsplit_phi(const SplitDensity& s); // exact inverse; weights must differ by 1/2

// CLI literal "poly @ lambda", e.g. "x*t1 @ -1/2".
Density parse_density(const std::string& text, int n);
std::string format_density(const Density& d);

} // namespace ck
