#pragma once

#include "monomial.hpp"
#include "rat.hpp"

#include <map>
#include <string>

namespace ck {

enum class Parity { even, odd, mixed };

// Element of R[x, theta_1..theta_n] with exact rational coefficients.
// Terms are kept in canonical form: theta factors ascending, no zero
// coefficients, so structural equality is mathematical equality.
class SuperPoly {
public:
    SuperPoly() = default;
    explicit SuperPoly(int n) : n_(n) {}

    static SuperPoly zero(int n) { return SuperPoly(n); }
    static SuperPoly constant(int n, const Rat& c);
    static SuperPoly one(int n) { return constant(n, 1); }
    static SuperPoly x_pow(int n, int m);
    static SuperPoly theta(int n, int i);
    static SuperPoly mono(int n, Monomial m, const Rat& c = 1);

    int arity() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rat>& terms() const { return terms_; }

    void add_term(Monomial m, const Rat& c);
    Rat coeff(Monomial m) const;

    SuperPoly operator-() const;
    SuperPoly operator+(const SuperPoly& o) const;
    SuperPoly operator-(const SuperPoly& o) const;
    SuperPoly operator*(const SuperPoly& o) const; // supercommutative product
    SuperPoly operator*(const Rat& c) const;
    SuperPoly& operator+=(const SuperPoly& o);
    bool operator==(const SuperPoly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    SuperPoly dx() const;
    SuperPoly dtheta(int i) const; // left derivative
    SuperPoly eta(int i) const;    // eta_i = d_i - theta_i d_x

    Parity parity() const;
    bool is_homogeneous() const { return parity() != Parity::mixed; }
    int parity_bit() const; // requires homogeneous; 0 for the zero polynomial
    int max_xdeg() const;

private:
    int n_ = 0;
    std::map<Monomial, Rat> terms_;
};

inline SuperPoly operator*(const Rat& c, const SuperPoly& p) { return p * c; }

std::string format_poly(const SuperPoly& p);
SuperPoly parse_poly(const std::string& text, int n); // throws parse_error

// f = f1 + f2*theta_n with d_n f1 = d_n f2 = 0; returns (f1, f2) over n-1 variables.
std::pair<SuperPoly, SuperPoly> split_theta_n(const SuperPoly& p);
// Inverse embedding: n-1 variable polys to f1 + f2*theta_n in n variables.
SuperPoly join_theta_n(const SuperPoly& f1, const SuperPoly& f2);

} // namespace ck
