#include "contactk/superpoly.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace ck {

SuperPoly SuperPoly::constant(int n, const Rat& c) {
    SuperPoly p(n);
    p.add_term({0, 0}, c);
    return p;
}

SuperPoly SuperPoly::x_pow(int n, int m) {
    SuperPoly p(n);
    p.add_term({m, 0}, 1);
    return p;
}

SuperPoly SuperPoly::theta(int n, int i) {
    if (i < 1 || i > n) throw error("theta index out of range");
    SuperPoly p(n);
    p.add_term({0, bit(i)}, 1);
    return p;
}

SuperPoly SuperPoly::mono(int n, Monomial m, const Rat& c) {
    SuperPoly p(n);
    p.add_term(m, c);
    return p;
}

void SuperPoly::add_term(Monomial m, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rat SuperPoly::coeff(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

SuperPoly SuperPoly::operator-() const {
    SuperPoly r(n_);
    for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

SuperPoly SuperPoly::operator+(const SuperPoly& o) const {
    if (n_ != o.n_) throw error("arity mismatch in +");
    SuperPoly r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

SuperPoly& SuperPoly::operator+=(const SuperPoly& o) {
    if (n_ != o.n_) throw error("arity mismatch in +=");
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

SuperPoly SuperPoly::operator-(const SuperPoly& o) const { return *this + (-o); }

SuperPoly SuperPoly::operator*(const SuperPoly& o) const {
    if (n_ != o.n_) throw error("arity mismatch in *");
    SuperPoly r(n_);
    for (auto& [ma, ca] : terms_) {
        for (auto& [mb, cb] : o.terms_) {
            if (ma.mask & mb.mask) continue; // theta_i^2 = 0
            Rat c = ca * cb;
            if (inversions(ma.mask, mb.mask) & 1) c = -c;
            r.add_term({ma.xdeg + mb.xdeg, ma.mask | mb.mask}, c);
        }
    }
    return r;
}

SuperPoly SuperPoly::operator*(const Rat& c) const {
    SuperPoly r(n_);
    if (c == 0) return r;
    for (auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

SuperPoly SuperPoly::dx() const {
    SuperPoly r(n_);
    for (auto& [m, c] : terms_)
        if (m.xdeg > 0) r.add_term({m.xdeg - 1, m.mask}, c * m.xdeg);
    return r;
}

SuperPoly SuperPoly::dtheta(int i) const {
    if (i < 1 || i > n_) throw error("derivation index out of range");
    SuperPoly r(n_);
    for (auto& [m, c] : terms_) {
        if (!(m.mask & bit(i))) continue;
        Rat v = (bits_below(m.mask, i) & 1) ? -c : c;
        r.add_term({m.xdeg, m.mask & ~bit(i)}, v);
    }
    return r;
}

SuperPoly SuperPoly::eta(int i) const {
    return dtheta(i) - theta(n_, i) * dx();
}

Parity SuperPoly::parity() const {
    if (terms_.empty()) return Parity::even;
    int p = terms_.begin()->first.parity();
    for (auto& [m, c] : terms_)
        if (m.parity() != p) return Parity::mixed;
    return p ? Parity::odd : Parity::even;
}

int SuperPoly::parity_bit() const {
    Parity p = parity();
    if (p == Parity::mixed) throw error("polynomial is not parity-homogeneous: " + format_poly(*this));
    return p == Parity::odd ? 1 : 0;
}

int SuperPoly::max_xdeg() const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.xdeg);
    return d;
}

// ---------------------------------------------------------------------------
// Formatting: terms sorted by (xdeg, mask) descending, reduced fractions.

static void format_monomial(const Monomial& m, const Rat& c, bool leading, std::string& out) {
    Rat a = c < 0 ? Rat(-c) : c;
    if (leading) {
        if (c < 0) out += "-";
    } else {
        out += (c < 0) ? " - " : " + ";
    }
    std::vector<std::string> factors;
    if (a != 1 || (m.xdeg == 0 && m.mask == 0)) factors.push_back(rat_str(a));
    if (m.xdeg == 1) factors.push_back("x");
    else if (m.xdeg > 1) factors.push_back("x^" + std::to_string(m.xdeg));
    for (Mask rest = m.mask; rest;) {
        int b = std::countr_zero(rest);
        rest &= rest - 1;
        factors.push_back("t" + std::to_string(b + 1));
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += "*";
        out += factors[i];
    }
}

std::string format_poly(const SuperPoly& p) {
    if (p.is_zero()) return "0";
    std::vector<std::pair<Monomial, Rat>> ts(p.terms().begin(), p.terms().end());
    std::sort(ts.begin(), ts.end(), [](auto& a, auto& b) { return b.first < a.first; });
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) format_monomial(ts[i].first, ts[i].second, i == 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parser for the expression grammar:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := [coef '*'] factor ('*' factor)* | coef
//   factor := 'x' ['^' uint] | 't' uint
//   coef   := uint ['/' uint]
// Whitespace insignificant. A '-' directly before a factor means coefficient -1.

namespace {

struct Parser {
    const std::string& s;
    int n;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos;
        return true;
    }

    unsigned long parse_uint() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw parse_error("expected integer", pos);
        return std::stoul(s.substr(start, pos - start));
    }

    Rat parse_coef() {
        unsigned long num = parse_uint();
        Rat c(static_cast<long>(num));
        if (accept('/')) {
            unsigned long den = parse_uint();
            if (den == 0) throw parse_error("zero denominator", pos);
            c = Rat(static_cast<long>(num), static_cast<long>(den));
            c.canonicalize();
        }
        return c;
    }

    // A factor, or nothing if the next token is not a factor.
    bool parse_factor(SuperPoly& acc) {
        skip_ws();
        if (pos >= s.size()) return false;
        if (s[pos] == 'x') {
            ++pos;
            int e = 1;
            if (accept('^')) e = static_cast<int>(parse_uint());
            acc = acc * SuperPoly::x_pow(n, e);
            return true;
        }
        if (s[pos] == 't') {
            ++pos;
            std::size_t at = pos;
            unsigned long i = parse_uint();
            if (i < 1 || static_cast<int>(i) > n) throw parse_error("theta index out of range", at);
            acc = acc * SuperPoly::theta(n, static_cast<int>(i));
            return true;
        }
        return false;
    }

    SuperPoly parse_term(bool negate) {
        SuperPoly acc = SuperPoly::constant(n, negate ? -1 : 1);
        skip_ws();
        bool have_any = false;
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            acc = acc * parse_coef();
            have_any = true;
            if (!accept('*')) return acc;
        }
        do {
            std::size_t at = pos;
            skip_ws();
            if (!parse_factor(acc)) throw parse_error("expected factor", std::max(at, pos));
            have_any = true;
        } while (accept('*'));
        (void)have_any;
        return acc;
    }

    SuperPoly parse_expr() {
        bool neg = accept('-');
        SuperPoly total = parse_term(neg);
        for (;;) {
            if (accept('+')) total += parse_term(false);
            else if (accept('-')) total += parse_term(true);
            else break;
        }
        skip_ws();
        if (pos != s.size()) throw parse_error("unexpected input", pos);
        return total;
    }
};

} // namespace

SuperPoly parse_poly(const std::string& text, int n) {
    Parser p{text, n};
    return p.parse_expr();
}

std::pair<SuperPoly, SuperPoly> split_theta_n(const SuperPoly& p) {
    int n = p.arity();
    if (n < 1) throw error("split requires n >= 1");
    SuperPoly f1(n - 1), f2(n - 1);
    Mask top = bit(n);
    for (auto& [m, c] : p.terms()) {
        if (m.mask & top)
            f2.add_term({m.xdeg, m.mask & ~top}, c); // theta_n is the last factor, no sign
        else
            f1.add_term(m, c);
    }
    return {f1, f2};
}

SuperPoly join_theta_n(const SuperPoly& f1, const SuperPoly& f2) {
    if (f1.arity() != f2.arity()) throw error("arity mismatch in join");
    int n = f1.arity() + 1;
    SuperPoly r(n);
    for (auto& [m, c] : f1.terms()) r.add_term(m, c);
    for (auto& [m, c] : f2.terms()) r.add_term({m.xdeg, m.mask | bit(n)}, c);
    return r;
}

} // namespace ck
