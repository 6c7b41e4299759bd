#include "contactk/diffop.hpp"

#include <algorithm>
#include <array>
#include <mutex>

namespace ck {

DiffOp DiffOp::identity(int n, const Rat& src, const Rat& tgt) {
    DiffOp a(n, src, tgt);
    a.add_term({0, 0}, SuperPoly::one(n));
    return a;
}

DiffOp DiffOp::from_sym(int n, Sym s, const Rat& src, const Rat& tgt) {
    DiffOp a(n, src, tgt);
    a.add_term(s, SuperPoly::one(n));
    return a;
}

DiffOp DiffOp::mult(const SuperPoly& a, const Rat& src, const Rat& tgt) {
    DiffOp r(a.arity(), src, tgt);
    r.add_term({0, 0}, a);
    return r;
}

void DiffOp::add_term(Sym s, const SuperPoly& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.emplace(s, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

DiffOp DiffOp::with_weights(const Rat& src, const Rat& tgt) const {
    DiffOp r = *this;
    r.src_ = src;
    r.tgt_ = tgt;
    return r;
}

DiffOp DiffOp::operator-() const {
    DiffOp r(n_, src_, tgt_);
    for (auto& [s, c] : terms_) r.terms_.emplace(s, -c);
    return r;
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    if (n_ != o.n_) throw error("arity mismatch in DiffOp +");
    if (src_ != o.src_ || tgt_ != o.tgt_) throw error("weight mismatch in DiffOp +");
    DiffOp r = *this;
    for (auto& [s, c] : o.terms_) r.add_term(s, c);
    return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const { return *this + (-o); }

DiffOp DiffOp::operator*(const Rat& c) const {
    DiffOp r(n_, src_, tgt_);
    if (c == 0) return r;
    for (auto& [s, v] : terms_) r.terms_.emplace(s, v * c);
    return r;
}

SuperPoly DiffOp::apply(const SuperPoly& p) const {
    if (p.arity() != n_) throw error("arity mismatch in apply");
    SuperPoly r(n_);
    for (auto& [s, c] : terms_) r += c * apply_sym(s, p);
    return r;
}

Parity DiffOp::parity() const {
    if (terms_.empty()) return Parity::even;
    int p = -1;
    for (auto& [s, c] : terms_) {
        if (!c.is_homogeneous()) return Parity::mixed;
        int tp = (c.parity_bit() + s.parity()) & 1;
        if (p == -1) p = tp;
        else if (p != tp) return Parity::mixed;
    }
    return p ? Parity::odd : Parity::even;
}

int DiffOp::parity_bit() const {
    Parity p = parity();
    if (p == Parity::mixed) throw error("operator is not parity-homogeneous");
    return p == Parity::odd ? 1 : 0;
}

int DiffOp::max_order() const {
    int d = 0;
    for (auto& [s, c] : terms_) d = std::max(d, s.k + popcount(s.etas));
    return d;
}

// ---------------------------------------------------------------------------

// dx^k eta_E o (b .) for a single homogeneous b, via
//   eta_i o (b.) = (eta_i b .) + (-1)^{|b|} (b.) o eta_i
//   dx^k o (b.) = sum_j C(k,j) (b^{(j)} .) o dx^{k-j}
static void push_rec(Sym s, const SuperPoly& b, const Rat& q,
                     std::vector<std::pair<SuperPoly, Sym>>& out, Sym tail) {
    if (b.is_zero()) return;
    if (s.etas) {
        int t = 31 - std::countl_zero(s.etas); // rightmost factor = largest eta index
        Sym rest{s.k, s.etas & ~(Mask{1} << t)};
        push_rec(rest, b.eta(t + 1), q, out, tail);
        Rat q2 = (b.parity_bit() & 1) ? Rat(-q) : q;
        auto [sg, tl] = sym_mul({0, Mask{1} << t}, tail);
        push_rec(rest, b, sg < 0 ? Rat(-q2) : q2, out, tl);
    } else if (s.k > 0) {
        SuperPoly d = b;
        Rat binom(1);
        for (int j = 0; j <= s.k; ++j) {
            if (j) {
                binom *= s.k - j + 1;
                binom /= j;
                d = d.dx();
                if (d.is_zero()) break;
            }
            out.emplace_back(d * (q * binom), Sym{tail.k + s.k - j, tail.etas});
        }
    } else {
        out.emplace_back(b * q, tail);
    }
}

std::vector<std::pair<SuperPoly, Sym>> push_through(Sym s, const SuperPoly& b) {
    std::vector<std::pair<SuperPoly, Sym>> out;
    for (auto& [m, c] : b.terms())
        push_rec(s, SuperPoly::mono(b.arity(), m, c), 1, out, {0, 0});
    return out;
}

DiffOp normal_compose(const DiffOp& a, const DiffOp& b) {
    if (a.arity() != b.arity()) throw error("arity mismatch in compose");
    if (a.src_weight() != b.tgt_weight()) throw error("weight chain mismatch in compose");
    DiffOp r(a.arity(), b.src_weight(), a.tgt_weight());
    for (auto& [sa, ca] : a.terms()) {
        for (auto& [sb, cb] : b.terms()) {
            for (auto& [c, t] : push_through(sa, cb)) {
                auto [sg, s] = sym_mul(t, sb);
                SuperPoly coeff = ca * c;
                r.add_term(s, sg < 0 ? -coeff : coeff);
            }
        }
    }
    return r;
}

DiffOp super_commutator(const DiffOp& a, const DiffOp& b) {
    DiffOp ab = normal_compose(a, b);
    DiffOp ba = normal_compose(b, a).with_weights(ab.src_weight(), ab.tgt_weight());
    int sign = a.parity_bit() * b.parity_bit();
    return sign ? ab + ba : ab - ba;
}

DiffOp density_action_op(const SuperPoly& f, const Rat& w) {
    int n = f.arity();
    DiffOp a(n, w, w);
    a.add_term({1, 0}, f);
    Rat half(1, 2);
    Rat s = f.parity_bit() ? half : Rat(-half);
    for (int i = 1; i <= n; ++i) a.add_term({0, bit(i)}, f.eta(i) * s);
    a.add_term({0, 0}, f.dx() * w);
    return a;
}

DiffOp module_action(const SuperPoly& f, const DiffOp& a) {
    DiffOp lm = density_action_op(f, a.tgt_weight());
    DiffOp ll = density_action_op(f, a.src_weight());
    return module_action_with(lm, ll, a.parity_bit() & f.parity_bit(), a);
}

DiffOp module_action_with(const DiffOp& l_tgt, const DiffOp& l_src, int koszul_bit, const DiffOp& a) {
    DiffOp left = normal_compose(l_tgt, a);
    DiffOp right = normal_compose(a, l_src);
    return koszul_bit ? left + right : left - right;
}

DiffOp module_action_pi(const SuperPoly& f, const DiffOp& a) {
    DiffOp lm = density_action_op(f, a.tgt_weight());
    DiffOp ll = density_action_op(f, a.src_weight());
    DiffOp left = normal_compose(lm, a);
    DiffOp right = normal_compose(a, ll);
    return ((a.parity_bit() ^ 1) & f.parity_bit()) ? left + right : left - right;
}

const DiffOp& sigma_op(int n) {
    static std::array<DiffOp, 17> cache;
    static std::once_flag flags[17];
    if (n < 0 || n > 16) throw error("sigma_op: n out of range");
    std::call_once(flags[n], [n] {
        DiffOp s = DiffOp::identity(n, 0, 0);
        for (int i = 1; i <= n; ++i) {
            DiffOp f = DiffOp::identity(n, 0, 0); // 1 - 2 theta_i eta_i
            f.add_term({0, bit(i)}, SuperPoly::theta(n, i) * Rat(-2));
            s = normal_compose(s, f);
        }
        cache[n] = s;
    });
    return cache[n];
}

std::string format_diffop(const DiffOp& a) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto& [s, c] : a.terms()) {
        std::string cs = format_poly(c);
        bool neg = cs.size() && cs[0] == '-';
        if (first) {
            if (neg) out += "-", cs = cs.substr(1);
        } else {
            out += neg ? " - " : " + ";
            if (neg) cs = cs.substr(1);
        }
        first = false;
        bool trivial_coef = (cs == "1");
        if (!trivial_coef || s.is_identity()) out += (c.terms().size() > 1 ? "(" + cs + ")" : cs);
        if (!s.is_identity()) {
            if (!trivial_coef) out += " * ";
            out += format_sym(s);
        }
    }
    return out;
}

} // namespace ck
