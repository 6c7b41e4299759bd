#include "contactk/binop.hpp"

#include <algorithm>

namespace ck {

void BinOp::add_term(SymPair k, const SuperPoly& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

BinOp BinOp::operator-() const {
    BinOp r(n_, w1_, w2_, wout_);
    for (auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

BinOp BinOp::operator+(const BinOp& o) const {
    if (n_ != o.n_) throw error("arity mismatch in BinOp +");
    BinOp r = *this;
    for (auto& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

BinOp BinOp::operator-(const BinOp& o) const { return *this + (-o); }

BinOp BinOp::operator*(const Rat& c) const {
    BinOp r(n_, w1_, w2_, wout_);
    if (c == 0) return r;
    for (auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
    return r;
}

SuperPoly BinOp::evaluate(const SuperPoly& f, const SuperPoly& g) const {
    SuperPoly r(n_);
    for (auto& [k, c] : terms_) r += c * (apply_sym(k.first, f) * apply_sym(k.second, g));
    return r;
}

Parity BinOp::parity() const {
    if (terms_.empty()) return Parity::even;
    int p = -1;
    for (auto& [k, c] : terms_) {
        if (!c.is_homogeneous()) return Parity::mixed;
        int tp = (c.parity_bit() + k.first.parity() + k.second.parity()) & 1;
        if (p == -1) p = tp;
        else if (p != tp) return Parity::mixed;
    }
    return p ? Parity::odd : Parity::even;
}

int BinOp::parity_bit() const {
    Parity p = parity();
    if (p == Parity::mixed) throw error("binary operator is not parity-homogeneous");
    return p == Parity::odd ? 1 : 0;
}

int BinOp::max_order() const {
    int d = 0;
    for (auto& [k, c] : terms_)
        d = std::max(d, k.first.k + popcount(k.first.etas) + k.second.k + popcount(k.second.etas));
    return d;
}

WTerms wterms_of(const BinOp& t) {
    WTerms out;
    for (auto& [k, c] : t.terms())
        for (auto& [m, q] : c.terms()) out.push_back({q, m, false, false, false, k.first, k.second});
    return out;
}

// ---------------------------------------------------------------------------
// Slot compositions.

WTerms wt_compose_slot1(const WTerms& terms, const DiffOp& b) {
    int n = b.arity();
    WTerms out;
    for (const WTerm& t : terms) {
        for (auto& [sb, bpoly] : b.terms()) {
            int beta = (popcount(sb.etas) & 1);
            for (auto& [bm, bq] : bpoly.terms()) {
                int pb = (beta + bm.parity()) & 1; // parity of bm * (Sb F) minus |F|
                // d1(bm * Sb F) = sum (c_j .) (T_j o Sb)(F)
                for (auto& [cj, tj] : push_through(t.d1, SuperPoly::mono(n, bm, bq))) {
                    auto [sg, d1n] = sym_mul(tj, sb);
                    for (auto& [cm, cq] : cj.terms()) {
                        // coefficient product c * cm, adjacent, plain monomial mul
                        if (t.c.mask & cm.mask) continue;
                        Rat q = t.q * cq;
                        if (sg < 0) q = -q;
                        if (inversions(t.c.mask, cm.mask) & 1) q = -q;
                        if (t.s1 && pb) q = -q;
                        WTerm nt{std::move(q), {t.c.xdeg + cm.xdeg, t.c.mask | cm.mask},
                                 t.s1, t.s2 != (t.s12 && pb), t.s12, d1n, t.d2};
                        out.push_back(std::move(nt));
                    }
                }
            }
        }
    }
    return out;
}

WTerms wt_compose_slot2(const WTerms& terms, const DiffOp& b) {
    int n = b.arity();
    WTerms out;
    for (const WTerm& t : terms) {
        int pd1 = t.d1.parity();
        for (auto& [sb, bpoly] : b.terms()) {
            int beta = (popcount(sb.etas) & 1);
            for (auto& [bm, bq] : bpoly.terms()) {
                int pb = (beta + bm.parity()) & 1;
                for (auto& [cj, tj] : push_through(t.d2, SuperPoly::mono(n, bm, bq))) {
                    auto [sg, d2n] = sym_mul(tj, sb);
                    int pcj = cj.is_zero() ? 0 : cj.parity_bit();
                    for (auto& [cm, cq] : cj.terms()) {
                        if (t.c.mask & cm.mask) continue;
                        Rat q = t.q * cq;
                        if (sg < 0) q = -q;
                        if (inversions(t.c.mask, cm.mask) & 1) q = -q;
                        if (pcj && pd1) q = -q;     // c_j crossing (d1 F)
                        if (t.s2 && pb) q = -q;
                        bool s1n = t.s1 ^ (pcj != 0) ^ (t.s12 && pb);
                        WTerm nt{std::move(q), {t.c.xdeg + cm.xdeg, t.c.mask | cm.mask},
                                 s1n, t.s2, t.s12, t.d1, d2n};
                        out.push_back(std::move(nt));
                    }
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output composition.

namespace {

// eta_e applied to the value c (d1 F)(d2 G); Leibniz over the three factors.
WTerms eta_push(int e, const WTerm& t, int n) {
    WTerms out;
    SuperPoly ec = SuperPoly::mono(n, t.c, t.q).eta(e);
    for (auto& [m, q] : ec.terms()) out.push_back({q, m, t.s1, t.s2, t.s12, t.d1, t.d2});
    int pc = t.c.parity();
    {
        auto [sg, d1n] = sym_mul({0, bit(e)}, t.d1);
        Rat q = t.q;
        if (sg < 0) q = -q;
        if (pc) q = -q;
        out.push_back({std::move(q), t.c, t.s1, t.s2, t.s12, d1n, t.d2});
    }
    {
        auto [sg, d2n] = sym_mul({0, bit(e)}, t.d2);
        Rat q = t.q;
        if (sg < 0) q = -q;
        if ((pc + t.d1.parity()) & 1) q = -q;
        out.push_back({std::move(q), t.c, !t.s1, t.s2, t.s12, t.d1, d2n});
    }
    return out;
}

WTerms dx_push(const WTerm& t) {
    WTerms out;
    if (t.c.xdeg > 0)
        out.push_back({t.q * t.c.xdeg, {t.c.xdeg - 1, t.c.mask}, t.s1, t.s2, t.s12, t.d1, t.d2});
    out.push_back({t.q, t.c, t.s1, t.s2, t.s12, {t.d1.k + 1, t.d1.etas}, t.d2});
    out.push_back({t.q, t.c, t.s1, t.s2, t.s12, t.d1, {t.d2.k + 1, t.d2.etas}});
    return out;
}

} // namespace

WTerms wt_compose_out(const DiffOp& a, const WTerms& terms) {
    int n = a.arity();
    WTerms out;
    for (auto& [sa, apoly] : a.terms()) {
        WTerms cur = terms;
        // rightmost symbol factor acts first: etas by descending index, then dx^k
        Mask rest = sa.etas;
        while (rest) {
            int tbit = 31 - std::countl_zero(rest);
            rest &= ~(Mask{1} << tbit);
            WTerms next;
            for (auto& t : cur)
                for (auto& r : eta_push(tbit + 1, t, n)) next.push_back(std::move(r));
            cur = std::move(next);
        }
        for (int i = 0; i < sa.k; ++i) {
            WTerms next;
            for (auto& t : cur)
                for (auto& r : dx_push(t)) next.push_back(std::move(r));
            cur = std::move(next);
        }
        for (auto& [am, aq] : apoly.terms()) {
            for (const WTerm& t : cur) {
                if (am.mask & t.c.mask) continue;
                Rat q = t.q * aq;
                if (inversions(am.mask, t.c.mask) & 1) q = -q;
                out.push_back({std::move(q), {am.xdeg + t.c.xdeg, am.mask | t.c.mask},
                               t.s1, t.s2, t.s12, t.d1, t.d2});
            }
        }
    }
    return out;
}

WTerms wt_twist_s1(WTerms terms) {
    for (auto& t : terms) t.s1 = !t.s1;
    return terms;
}

WTerms wt_scale(WTerms terms, const Rat& c) {
    for (auto& t : terms) t.q *= c;
    return terms;
}

// ---------------------------------------------------------------------------
// Normalization: expand s12, then s2, then s1 through sigma, then collect.

BinOp normalize(const WTerms& terms, int n, const Rat& w1, const Rat& w2, const Rat& wout) {
    const DiffOp& sig = sigma_op(n);
    DiffOp p_plus = (DiffOp::identity(n, 0, 0) + sig) * Rat(1, 2);
    DiffOp p_minus = (DiffOp::identity(n, 0, 0) - sig) * Rat(1, 2);

    WTerms stage1;
    for (const WTerm& t : terms) {
        if (!t.s12) {
            stage1.push_back(t);
            continue;
        }
        WTerm t0 = t;
        t0.s12 = false;
        // (-1)^{|F||G|} X(F,G) = X(P+ F, G) + (-1)^{|G|} X(P- F, G)
        for (auto& r : wt_compose_slot1({t0}, p_plus)) stage1.push_back(std::move(r));
        WTerm t1 = t0;
        t1.s2 = !t1.s2;
        for (auto& r : wt_compose_slot1({t1}, p_minus)) stage1.push_back(std::move(r));
    }

    WTerms stage2;
    for (const WTerm& t : stage1) {
        if (!t.s2) {
            stage2.push_back(t);
            continue;
        }
        WTerm t0 = t;
        t0.s2 = false;
        for (auto& r : wt_compose_slot2({t0}, sig)) stage2.push_back(std::move(r));
    }

    BinOp out(n, w1, w2, wout);
    for (const WTerm& t : stage2) {
        if (!t.s1) {
            out.add_term({t.d1, t.d2}, SuperPoly::mono(n, t.c, t.q));
            continue;
        }
        WTerm t0 = t;
        t0.s1 = false;
        for (auto& r : wt_compose_slot1({t0}, sig))
            out.add_term({r.d1, r.d2}, SuperPoly::mono(n, r.c, r.q));
    }
    return out;
}

BinOp compose_slot1(const BinOp& t, const DiffOp& b) {
    return normalize(wt_compose_slot1(wterms_of(t), b), t.arity(), t.w1(), t.w2(), t.wout());
}

BinOp compose_slot2(const BinOp& t, const DiffOp& b) {
    return normalize(wt_compose_slot2(wterms_of(t), b), t.arity(), t.w1(), t.w2(), t.wout());
}

BinOp compose_out(const DiffOp& a, const BinOp& t) {
    return normalize(wt_compose_out(a, wterms_of(t)), t.arity(), t.w1(), t.w2(), t.wout());
}

BinOp binary_module_action(const SuperPoly& h, const BinOp& t) {
    if (h.arity() != t.arity()) throw error("arity mismatch in binary action");
    int ph = h.parity_bit();
    int pt = t.parity_bit();
    DiffOp l_out = density_action_op(h, t.wout());
    DiffOp l1 = density_action_op(h, t.w1());
    DiffOp l2 = density_action_op(h, t.w2());

    WTerms base = wterms_of(t);
    WTerms left = wt_compose_out(l_out, base);
    WTerms r1 = wt_compose_slot1(base, l1);
    WTerms r2 = wt_compose_slot2(base, l2);
    if (ph) r2 = wt_twist_s1(std::move(r2));

    Rat sgn = (ph && pt) ? 1 : -1;
    WTerms all = std::move(left);
    for (auto& x : wt_scale(std::move(r1), sgn)) all.push_back(std::move(x));
    for (auto& x : wt_scale(std::move(r2), sgn)) all.push_back(std::move(x));
    return normalize(all, t.arity(), t.w1(), t.w2(), t.wout());
}

SuperPoly binary_action_eval(const SuperPoly& h, const BinOp& t, const SuperPoly& f, const SuperPoly& g) {
    int ph = h.parity_bit();
    int pt = t.parity_bit();
    DiffOp l_out = density_action_op(h, t.wout());
    DiffOp l1 = density_action_op(h, t.w1());
    DiffOp l2 = density_action_op(h, t.w2());
    SuperPoly r = l_out.apply(t.evaluate(f, g));
    SuperPoly inner = t.evaluate(l1.apply(f), g);
    SuperPoly second = t.evaluate(f, l2.apply(g));
    if (ph && f.parity_bit()) second = -second;
    inner += second;
    if (ph && pt) return r + inner;
    return r - inner;
}

void BinBuilder::term(const Rat& q, const SuperPoly& coef, bool s1, bool s2, bool s12,
                      const DiffOp& d1, const DiffOp& d2) {
    for (auto& [s1y, c1] : d1.terms()) {
        for (auto& [s2y, c2] : d2.terms()) {
            for (auto& [m1, q1] : c1.terms()) {
                for (auto& [m2, q2] : c2.terms()) {
                    int p2 = m2.parity();
                    // value q*coef*(c1 (S1 F))*(c2 (S2 G)): c2 crosses (S1 F) only
                    for (auto& [mc, qc] : coef.terms()) {
                        if ((mc.mask & m1.mask) || ((mc.mask | m1.mask) & m2.mask)) continue;
                        Rat v = q * qc * q1 * q2;
                        if (p2 && s1y.parity()) v = -v;
                        if (inversions(mc.mask, m1.mask) & 1) v = -v;
                        if (inversions(mc.mask | m1.mask, m2.mask) & 1) v = -v;
                        Monomial m{mc.xdeg + m1.xdeg + m2.xdeg, mc.mask | m1.mask | m2.mask};
                        ts_.push_back({std::move(v), m, s1 != (p2 != 0), s2, s12, s1y, s2y});
                    }
                }
            }
        }
    }
}

void BinBuilder::term(const Rat& q, bool s1, Sym d1, Sym d2) {
    ts_.push_back({q, {0, 0}, s1, false, false, d1, d2});
}

std::string format_binop(const BinOp& t) {
    if (t.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto& [k, c] : t.terms()) {
        std::string cs = format_poly(c);
        if (c.terms().size() > 1) cs = "(" + cs + ")";
        if (!first) out += " + ";
        first = false;
        out += cs + " * [" + format_sym(k.first) + " | " + format_sym(k.second) + "]";
    }
    return out;
}

} // namespace ck
