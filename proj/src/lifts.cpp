#include "contactk/lifts.hpp"

namespace ck {

SuperPoly embed_poly(const SuperPoly& p, int n) {
    if (p.arity() > n) throw error("embed: arity too large");
    SuperPoly r(n);
    for (auto& [m, c] : p.terms()) r.add_term(m, c);
    return r;
}

DiffOp embed_op(const DiffOp& a, int n) {
    DiffOp r(n, a.src_weight(), a.tgt_weight());
    for (auto& [s, c] : a.terms()) r.add_term(s, embed_poly(c, n));
    return r;
}

BinOp embed_binop(const BinOp& t, int n) {
    BinOp r(n, t.w1(), t.w2(), t.wout());
    for (auto& [k, c] : t.terms()) r.add_term(k, embed_poly(c, n));
    return r;
}

DiffOp part1_op(int n) {
    DiffOp p = DiffOp::identity(n, 0, 0);
    p.add_term({0, bit(n)}, -SuperPoly::theta(n, n)); // theta_n d_n = theta_n eta_n
    return p;
}

DiffOp part2_op(int n) {
    DiffOp dn(n, 0, 0); // d_n = eta_n + theta_n dx
    dn.add_term({0, bit(n)}, SuperPoly::one(n));
    dn.add_term({1, 0}, SuperPoly::theta(n, n));
    return normal_compose(sigma_op(n), dn);
}

DiffOp out2_op(int n) {
    return normal_compose(DiffOp::mult(SuperPoly::theta(n, n), 0, 0), sigma_op(n));
}

DiffOp phi_lift(const PhiParts& p) {
    int n = p.n;
    Rat half(1, 2);
    DiffOp result(n, p.lam, p.mu);
    DiffOp in0 = part1_op(n), in1 = part2_op(n), out1 = out2_op(n);
    for (int j = 0; j <= 1; ++j)
        for (int k = 0; k <= 1; ++k) {
            const auto& part = p.parts[j + 2 * k];
            if (!part || part->is_zero()) continue;
            if (part->arity() != n - 1) throw error("phi_lift: part arity must be n-1");
            if (part->src_weight() != p.lam + half * j || part->tgt_weight() != p.mu + half * k)
                throw error("phi_lift: part weight signature mismatch");
            DiffOp lifted = normal_compose(embed_op(*part, n).with_weights(0, 0), j ? in1 : in0);
            if (k) lifted = normal_compose(out1, lifted);
            result = result + lifted.with_weights(p.lam, p.mu);
        }
    return result;
}

BinOp psi_lift(const PsiParts& p) {
    int n = p.n;
    Rat half(1, 2);
    WTerms all;
    DiffOp in0 = part1_op(n), in1 = part2_op(n), out1 = out2_op(n);
    for (int j = 0; j <= 1; ++j)
        for (int l = 0; l <= 1; ++l)
            for (int k = 0; k <= 1; ++k) {
                const auto& part = p.parts[j + 2 * l + 4 * k];
                if (!part || part->is_zero()) continue;
                if (part->arity() != n - 1) throw error("psi_lift: part arity must be n-1");
                if (part->w1() != p.lam + half * j || part->w2() != p.mu + half * l ||
                    part->wout() != p.nu + half * k)
                    throw error("psi_lift: part weight signature mismatch");
                WTerms ts = wterms_of(embed_binop(*part, n));
                ts = wt_compose_slot1(ts, j ? in1 : in0);
                ts = wt_compose_slot2(ts, l ? in1 : in0);
                if (j) { // sigma on the second tensor slot of the identification
                    ts = wt_scale(std::move(ts), l ? Rat(-1) : Rat(1));
                    for (auto& t : ts) t.s2 = !t.s2;
                }
                if (k) ts = wt_compose_out(out1, ts);
                for (auto& t : ts) all.push_back(std::move(t));
            }
    return normalize(all, n, p.lam, p.mu, p.nu);
}

DiffOp chi_op(const DiffOp& a) {
    return normal_compose(sigma_op(a.arity()).with_weights(a.tgt_weight(), a.tgt_weight()), a);
}

} // namespace ck
