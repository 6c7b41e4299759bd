#include "contactk/cohomology.hpp"

#include <algorithm>
#include <unordered_map>

// Flat constraint-row assembler for the cocycle conditions. Ansatz terms are
// evaluated on monomial fields, where each eta keeps at most one branch, so
// every defect piece is a short list of monomial products. The composition
// tails d2 o (b .) o S are precomputed per (d2, L-term) and shared across all
// ansatz terms with the same operand symbol and across seeds.

namespace ck {

namespace {

// eta_i on a monomial: exactly one of the d_i / -theta_i dx branches survives.
bool eta_mono(int i, Monomial m, Monomial& out, Rat& coef) {
    if (m.mask & bit(i)) {
        coef = (bits_below(m.mask, i) & 1) ? -1 : 1;
        out = {m.xdeg, m.mask & ~bit(i)};
        return true;
    }
    if (m.xdeg == 0) return false;
    coef = Rat(-m.xdeg);
    if (inversions(bit(i), m.mask) & 1) coef = -coef;
    out = {m.xdeg - 1, m.mask | bit(i)};
    return true;
}

// dx^k eta_E on a monomial.
bool sym_mono(Sym s, Monomial m, Monomial& out, Rat& coef) {
    coef = 1;
    Mask rest = s.etas;
    while (rest) {
        int t = 31 - std::countl_zero(rest); // largest index acts first
        rest &= ~(Mask{1} << t);
        Monomial nm;
        Rat c;
        if (!eta_mono(t + 1, m, nm, c)) return false;
        m = nm;
        coef *= c;
    }
    for (int i = 0; i < s.k; ++i) {
        if (m.xdeg == 0) return false;
        coef *= m.xdeg;
        m.xdeg -= 1;
    }
    out = m;
    return true;
}

bool mono_mul(Monomial a, Monomial b, Monomial& out, int& sign) {
    if (a.mask & b.mask) return false;
    sign = (inversions(a.mask, b.mask) & 1) ? -1 : 1;
    out = {a.xdeg + b.xdeg, a.mask | b.mask};
    return true;
}

struct FlatL {
    // L^w_{X_h} = sum q (b .) o S, S one of {id, dx, eta_i}
    struct Term {
        Sym s;
        Monomial b;
        Rat q;
    };
    std::vector<Term> terms;
};

FlatL flatten_l(const SuperPoly& h, const Rat& w) {
    FlatL out;
    DiffOp l = density_action_op(h, w);
    for (auto& [s, poly] : l.terms())
        for (auto& [m, q] : poly.terms()) out.terms.push_back({s, m, q});
    return out;
}

struct Emit {
    Monomial c;
    Sym s;
    Rat q;
};

// d2 o (b .) o S expanded to sum q (c .) o U.
std::vector<Emit> make_tail(Sym d2, const FlatL& l, int n) {
    std::vector<Emit> out;
    for (auto& lt : l.terms) {
        for (auto& [c, t] : push_through(d2, SuperPoly::mono(n, lt.b))) {
            auto [sg, u] = sym_mul(t, lt.s);
            for (auto& [m, q] : c.terms()) {
                Rat v = q * lt.q;
                if (sg < 0) v = -v;
                out.push_back({m, u, std::move(v)});
            }
        }
    }
    return out;
}

inline std::uint64_t pack_coord(Monomial m, Sym s) {
    return (std::uint64_t(m.xdeg) << 40) | (std::uint64_t(m.mask) << 24) |
           (std::uint64_t(s.k) << 8) | std::uint64_t(s.etas);
}

// L o (a .) o d2 contribution: L-terms have at most one symbol factor.
template <class EmitFn>
void lhs_compose(const FlatL& l, Monomial a, const Rat& aq, Sym d2, int col, const EmitFn& emit) {
    for (auto& lt : l.terms) {
        if (lt.s.is_identity()) {
            Monomial m;
            int sg;
            if (mono_mul(lt.b, a, m, sg)) emit(m, d2, col, aq * lt.q * sg);
        } else if (lt.s.etas == 0) { // dx (density operators have k = 1 here)
            if (a.xdeg > 0) {
                Monomial da{a.xdeg - 1, a.mask};
                Monomial m;
                int sg;
                if (mono_mul(lt.b, da, m, sg)) emit(m, d2, col, aq * lt.q * sg * a.xdeg);
            }
            Monomial m;
            int sg;
            if (mono_mul(lt.b, a, m, sg)) emit(m, Sym{d2.k + 1, d2.etas}, col, aq * lt.q * sg);
        } else { // single eta_i
            int i = std::countr_zero(lt.s.etas) + 1;
            Monomial ea;
            Rat ec;
            if (eta_mono(i, a, ea, ec)) {
                Monomial m;
                int sg;
                if (mono_mul(lt.b, ea, m, sg)) emit(m, d2, col, aq * lt.q * ec * sg);
            }
            auto [msg, ms] = sym_mul(lt.s, d2);
            Monomial m;
            int sg;
            if (mono_mul(lt.b, a, m, sg)) {
                Rat q = aq * lt.q * (sg * msg);
                if (a.parity()) q = -q;
                emit(m, ms, col, q);
            }
        }
    }
}

} // namespace

void assemble_cocycle_constraints(int n, const Rat& lam, const Rat& mu,
                                  const std::vector<AnsatzKey>& keys, int window,
                                  const std::function<void(SparseVec&)>& sink) {
    if (keys.empty()) return;
    std::vector<Sym> d1s, d2s;
    std::vector<int> key_d1(keys.size()), key_d2(keys.size());
    {
        std::map<Sym, int> ix1, ix2;
        for (std::size_t c = 0; c < keys.size(); ++c) {
            key_d1[c] = ix1.emplace(keys[c].d1, static_cast<int>(ix1.size())).first->second;
            key_d2[c] = ix2.emplace(keys[c].d2, static_cast<int>(ix2.size())).first->second;
        }
        d1s.resize(ix1.size());
        for (auto& [s, i] : ix1) d1s[i] = s;
        d2s.resize(ix2.size());
        for (auto& [s, i] : ix2) d2s[i] = s;
    }

    Mask full = (Mask{1} << n) - 1;
    std::vector<Monomial> window_monos;
    for (int m = 0; m <= window; ++m)
        for (Mask s = 0; s <= full; ++s) window_monos.push_back({m, s});

    std::vector<FlatL> lg_mu(window_monos.size()), lg_lam(window_monos.size());
    for (std::size_t gi = 0; gi < window_monos.size(); ++gi) {
        SuperPoly g = SuperPoly::mono(n, window_monos[gi]);
        lg_mu[gi] = flatten_l(g, mu);
        lg_lam[gi] = flatten_l(g, lam);
    }
    // tails for A o L^lam_{X_g}, shared across seeds and terms
    std::vector<std::vector<std::vector<Emit>>> tail_g(d2s.size());
    for (std::size_t di = 0; di < d2s.size(); ++di) {
        tail_g[di].resize(window_monos.size());
        for (std::size_t gi = 0; gi < window_monos.size(); ++gi)
            tail_g[di][gi] = make_tail(d2s[di], lg_lam[gi], n);
    }

    struct PairKeyHash {
        std::size_t operator()(std::uint64_t v) const { return std::hash<std::uint64_t>()(v); }
    };

    for (auto& s : cocycle_seed_family(n)) {
        int ps = s.parity_bit();
        Monomial smono = s.terms().begin()->first;
        FlatL ls_mu = flatten_l(s, mu), ls_lam = flatten_l(s, lam);
        std::vector<std::vector<Emit>> tail_s(d2s.size());
        for (std::size_t di = 0; di < d2s.size(); ++di) tail_s[di] = make_tail(d2s[di], ls_lam, n);

        // a_s = cmon * d1(s) per key; zero or one monomial
        std::vector<char> as_ok(keys.size(), 0);
        std::vector<Monomial> as_mono(keys.size());
        std::vector<Rat> as_q(keys.size());
        for (std::size_t c = 0; c < keys.size(); ++c) {
            Monomial w;
            Rat coef;
            if (!sym_mono(keys[c].d1, smono, w, coef)) continue;
            Monomial prod;
            int sg;
            if (!mono_mul(keys[c].c, w, prod, sg)) continue;
            as_ok[c] = 1;
            as_mono[c] = prod;
            as_q[c] = coef * sg;
        }

        for (std::size_t gi = 0; gi < window_monos.size(); ++gi) {
            Monomial gmono = window_monos[gi];
            int pg = gmono.parity();
            SuperPoly br = contact_bracket(s, SuperPoly::mono(n, gmono));

            std::unordered_map<std::uint64_t, SparseVec, PairKeyHash> rows;
            rows.reserve(1024);
            auto emit = [&](Monomial cm, Sym sy, int col, const Rat& q) {
                if (q == 0) return;
                rows[pack_coord(cm, sy)].emplace_back(col, q);
            };

            // d1(g) and d1(bracket) per distinct d1, computed on first use
            std::vector<char> wg_state(d1s.size(), 2);
            std::vector<Monomial> wg_m(d1s.size());
            std::vector<Rat> wg_q(d1s.size());
            std::vector<std::vector<std::pair<Monomial, Rat>>> wbr(d1s.size());
            std::vector<char> wbr_done(d1s.size(), 0);

            for (std::size_t c = 0; c < keys.size(); ++c) {
                const AnsatzKey& key = keys[c];
                int col = static_cast<int>(c);
                int py = (key.c.parity() + key.d1.parity() + key.d2.parity()) & 1;
                int d1i = key_d1[c], d2i = key_d2[c];

                Rat sign1 = (ps & py) ? Rat(-1) : Rat(1);              // (-1)^{|s||Y|}
                Rat k1 = ((((py + pg) & 1) & ps) != 0) ? Rat(1) : Rat(-1); // -(-1)^{|A_g||s|}
                Rat sign2 = (pg & ((ps + py) & 1)) ? Rat(1) : Rat(-1); // -(-1)^{|g|(|s|+|Y|)}
                Rat k2 = ((((py + ps) & 1) & pg) != 0) ? Rat(1) : Rat(-1);

                if (wg_state[d1i] == 2) {
                    Monomial w;
                    Rat coef;
                    wg_state[d1i] = sym_mono(key.d1, gmono, w, coef) ? 1 : 0;
                    if (wg_state[d1i]) {
                        wg_m[d1i] = w;
                        wg_q[d1i] = coef;
                    }
                }

                // piece 1: sign1 L_s o A_g + sign1 k1 A_g o L_s
                if (wg_state[d1i]) {
                    Monomial ag;
                    int sg;
                    if (mono_mul(key.c, wg_m[d1i], ag, sg)) {
                        Rat agq = wg_q[d1i] * sg;
                        lhs_compose(ls_mu, ag, sign1 * agq, key.d2, col, emit);
                        Rat tbase = sign1 * k1 * agq;
                        for (auto& e : tail_s[d2i]) {
                            Monomial m;
                            int sg2;
                            if (mono_mul(ag, e.c, m, sg2)) emit(m, e.s, col, tbase * e.q * sg2);
                        }
                    }
                }

                // piece 2: sign2 L_g o A_s + sign2 k2 A_s o L_g
                if (as_ok[c]) {
                    Monomial as = as_mono[c];
                    lhs_compose(lg_mu[gi], as, sign2 * as_q[c], key.d2, col, emit);
                    Rat tbase = sign2 * k2 * as_q[c];
                    for (auto& e : tail_g[d2i][gi]) {
                        Monomial m;
                        int sg2;
                        if (mono_mul(as, e.c, m, sg2)) emit(m, e.s, col, tbase * e.q * sg2);
                    }
                }

                // piece 3: -Y(X_{{s,g}})
                if (!br.is_zero()) {
                    if (!wbr_done[d1i]) {
                        wbr_done[d1i] = 1;
                        for (auto& [bm, bq] : br.terms()) {
                            Monomial w;
                            Rat coef;
                            if (sym_mono(key.d1, bm, w, coef)) wbr[d1i].emplace_back(w, coef * bq);
                        }
                    }
                    for (auto& [w, q] : wbr[d1i]) {
                        Monomial m;
                        int sg;
                        if (mono_mul(key.c, w, m, sg)) emit(m, key.d2, col, q * Rat(-sg));
                    }
                }
            }

            std::vector<std::pair<std::uint64_t, SparseVec*>> ordered;
            ordered.reserve(rows.size());
            for (auto& [k, v] : rows) ordered.emplace_back(k, &v);
            std::sort(ordered.begin(), ordered.end(),
                      [](auto& a, auto& b) { return a.first < b.first; });
            for (auto& [k, v] : ordered) {
                svec_normalize(*v);
                if (!v->empty()) sink(*v);
            }
        }
    }
}

} // namespace ck
