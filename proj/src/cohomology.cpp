#include "contactk/cohomology.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>

namespace ck {

namespace {
struct PhaseTimer {
    const char* name;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    explicit PhaseTimer(const char* n) : name(n) {}
    ~PhaseTimer() {
        if (std::getenv("CK_TIMING")) {
            auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cerr << "[timing] " << name << ": " << dt << " s\n";
        }
    }
};
} // namespace

namespace {

const Sym ID{0, 0};
const Sym DX{1, 0};
Sym E(int i) { return {0, bit(i)}; }

Mask bits2(int a, int b) { return bit(a) | bit(b); }
Mask bits3(int a, int b, int c) { return bit(a) | bit(b) | bit(c); }

DiffOp sym_op(int n, Sym s) { return DiffOp::from_sym(n, s, 0, 0); }

DiffOp dpartial(int n, int i) { // d_i = eta_i + theta_i dx
    DiffOp d(n, 0, 0);
    d.add_term({0, bit(i)}, SuperPoly::one(n));
    d.add_term({1, 0}, SuperPoly::theta(n, i));
    return d;
}

DiffOp one_minus_theta_eta(int n, int i) { // 1 - theta_i eta_i  (= 1 - theta_i d_i)
    DiffOp d = DiffOp::identity(n, 0, 0);
    d.add_term({0, bit(i)}, -SuperPoly::theta(n, i));
    return d;
}

DiffOp compose2(const DiffOp& a, const DiffOp& b) { return normal_compose(a, b); }

DiffOp id_op(int n) { return DiffOp::identity(n, 0, 0); }

// ---------------------------------------------------------------------------
// Catalog builders. Slot 1 carries the generator G.

Cochain1 build_u0(int n, const Rat& lam) {
    BinBuilder b(n);
    b.term(1, false, DX, ID);
    return {n, lam, lam, b.build(Rat(-1), lam, lam)};
}

Cochain1 build_u2_0t(const Rat& lam) {
    int n = 2;
    BinBuilder b(n);
    if (lam == 0) {
        b.term(1, false, {0, bits2(1, 2)}, ID);
    } else {
        DiffOp t2d2 = compose2(DiffOp::mult(SuperPoly::theta(n, 2), 0, 0), dpartial(n, 2));
        b.term(2 * lam, SuperPoly::one(n), false, false, false,
               compose2(sym_op(n, {0, bits2(1, 2)}), t2d2), id_op(n));
        for (int i = 1; i <= 2; ++i)
            b.term(-1, SuperPoly::one(n), true, false, false,
                   compose2(sym_op(n, E(i)), t2d2), sym_op(n, E(3 - i)));
    }
    return {n, lam, lam, b.build(Rat(-1), lam, lam)};
}

void add_M(BinBuilder& b, const Rat& scale, Sym darg, Sym dop_extra) {
    // M_{D(G)} with |D| even: (-1)^{|G|}( eta1(DG) eta2 - eta2(DG) eta1 ), each
    // eta_i composed with dop_extra on the operand side.
    auto [sg1, d1a] = sym_mul(E(1), darg);
    auto [sg2, d1b] = sym_mul(E(2), darg);
    auto [so2, o2] = sym_mul(E(2), dop_extra);
    auto [so1, o1] = sym_mul(E(1), dop_extra);
    b.term(scale * sg1 * so2, true, d1a, o2);
    b.term(-scale * sg2 * so1, true, d1b, o1);
}

Cochain1 build_u2_1(const Rat& lam) {
    int n = 2;
    BinBuilder b(n);
    b.term(1, false, {1, bits2(1, 2)}, ID);
    if (lam == Rat(-1, 2)) add_M(b, 1, DX, ID);
    return {n, lam, lam + 1, b.build(Rat(-1), lam, lam + 1)};
}

Cochain1 build_u2_2(const Rat& lam) {
    int n = 2;
    BinBuilder b(n);
    Rat c = 2 * lam + 1;
    b.term(c * lam * Rat(2, 3), false, {3, 0}, ID);
    // H_{G''} = (-1)^{|G|} sum eta_i(G'') eta_i
    b.term(-c, true, {2, bit(1)}, E(1));
    b.term(-c, true, {2, bit(2)}, E(2));
    // -2 eta2 eta1 (G') eta2 eta1 = -2 eta1eta2(G') eta1eta2
    b.term(-2, false, {1, bits2(1, 2)}, {0, bits2(1, 2)});
    return {n, lam, lam + 2, b.build(Rat(-1), lam, lam + 2)};
}

Cochain1 build_u2_2t(const Rat& lam) {
    int n = 2;
    BinBuilder b(n);
    if (lam != -1) {
        add_M(b, 1, {2, 0}, ID);                    // M_{G''}
        b.term(-2 * lam, false, {2, bits2(1, 2)}, ID); // 2 lam eta2eta1(G'')
        b.term(2, false, {1, bits2(1, 2)}, DX);     // -2 eta2eta1(G') dx
    } else {
        add_M(b, 1, DX, DX);                        // M_{G'} dx
        b.term(1, false, {1, bits2(1, 2)}, DX);     // -eta2eta1(G') dx
        add_M(b, 1, {2, 0}, ID);                    // M_{G''}
        b.term(1, false, {2, 0}, {0, bits2(1, 2)}); // -G'' eta2eta1
    }
    return {n, lam, lam + 2, b.build(Rat(-1), lam, lam + 2)};
}

Cochain1 build_u3_half(const Rat& lam) {
    int n = 3;
    Rat half(1, 2);
    BinBuilder b(n);
    if (lam != -half) {
        b.term(-1, false, {0, bits3(1, 2, 3)}, ID); // eta3 eta2 eta1 = -eta1 o eta2 o eta3
    } else {
        DiffOp d3 = dpartial(n, 3);
        b.term(1, SuperPoly::one(n), false, false, false, d3, sym_op(n, {0, bits2(1, 2)}));
        b.term(-1, SuperPoly::one(n), false, false, false,
               compose2(sym_op(n, {0, bits2(1, 2)}), d3), one_minus_theta_eta(n, 3));
        b.term(1, SuperPoly::theta(n, 3), false, false, false,
               sym_op(n, {0, bits2(1, 3)}), sym_op(n, {0, bits2(2, 3)}));
        b.term(-1, SuperPoly::theta(n, 3), false, false, false,
               sym_op(n, {0, bits2(2, 3)}), sym_op(n, {0, bits2(1, 3)}));
    }
    return {n, lam, lam + half, b.build(Rat(-1), lam, lam + half)};
}

void add_Xi(BinBuilder& b) {
    // Xi_{G'} = (-1)^{|G|} sum_{i<j} (-1)^{i+j} eta_j eta_i (G') eta_{6-i-j}
    b.term(1, true, {1, bits2(1, 2)}, E(3));
    b.term(-1, true, {1, bits2(1, 3)}, E(2));
    b.term(1, true, {1, bits2(2, 3)}, E(1));
}

Cochain1 build_u3_3half(const Rat& lam) {
    int n = 3;
    BinBuilder b(n);
    add_Xi(b);
    if (lam != -1) {
        b.term(-2 * lam, false, {1, bits3(1, 2, 3)}, ID); // 2 lam eta3eta2eta1(G')
        b.term(1, false, {0, bits3(1, 2, 3)}, DX);        // eta3eta2eta1(G) eta1^2
    } else {
        b.term(1, false, {1, bit(3)}, {0, bits2(1, 2)});
        b.term(-1, false, {1, bit(2)}, {0, bits2(1, 3)});
        b.term(1, false, {1, bit(1)}, {0, bits2(2, 3)});
    }
    return {n, lam, lam + Rat(3, 2), b.build(Rat(-1), lam, lam + Rat(3, 2))};
}

Cochain1 build_u4_1(const Rat& lam) {
    int n = 4;
    BinBuilder b(n);
    if (lam != -1) {
        // Q_G = (-1)^{|G|} sum_{i<j<k} (-1)^{i+j+k} eta_k eta_j eta_i (G) eta_{10-i-j-k}
        b.term(-1, true, {0, bits3(1, 2, 3)}, E(4));
        b.term(1, true, {0, bits3(1, 2, 4)}, E(3));
        b.term(-1, true, {0, bits3(1, 3, 4)}, E(2));
        b.term(1, true, {0, bits3(2, 3, 4)}, E(1));
        b.term(2 * lam, false, {0, bit(1) | bit(2) | bit(3) | bit(4)}, ID);
    } else {
        DiffOp e12 = sym_op(n, {0, bits2(1, 2)});
        SuperPoly one = SuperPoly::one(n);
        for (int i = 3; i <= 4; ++i) {
            int j = 7 - i;
            Rat sgn = (i % 2) ? Rat(-1) : Rat(1); // (-1)^i
            DiffOp zi = one_minus_theta_eta(n, j); // zeta_i = 1 - theta_{7-i} eta_{7-i}
            DiffOp zj = one_minus_theta_eta(n, i); // zeta_{7-i}
            DiffOp dizi = compose2(dpartial(n, i), zi);
            // A_G pieces, overall (-1)^{|G|} via the s1 flag
            b.term(sgn, one, true, false, false, compose2(e12, dizi),
                   compose2(zj, dpartial(n, j)));
            b.term(-sgn, one, true, false, false, dizi, compose2(e12, dpartial(n, j)));
            // (-1)^i theta_i M_{eta_i zeta_i(G)} eta_i d_{7-i}; the argument is odd,
            // so (-1)^{|X|} contributes an extra -1 and the s1 flag
            DiffOp eizi = compose2(sym_op(n, E(i)), zi);
            DiffOp ei_dj = compose2(sym_op(n, E(i)), dpartial(n, j));
            b.term(-sgn, SuperPoly::theta(n, i), true, false, false,
                   compose2(sym_op(n, E(1)), eizi), compose2(sym_op(n, E(2)), ei_dj));
            b.term(sgn, SuperPoly::theta(n, i), true, false, false,
                   compose2(sym_op(n, E(2)), eizi), compose2(sym_op(n, E(1)), ei_dj));
        }
        DiffOp d43 = compose2(dpartial(n, 4), dpartial(n, 3));
        DiffOp z3 = one_minus_theta_eta(n, 4); // zeta_3
        DiffOp z4 = one_minus_theta_eta(n, 3); // zeta_4
        b.term(2, one, false, false, false, compose2(e12, d43), compose2(z4, z3));
        // M_{d4 d3 G} (zeta3 zeta4 + theta3 theta4 eta4 eta3)
        DiffOp tail = compose2(z3, z4);
        DiffOp t34 = DiffOp::mult(SuperPoly::theta(n, 3) * SuperPoly::theta(n, 4), 0, 0);
        tail = tail - compose2(t34, sym_op(n, {0, bits2(3, 4)})); // eta4 eta3 = -eta3 o eta4
        b.term(1, one, true, false, false, compose2(sym_op(n, E(1)), d43),
               compose2(sym_op(n, E(2)), tail));
        b.term(-1, one, true, false, false, compose2(sym_op(n, E(2)), d43),
               compose2(sym_op(n, E(1)), tail));
    }
    return {n, lam, lam + 1, b.build(Rat(-1), lam, lam + 1)};
}

} // namespace

Cochain1 odd_cocycle_variant(int i) {
    if (i < 1 || i > 3) throw error("odd_cocycle_variant: i must be 1..3");
    int n = 3;
    int l = (i == 1) ? 2 : 1;
    int k = (i == 3) ? 2 : 3;
    Rat half(1, 2);
    BinBuilder b(n);
    DiffOp di = dpartial(n, i);
    auto [slk, elk] = sym_mul(E(l), E(k));
    b.term(slk, SuperPoly::one(n), false, false, false, di, sym_op(n, elk));
    b.term(-slk, SuperPoly::one(n), false, false, false,
           compose2(sym_op(n, elk), di), one_minus_theta_eta(n, i));
    auto [s1, eli] = sym_mul(E(l), E(i));
    auto [s2, eki] = sym_mul(E(k), E(i));
    b.term(Rat(s1 * s2), SuperPoly::theta(n, i), false, false, false, sym_op(n, eli), sym_op(n, eki));
    b.term(Rat(-s1 * s2), SuperPoly::theta(n, i), false, false, false, sym_op(n, eki), sym_op(n, eli));
    return {n, Rat(-half), Rat(0), b.build(Rat(-1), Rat(-half), Rat(0))};
}

bool verify_index_swap_identity(int j) {
    if (j != 1 && j != 2) throw error("verify_index_swap_identity: j must be 1 or 2");
    int n = 3;
    Rat half(1, 2);
    Cochain1 lhs = build_u3_half(-half);
    Cochain1 uj = odd_cocycle_variant(j);
    lhs = (j % 2) ? lhs - uj : lhs + uj;
    // A = (theta3 eta_j + theta_j eta3) eta_{3-j}
    DiffOp inner = compose2(DiffOp::mult(SuperPoly::theta(n, 3), 0, 0), sym_op(n, E(j))) +
                   compose2(DiffOp::mult(SuperPoly::theta(n, j), 0, 0), sym_op(n, E(3)));
    DiffOp a = compose2(inner, sym_op(n, E(3 - j))).with_weights(-half, Rat(0));
    Cochain1 rhs = delta0(a) * Rat(2 * ((j % 2) ? -1 : 1));
    return lhs.equal_terms(rhs);
}

std::vector<CocycleEntry> cocycle_catalog(int n) {
    std::vector<CocycleEntry> es;
    auto always = [](const Rat&) { return true; };
    if (n >= 2)
        es.push_back({"u_0", n, Rat(0), always, [n](const Rat& l) { return build_u0(n, l); },
                      "G' at mu = lambda", 1});
    if (n == 2) {
        es.push_back({"u2_0t", 2, Rat(0), always, build_u2_0t, "twin class at mu = lambda on K(2)", 2});
        es.push_back({"u2_1", 2, Rat(1), always, build_u2_1, "mu = lambda + 1 on K(2)", 2});
        es.push_back({"u2_2", 2, Rat(2), always, build_u2_2, "mu = lambda + 2 on K(2)", 3});
        es.push_back({"u2_2t", 2, Rat(2), always, build_u2_2t, "twin class at mu = lambda + 2 on K(2)", 3});
    }
    if (n == 3) {
        es.push_back({"u3_half", 3, Rat(1, 2), always, build_u3_half, "mu = lambda + 1/2 on K(3)", 3});
        es.push_back({"u3_3half", 3, Rat(3, 2), always, build_u3_3half, "mu = lambda + 3/2 on K(3)", 3});
        es.push_back({"u3_odd", 3, Rat(1, 2), [](const Rat& l) { return l == Rat(-1, 2); },
                      [](const Rat&) { return build_u3_half(Rat(-1, 2)); },
                      "odd cocycle at (-1/2, 0), the distinguished class", 3});
        for (int i = 1; i <= 3; ++i)
            es.push_back({"u3_rel_" + std::to_string(i), 3, Rat(1, 2),
                          [](const Rat& l) { return l == Rat(-1, 2); },
                          [i](const Rat&) { return odd_cocycle_variant(i); },
                          "relative-analysis cocycle sharing the class at (-1/2, 0)", 2});
    }
    if (n == 4)
        es.push_back({"u4_1", 4, Rat(1), always, build_u4_1, "mu = lambda + 1 on K(4)", 4});
    return es;
}

std::optional<Cochain1> build_cocycle(const std::string& name, int n, const Rat& lam) {
    for (auto& e : cocycle_catalog(n))
        if (e.name == name && e.lam_ok(lam)) return e.build(lam);
    return std::nullopt;
}

std::vector<std::string> cocycle_names(int n) {
    std::vector<std::string> out;
    for (auto& e : cocycle_catalog(n)) out.push_back(e.name);
    return out;
}

std::vector<DiffOp> coboundary_catalog_k2(int i, int m_i, const Rat& lam, const Rat& mu) {
    if (i < 1 || i > 3 || m_i < 1 || m_i > 3 || i == m_i)
        throw error("coboundary_catalog_k2: need distinct i, m_i in {1,2,3}");
    int n = 3;
    int j = 6 - i - m_i;
    Rat half(1, 2);
    std::vector<DiffOp> out;
    auto theta_m = DiffOp::mult(SuperPoly::theta(n, m_i), 0, 0);
    if (lam == 0 && mu == half) {
        out.push_back(dpartial(n, m_i));
        out.push_back(compose2(sym_op(n, E(j)), compose2(theta_m, sym_op(n, E(m_i))) - id_op(n)));
    } else if (lam == -half && mu == 0) {
        out.push_back(dpartial(n, m_i));
        out.push_back(compose2(theta_m, compose2(sym_op(n, E(j)), sym_op(n, E(m_i)))));
    } else if (lam == 0 && mu == 0) {
        out.push_back(compose2(theta_m, sym_op(n, E(j))));
        out.push_back(compose2(theta_m, sym_op(n, E(m_i))));
    } else if (lam == -half && mu == half) {
        out.push_back(compose2(dpartial(n, m_i), sym_op(n, E(j))));
    } else if (lam == mu && lam != 0) {
        out.push_back(compose2(theta_m, sym_op(n, E(m_i))));
    } else if (mu == lam + half && lam != 0 && lam != -half) {
        out.push_back(dpartial(n, m_i));
    } else if (mu == lam - half) {
        out.push_back(theta_m);
    } else {
        return out;
    }
    for (auto& a : out) {
        a = a.with_weights(lam, mu);
        // this catalog lives on the two-variable module: delta(A)(X_F) must kill
        // theta_i-free densities for every F in K(1)^{m_i}
        Cochain1 d = delta0(a);
        Mask gen_avoid = bit(i) | bit(m_i), in_avoid = bit(i);
        Mask full = (Mask{1} << n) - 1;
        int order = a.max_order();
        for (int mf = 0; mf <= order + 3; ++mf)
            for (Mask sf = 0; sf <= full; ++sf) {
                if (sf & gen_avoid) continue;
                DiffOp val = d.eval_at(SuperPoly::mono(n, {mf, sf}));
                for (int mu2 = 0; mu2 <= order + 3; ++mu2)
                    for (Mask su = 0; su <= full; ++su) {
                        if (su & in_avoid) continue;
                        if (!val.apply(SuperPoly::mono(n, {mu2, su})).is_zero())
                            throw error("coboundary_catalog_k2: potential fails the vanishing property");
                    }
            }
    }
    return out;
}

// ---------------------------------------------------------------------------
// H^1 pipeline.

namespace {

struct SectorData {
    std::vector<AnsatzKey> keys;
    std::vector<SparseVec> z_basis;
    std::vector<SparseVec> b_vecs;
    int z = 0, b = 0, h = 0;
};

std::vector<AnsatzKey> cochain_ansatz(int n, int max_order, int sector) {
    std::vector<AnsatzKey> keys;
    Mask full = (Mask{1} << n) - 1;
    for (Mask t = 0; t <= full; ++t)
        for (Mask e1 = 0; e1 <= full; ++e1)
            for (Mask e2 = 0; e2 <= full; ++e2)
                for (int k1 = 0; k1 <= max_order; ++k1)
                    for (int k2 = 0; k1 + k2 <= max_order; ++k2) {
                        AnsatzKey key{{0, t}, {k1, e1}, {k2, e2}};
                        if (ansatz_order(key) > max_order) continue;
                        if (ansatz_sector(key) != sector) continue;
                        keys.push_back(key);
                    }
    return keys;
}

BinOp term_binop(int n, const Rat& lam, const Rat& mu, const AnsatzKey& k) {
    BinOp t(n, Rat(-1), lam, mu);
    t.add_term({k.d1, k.d2}, SuperPoly::mono(n, k.c));
    return t;
}

// Z: nullspace of the certified cocycle constraints (and vanishing constraints
// on the avoid-subalgebra in the relative case).
int kernel_window(const std::vector<AnsatzKey>& keys, int dmax) {
    int k1 = 0, k2 = 0;
    for (auto& k : keys) {
        k1 = std::max(k1, k.d1.k + popcount(k.d1.etas));
        k2 = std::max(k2, k.d2.k + popcount(k.d2.etas));
    }
    // Each composition in the defect differentiates a slot coefficient at most
    // once, so max(K1, K2) + 2 certifies completeness in both slots.
    return std::max(dmax, std::max(k1, k2) + 2);
}

std::vector<SparseVec> vanishing_rows(int n, const Rat& lam, const Rat& mu,
                                      const std::vector<AnsatzKey>& keys, int window, Mask avoid) {
    std::vector<Cochain1> terms;
    terms.reserve(keys.size());
    for (auto& k : keys) terms.emplace_back(n, lam, mu, term_binop(n, lam, mu, k));
    struct VKey {
        Monomial g, m;
        Sym s;
        auto operator<=>(const VKey&) const = default;
    };
    std::map<VKey, SparseVec> rows;
    Mask full = (Mask{1} << n) - 1;
    for (int m = 0; m <= window; ++m)
        for (Mask s = 0; s <= full; ++s) {
            if (s & avoid) continue;
            SuperPoly g = SuperPoly::mono(n, {m, s});
            for (std::size_t c = 0; c < keys.size(); ++c) {
                DiffOp v = terms[c].eval_at(g);
                for (auto& [sy, poly] : v.terms())
                    for (auto& [mm, q] : poly.terms())
                        rows[{{m, s}, mm, sy}].emplace_back(static_cast<int>(c), q);
            }
        }
    std::vector<SparseVec> out;
    out.reserve(rows.size());
    for (auto& [k, v] : rows) out.push_back(std::move(v));
    return out;
}

void compute_z(int n, const Rat& lam, const Rat& mu, SectorData& sd, int dmax, Mask avoid) {
    PhaseTimer pt("compute_z");
    int window = kernel_window(sd.keys, dmax);
    if (!generation_certificate(n, window))
        throw error("generation certificate failed");
    NullAccumulator acc(static_cast<int>(sd.keys.size()));
    if (avoid) acc.constrain(vanishing_rows(n, lam, mu, sd.keys, window, avoid));
    assemble_cocycle_constraints(n, lam, mu, sd.keys, window,
                                 [&](SparseVec& row) { acc.constrain({row}); });
    sd.z_basis = acc.basis();
    sd.z = static_cast<int>(sd.z_basis.size());
}

// B: x-independent part of delta0 over potentials of x-degree <= 1 and order
// <= max_order + 2, restricted to the ansatz coordinates (and to invariant
// potentials in the relative case).
void compute_b(int n, const Rat& lam, const Rat& mu, SectorData& sd, int max_order, int sector,
               Mask avoid) {
    PhaseTimer pt("compute_b");
    std::vector<UnaryKey> akeys;
    for (auto& k : unary_ansatz(n, max_order + 2, 1))
        if (unary_sector(k) == sector - 2) akeys.push_back(k);
    if (akeys.empty()) return;

    std::map<AnsatzKey, int> zindex;
    for (std::size_t i = 0; i < sd.keys.size(); ++i) zindex.emplace(sd.keys[i], static_cast<int>(i));

    // columns: either single potentials, or a basis of the invariant ones
    std::vector<DiffOp> potentials;
    if (!avoid) {
        for (auto& k : akeys) {
            DiffOp a(n, lam, mu);
            a.add_term(k.s, SuperPoly::mono(n, k.c));
            potentials.push_back(std::move(a));
        }
    } else {
        // invariant subspace: module_action(X_h, A) = 0 for the h-window
        int hwin = 0;
        for (auto& k : akeys) hwin = std::max(hwin, k.s.k + popcount(k.s.etas));
        hwin += 3;
        struct IKey {
            Monomial h, m;
            Sym s;
            auto operator<=>(const IKey&) const = default;
        };
        std::map<IKey, SparseVec> rows;
        Mask full = (Mask{1} << n) - 1;
        for (int m = 0; m <= hwin; ++m)
            for (Mask s = 0; s <= full; ++s) {
                if (s & avoid) continue;
                SuperPoly h = SuperPoly::mono(n, {m, s});
                for (std::size_t j = 0; j < akeys.size(); ++j) {
                    DiffOp a(n, lam, mu);
                    a.add_term(akeys[j].s, SuperPoly::mono(n, akeys[j].c));
                    DiffOp act = module_action(h, a);
                    for (auto& [sy, poly] : act.terms())
                        for (auto& [mm, q] : poly.terms())
                            rows[{{m, s}, mm, sy}].emplace_back(static_cast<int>(j), q);
                }
            }
        RatMatrix mat(static_cast<int>(akeys.size()));
        for (auto& [k, v] : rows) mat.add_row(std::move(v));
        Subspace inv = nullspace(mat);
        for (auto& comb : inv.basis)
            potentials.push_back(materialize_unary(n, lam, mu, akeys, comb));
    }

    // assemble delta0 images; rows split into ansatz coords and out-of-space coords
    std::map<AnsatzKey, SparseVec> in_rows;
    std::map<AnsatzKey, SparseVec> out_rows;
    for (std::size_t j = 0; j < potentials.size(); ++j) {
        if (potentials[j].is_zero()) continue;
        Cochain1 d = delta0(potentials[j]);
        for (auto& [sp, poly] : d.body.terms())
            for (auto& [m, q] : poly.terms()) {
                AnsatzKey ck{m, sp.first, sp.second};
                auto& dst = zindex.count(ck) ? in_rows : out_rows;
                dst[ck].emplace_back(static_cast<int>(j), q);
            }
    }
    RatMatrix outm(static_cast<int>(potentials.size()));
    for (auto& [k, v] : out_rows) outm.add_row(std::move(v));
    Subspace w = nullspace(outm);

    for (auto& comb : w.basis) {
        SparseVec img;
        for (auto& [ck, row] : in_rows) {
            Rat dot = 0;
            for (auto& [j, q] : row) dot += q * svec_get(comb, j);
            if (dot != 0) img.emplace_back(zindex.at(ck), std::move(dot));
        }
        svec_normalize(img);
        if (!img.empty()) sd.b_vecs.push_back(svec_canonical(std::move(img)));
    }
    sd.b = span_rank(sd.b_vecs, static_cast<int>(sd.keys.size()));
}

std::string cochain_string(int n, const Rat& lam, const Rat& mu,
                           const std::vector<AnsatzKey>& keys, const SparseVec& v) {
    BinOp t(n, Rat(-1), lam, mu);
    for (auto& [c, q] : v) t.add_term({keys[c].d1, keys[c].d2}, SuperPoly::mono(n, keys[c].c, q));
    return format_binop(t);
}

// Large-system path: the coboundaries plus the catalog candidates span a
// subspace B' of certified cocycles; the cocycle space equals B' exactly when
// the constraint matrix is injective on a complement of B', which keeps the
// elimination's nullity (and so its fill-in) near zero.
void quotient_first(int n, const Rat& lam, const Rat& mu, int max_order, int g,
                    const H1Options& opts, SectorData& sd, H1Report& rep) {
    PhaseTimer pt("quotient_first");
    compute_b(n, lam, mu, sd, max_order, g, 0);
    int ncols = static_cast<int>(sd.keys.size());

    std::map<AnsatzKey, int> zindex;
    for (std::size_t i = 0; i < sd.keys.size(); ++i) zindex.emplace(sd.keys[i], static_cast<int>(i));

    // catalog candidates inside this truncation
    std::vector<SparseVec> rep_vecs;
    std::vector<std::string> rep_names;
    for (auto& e : cocycle_catalog(n)) {
        if (e.mu_minus_lambda != mu - lam || !e.lam_ok(lam)) continue;
        Cochain1 c = e.build(lam);
        SparseVec v;
        bool inside = true;
        for (auto& [sp, poly] : c.body.terms())
            for (auto& [m, q] : poly.terms()) {
                AnsatzKey ck{m, sp.first, sp.second};
                auto it = zindex.find(ck);
                if (it == zindex.end()) inside = false;
                else v.emplace_back(it->second, q);
            }
        if (!inside || v.empty()) continue;
        svec_normalize(v);
        rep_vecs.push_back(std::move(v));
        rep_names.push_back(e.name);
    }

    int rb = span_rank(sd.b_vecs, ncols);
    std::vector<SparseVec> bprime = sd.b_vecs;
    for (auto& v : rep_vecs) bprime.push_back(v);
    int rbp = span_rank(bprime, ncols);
    int k = rbp - rb; // independent catalog classes modulo coboundaries

    Rref bred = rref(bprime, ncols);
    std::vector<char> in_p(ncols, 0);
    for (int c : bred.pivot_col) in_p[c] = 1;
    int np = static_cast<int>(bred.pivot_col.size());

    int window = kernel_window(sd.keys, opts.dmax);
    if (!generation_certificate(n, window)) throw error("generation certificate failed");

    NullAccumulator acc(ncols);
    assemble_cocycle_constraints(n, lam, mu, sd.keys, window, [&](SparseVec& row) {
        // the catalog candidates must be honest cocycles
        for (auto& rv : rep_vecs) {
            Rat dot = 0;
            std::size_t a = 0, b = 0;
            while (a < row.size() && b < rv.size()) {
                if (row[a].first < rv[b].first) ++a;
                else if (rv[b].first < row[a].first) ++b;
                else dot += row[a++].second * rv[b++].second;
            }
            if (dot != 0) throw error("catalog candidate violates a cocycle constraint");
        }
        SparseVec dropped;
        dropped.reserve(row.size());
        for (auto& [c, q] : row)
            if (!in_p[c]) dropped.emplace_back(c, q);
        if (!dropped.empty()) acc.constrain({dropped});
    });

    int extras = acc.dim() - np;
    if (extras < 0) throw error("quotient-first bookkeeping failed");
    sd.b = rb;
    sd.h = k + extras;
    sd.z = sd.b + sd.h;
    rep.z_dim = sd.z;
    rep.b_dim = sd.b;
    rep.h1_dim = sd.h;
    rep.matched_catalog = rep_names;
    rep.catalog_covers = (extras == 0);
    for (auto& name : rep_names) rep.representatives.push_back("catalog:" + name);
    if (extras > 0) {
        for (auto& v : acc.basis()) {
            if (v.size() == 1 && in_p[v.front().first]) continue; // unit vectors at P
            rep.representatives.push_back(cochain_string(n, lam, mu, sd.keys, v));
        }
    }
}

} // namespace

static H1Report h1_impl(int n, const Rat& lam, const Rat& mu, int max_order, const H1Options& opts,
                        Mask avoid) {
    H1Report rep;
    rep.n = n;
    rep.lam = lam;
    rep.mu = mu;
    rep.max_order = max_order;
    rep.generator_dmax = opts.dmax;
    rep.verified = true;

    Rat g2 = 2 * (mu - lam) + 2;
    bool resonant = is_integer(g2);
    if (!resonant) {
        rep.note = "mu - lambda is not a half-integer: the resonant grading sector is empty";
        return rep;
    }
    int gstar = static_cast<int>(to_long(g2));

    std::vector<int> sectors;
    if (opts.all_sectors) {
        std::map<int, bool> seen;
        for (int g = -2 * n - 2 * max_order; g <= 2 * max_order + n + 2; ++g)
            if (!cochain_ansatz(n, max_order, g).empty()) seen[g] = true;
        for (auto& [g, u] : seen) sectors.push_back(g);
    } else {
        sectors.push_back(gstar);
    }

    for (int g : sectors) {
        SectorData sd;
        sd.keys = cochain_ansatz(n, max_order, g);
        if (sd.keys.empty()) continue;
        std::size_t qf_threshold = 3000; // env override for cross-validation tests
        if (const char* t = std::getenv("CK_QF_THRESHOLD")) qf_threshold = std::atoi(t);
        if (!avoid && g == gstar && sd.keys.size() > qf_threshold) {
            quotient_first(n, lam, mu, max_order, g, opts, sd, rep);
            continue;
        }
        compute_z(n, lam, mu, sd, opts.dmax, avoid);
        compute_b(n, lam, mu, sd, max_order, g, avoid);
        Subspace z{static_cast<int>(sd.keys.size()), sd.z_basis};
        Subspace bb{static_cast<int>(sd.keys.size()), sd.b_vecs};
        PhaseTimer pq("quotient");
        sd.h = quotient_dim(z, bb); // also certifies B inside Z
        if (g != gstar && sd.h != 0) throw error("nonresonant sector has cohomology; homotopy argument violated");
        if (g != gstar) continue;

        rep.z_dim = sd.z;
        rep.b_dim = sd.b;
        rep.h1_dim = sd.h;

        // representatives: extend B to Z deterministically
        std::vector<SparseVec> span = sd.b_vecs;
        for (auto& v : sd.z_basis) {
            if (static_cast<int>(rep.representatives.size()) >= sd.h) break;
            if (in_span(span, static_cast<int>(sd.keys.size()), v)) continue;
            span.push_back(v);
            rep.representatives.push_back(cochain_string(n, lam, mu, sd.keys, v));
        }

        // match the catalog: which entries lie in Z, and does B + catalog cover Z
        std::vector<SparseVec> bc = sd.b_vecs;
        std::map<AnsatzKey, int> zindex;
        for (std::size_t i = 0; i < sd.keys.size(); ++i)
            zindex.emplace(sd.keys[i], static_cast<int>(i));
        for (auto& e : cocycle_catalog(n)) {
            if (avoid) break; // catalog matching reported for absolute cohomology only
            if (e.mu_minus_lambda != mu - lam || !e.lam_ok(lam)) continue;
            Cochain1 c = e.build(lam);
            SparseVec v;
            bool inside = true;
            for (auto& [sp, poly] : c.body.terms())
                for (auto& [m, q] : poly.terms()) {
                    AnsatzKey ck{m, sp.first, sp.second};
                    auto it = zindex.find(ck);
                    if (it == zindex.end()) inside = false;
                    else v.emplace_back(it->second, q);
                }
            if (!inside) continue; // beyond this truncation
            svec_normalize(v);
            if (!in_span(sd.z_basis, static_cast<int>(sd.keys.size()), v))
                throw error("catalog cocycle not contained in the computed cocycle space");
            bc.push_back(v);
            rep.matched_catalog.push_back(e.name);
        }
        if (!avoid)
            rep.catalog_covers = span_rank(bc, static_cast<int>(sd.keys.size())) == sd.z;
    }

    if (n >= 5 && mu != lam)
        rep.note = (rep.note.empty() ? std::string() : rep.note + "; ") +
                   "0 at this truncation (order <= " + std::to_string(max_order) + ")";
    return rep;
}

H1Report h1_dim(int n, const Rat& lam, const Rat& mu, int max_order, const H1Options& opts) {
    return h1_impl(n, lam, mu, max_order, opts, 0);
}

H1Report relative_h1_dim(int n, int i, const Rat& lam, const Rat& mu, int max_order,
                         const H1Options& opts) {
    if (i < 1 || i > n) throw error("relative_h1_dim: index out of range");
    return h1_impl(n, lam, mu, max_order, opts, bit(i));
}

} // namespace ck
