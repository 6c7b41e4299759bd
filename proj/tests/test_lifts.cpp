#include "contactk/cohomology.hpp"
#include "contactk/lifts.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace ck;
using ck::testing::monomial_polys;

TEST_CASE("splitting operators") {
    int n = 3;
    for (auto& p : monomial_polys(n, 2)) {
        auto [f1, f2] = split_theta_n(p);
        CHECK(part1_op(n).apply(p) == embed_poly(f1, n));
        CHECK(part2_op(n).apply(p) == embed_poly(f2, n));
        // V theta_n = theta_n sigma(V)
        CHECK(out2_op(n).apply(p) == p * SuperPoly::theta(n, n));
    }
}

TEST_CASE("phi_lift: identity slots assemble the identity") {
    int n = 3;
    Rat lam(1, 3), half(1, 2);
    PhiParts p{n, lam, lam, {}};
    p.parts[0] = DiffOp::identity(n - 1, lam, lam);
    p.parts[3] = DiffOp::identity(n - 1, lam + half, lam + half);
    CHECK(phi_lift(p).equal_terms(DiffOp::identity(n, lam, lam)));

    PhiParts zero{n, lam, lam + 1, {}};
    CHECK(phi_lift(zero).is_zero());

    // Pi slot (lam+1/2, mu): theta_n-stripping map
    PhiParts strip{n, lam, lam, {}};
    strip.parts[1] = DiffOp::identity(n - 1, lam + half, lam);
    DiffOp s = phi_lift(strip);
    for (auto& f : monomial_polys(n, 2)) {
        auto [f1, f2] = split_theta_n(f);
        CHECK(s.apply(f) == embed_poly(f2, n));
    }

    PhiParts bad{n, lam, lam, {}};
    bad.parts[0] = DiffOp::identity(n - 1, lam + 1, lam);
    CHECK_THROWS_AS(phi_lift(bad), error);
}

TEST_CASE("phi_lift is K(n-1)-equivariant") {
    int n = 3;
    Rat lam(1, 3), mu(-1, 2), half(1, 2);
    DiffOp a00(n - 1, lam, mu);
    a00.add_term({1, bit(1)}, parse_poly("t2", n - 1));
    DiffOp a11(n - 1, lam + half, mu + half);
    a11.add_term({0, bit(1) | bit(2)}, parse_poly("2*t1*t2 - 1", n - 1));
    DiffOp a01(n - 1, lam, mu + half);
    a01.add_term({0, bit(2)}, parse_poly("t1*t2", n - 1));
    DiffOp a10(n - 1, lam + half, mu);
    a10.add_term({1, 0}, parse_poly("t1", n - 1));
    PhiParts p{n, lam, mu, {a00, a10, a01, a11}};
    DiffOp lifted = phi_lift(p);
    for (auto& h : monomial_polys(n - 1, 2)) {
        DiffOp lhs = module_action(embed_poly(h, n), lifted);
        PhiParts q{n, lam, mu, {}};
        q.parts[0] = module_action(h, a00);
        q.parts[3] = module_action(h, a11);
        q.parts[1] = module_action_pi(h, a10); // Pi-tagged slots carry the twisted action
        q.parts[2] = module_action_pi(h, a01);
        CHECK(lhs.equal_terms(phi_lift(q)));
    }
}

TEST_CASE("psi_lift embeds slots and is K(n-1)-equivariant") {
    int n = 3;
    Rat lam(1, 3), mu(-1, 2), half(1, 2);
    {
        PsiParts zero{n, lam, mu, lam + mu, {}};
        CHECK(psi_lift(zero).is_zero());
    }
    {
        // product slot: lifts to (F,G) -> F1 G1
        PsiParts p{n, lam, mu, lam + mu, {}};
        BinBuilder bb(n - 1);
        bb.term(1, false, Sym{0, 0}, Sym{0, 0});
        p.parts[0] = bb.build(lam, mu, lam + mu);
        BinOp lifted = psi_lift(p);
        for (auto& f : monomial_polys(n, 2))
            for (auto& g : monomial_polys(n, 2)) {
                auto [f1, f2] = split_theta_n(f);
                auto [g1, g2] = split_theta_n(g);
                CHECK(lifted.evaluate(f, g) == embed_poly(f1 * g1, n));
            }
    }
    {
        // equivariance on a parity-consistent 8-tuple
        PsiParts p{n, lam, mu, lam + mu + 1, {}};
        auto mk = [&](int j, int l, int k, const char* coef, Sym s1, Sym s2) {
            BinOp t(n - 1, lam + half * j, mu + half * l, lam + mu + 1 + half * k);
            t.add_term({s1, s2}, parse_poly(coef, n - 1));
            return t;
        };
        p.parts[0] = mk(0, 0, 0, "t1", {1, 0}, {0, bit(2)});
        p.parts[7] = mk(1, 1, 1, "t1", {0, bit(1)}, {0, bit(2)});
        p.parts[1] = mk(1, 0, 0, "t2", {0, 0}, {1, 0});
        p.parts[6] = mk(0, 1, 1, "x*t1*t2", {0, bit(1) | bit(2)}, {0, 0});
        BinOp lifted = psi_lift(p);
        REQUIRE(lifted.parity() == Parity::even);
        for (auto& h : monomial_polys(n - 1, 2)) {
            BinOp lhs = binary_module_action(embed_poly(h, n), lifted);
            PsiParts q{n, lam, mu, lam + mu + 1, {}};
            for (int idx = 0; idx < 8; ++idx) {
                if (!p.parts[idx]) continue;
                int j = idx & 1, l = (idx >> 1) & 1, k = (idx >> 2) & 1;
                bool pi = (j + l + k) % 2;
                const BinOp& part = *p.parts[idx];
                int ph = h.parity_bit(), pa = part.parity_bit();
                DiffOp l_out = density_action_op(h, part.wout());
                DiffOp l1 = density_action_op(h, part.w1());
                DiffOp l2 = density_action_op(h, part.w2());
                WTerms base = wterms_of(part);
                WTerms left = wt_compose_out(l_out, base);
                WTerms r1 = wt_compose_slot1(base, l1);
                WTerms r2 = wt_compose_slot2(base, l2);
                if (ph) r2 = wt_twist_s1(std::move(r2));
                Rat sgn = (pi ? ((pa ^ 1) & ph) : (pa & ph)) ? 1 : -1;
                WTerms all = std::move(left);
                for (auto& x : wt_scale(std::move(r1), sgn)) all.push_back(std::move(x));
                for (auto& x : wt_scale(std::move(r2), sgn)) all.push_back(std::move(x));
                q.parts[idx] = normalize(all, n - 1, part.w1(), part.w2(), part.wout());
            }
            CHECK(lhs.equal_terms(psi_lift(q)));
        }
    }
}

TEST_CASE("theta lifts of the K(2) classes are K(2)-cocycles in the K(3) module") {
    Rat lam(1, 3), half(1, 2);
    // Theta^{3,j,l}: transport Upsilon^2 through Phi with Pi/sigma bookkeeping
    auto theta_lift = [&](int j, int l, const Cochain1& ups2, const Rat& mu3) {
        int n = 3;
        DiffOp in = j ? part2_op(n) : part1_op(n);
        DiffOp out = sigma_op(n);
        DiffOp out_full = (j + l) % 2 ? out : DiffOp::identity(n, 0, 0);
        if (l) out_full = normal_compose(out2_op(n), out_full);
        BinOp body3 = embed_binop(ups2.body, n);
        BinOp lifted = compose_out(out_full, compose_slot2(body3, in));
        return Cochain1{n, lam, mu3, BinOp(n, Rat(-1), lam, mu3) + lifted};
    };
    // k = 2(mu - lam): parity of the lifted class equals k mod 2
    struct Case {
        const char* name;
        Rat l2;  // lambda of the K(2) class: lam + j/2
        int j, l;
        int k;   // 2(mu3 - lam)
    };
    // slot weights (lam + j/2, lam + (k+l)/2); the K(2) class has offset (k+l-j)/2
    std::vector<Case> cases = {
        {"u_0", lam, 0, 0, 0},          // Theta^{3,0,0} from mu - lam = 0
        {"u2_1", lam, 0, 0, 2},         // from mu - lam = 1
        {"u_0", lam + half, 1, 1, 0},   // Pi-twisted diagonal
        {"u2_1", lam, 0, 1, 1},         // odd lift of the mu - lam = 1 class
        {"u2_0t", lam + half, 1, 0, 1}  // odd lift of the twin class
    };
    for (auto& c : cases) {
        auto u2 = build_cocycle(c.name, 2, c.l2);
        REQUIRE(u2.has_value());
        Rat mu3 = lam + Rat(c.k) / 2;
        Cochain1 lifted = theta_lift(c.j, c.l, *u2, mu3);
        REQUIRE(!lifted.is_zero());
        // parity claim
        CHECK(lifted.parity_bit() == ((c.k % 2) + 2) % 2);
        // K(2)-cocycle inside the K(3) operator module
        auto r = is_cocycle_on(lifted, bit(3));
        CHECK_MESSAGE(r.ok, c.name, " j=", c.j, " l=", c.l);
    }
}

TEST_CASE("chi transport preserves cocycles and coboundaries") {
    int n = 2;
    auto chi_cochain = [&](const Cochain1& y) {
        return Cochain1{y.n, y.lam, y.mu, compose_out(sigma_op(y.n), y.body)};
    };
    for (auto& [name, lam] : std::vector<std::pair<const char*, Rat>>{
             {"u_0", rat(1, 4)}, {"u2_1", rat(1, 3)}, {"u2_0t", rat(0)}}) {
        auto y = build_cocycle(name, n, lam);
        REQUIRE(y.has_value());
        Cochain1 cy = chi_cochain(*y);
        CHECK(is_cocycle_pi(cy).ok);
        CHECK(!is_coboundary_pi(cy, 4).has_value()); // nontrivial stays nontrivial
    }
    // a coboundary transports to a Pi-coboundary
    DiffOp a(n, rat(1, 3), rat(1, 3) + 1);
    a.add_term({1, bit(1)}, parse_poly("t2", n));
    Cochain1 d = delta0(a);
    Cochain1 cd = chi_cochain(d);
    CHECK(is_cocycle_pi(cd).ok);
    auto w = is_coboundary_pi(cd, 3);
    CHECK(w.has_value());
}
