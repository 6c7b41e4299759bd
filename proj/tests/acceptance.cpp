// Acceptance suite: one pass/fail line per criterion, exact checks throughout.
// Run with a list of criterion numbers (1..11) or no arguments for all.

#include "contactk/cohomology.hpp"
#include "contactk/invariants.hpp"
#include "contactk/lifts.hpp"
#include "contactk/report.hpp"

#include <chrono>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace ck;

namespace {

int failures = 0;

void run(int id, const std::string& what, const std::function<bool()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string err;
    try {
        ok = body();
    } catch (const std::exception& e) {
        err = e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream line;
    line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << what << " ("
         << static_cast<int>(dt + 0.5) << " s)";
    if (!err.empty()) line << "  error: " << err;
    std::cout << line.str() << std::endl;
    if (!ok) ++failures;
}

std::vector<SuperPoly> monomials_upto(int n, int d) {
    std::vector<SuperPoly> out;
    Mask full = (Mask{1} << n) - 1;
    for (int m = 0; m <= d; ++m)
        for (Mask s = 0; s <= full; ++s) out.push_back(SuperPoly::mono(n, {m, s}));
    return out;
}

// --- criterion bodies -------------------------------------------------------

bool crit1_algebra_laws() {
    for (int n = 1; n <= 4; ++n) {
        auto ms = monomials_upto(n, 3);
        for (auto& p : ms)
            for (auto& q : ms) {
                SuperPoly pq = p * q, qp = q * p;
                if (!(pq == ((p.parity_bit() && q.parity_bit()) ? -qp : qp))) return false;
                SuperPoly d = (p * q).dx() - (p.dx() * q + p * q.dx());
                if (!d.is_zero()) return false;
                for (int i = 1; i <= n; ++i) {
                    SuperPoly rhs = p.eta(i) * q;
                    rhs += p.parity_bit() ? -(p * q.eta(i)) : p * q.eta(i);
                    if (!(pq.eta(i) == rhs)) return false;
                    SuperPoly rhs2 = p.dtheta(i) * q;
                    rhs2 += p.parity_bit() ? -(p * q.dtheta(i)) : p * q.dtheta(i);
                    if (!(pq.dtheta(i) == rhs2)) return false;
                }
            }
        for (auto& p : ms)
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    SuperPoly anti = p.eta(j).eta(i) + p.eta(i).eta(j);
                    SuperPoly expect = (i == j) ? Rat(-2) * p.dx() : SuperPoly::zero(n);
                    if (!(anti == expect)) return false;
                }
        auto m2 = monomials_upto(n, 3);
        for (auto& a : m2)
            for (auto& b : m2)
                for (auto& c : m2)
                    if (!((a * b) * c == a * (b * c))) return false;
    }
    return true;
}

bool crit2_contact() {
    for (int n = 1; n <= 3; ++n) {
        auto ms = monomials_upto(n, 2);
        for (auto& f : ms)
            for (auto& g : ms) {
                SuperPoly fg = contact_bracket(f, g), gf = contact_bracket(g, f);
                if (!(fg == ((f.parity_bit() && g.parity_bit()) ? gf : -gf))) return false;
            }
        for (auto& a : ms)
            for (auto& b : ms)
                for (auto& c : ms) {
                    SuperPoly j1 = contact_bracket(a, contact_bracket(b, c));
                    SuperPoly j2 = contact_bracket(b, contact_bracket(c, a));
                    SuperPoly j3 = contact_bracket(c, contact_bracket(a, b));
                    if (a.parity_bit() & c.parity_bit()) j1 = -j1;
                    if (b.parity_bit() & a.parity_bit()) j2 = -j2;
                    if (c.parity_bit() & b.parity_bit()) j3 = -j3;
                    if (!(j1 + j2 + j3).is_zero()) return false;
                }
    }
    auto gens = generators(3, 3);
    for (auto& xf : gens)
        for (auto& xg : gens) {
            DiffOp lhs = vector_field_of(bracket_as_fields(xf, xg));
            DiffOp rhs = super_commutator(vector_field_of(xf), vector_field_of(xg));
            if (!lhs.equal_terms(rhs)) return false;
        }
    return true;
}

bool crit3_module_law() {
    std::vector<Rat> weights = {rat(-1), rat(-1, 2), rat(0), rat(1, 2), rat(1), rat(3, 2)};
    for (int n = 1; n <= 3; ++n) {
        auto gens = generators(n, 3);
        for (auto& w : weights)
            for (auto& xf : gens)
                for (auto& xg : gens) {
                    DiffOp comm = super_commutator(density_action_op(xf.gen, w),
                                                   density_action_op(xg.gen, w));
                    if (!comm.equal_terms(density_action_op(contact_bracket(xf.gen, xg.gen), w)))
                        return false;
                }
    }
    return true;
}

bool crit4_catalog_invariance() {
    std::vector<Rat> lams = {rat(1, 4), rat(-2, 3), rat(5, 7), rat(-1, 6), rat(2)};
    // n = 1: the whole K(1) list, including the special triples
    for (auto& l : lams) {
        Rat m(2, 5);
        struct P {
            const char* name;
            Rat l, m, v;
        };
        std::vector<P> probes = {
            {"mult", l, m, l + m},
            {"buttin", l, m, l + m + rat(1, 2)},
            {"poisson1", l, m, l + m + 1},
            {"s_mu", rat(0), l, l + rat(3, 2)},
            {"s_lam", l, rat(0), l + rat(3, 2)},
            {"t_dual", l, -l - 1, rat(1, 2)},
        };
        for (auto& p : probes) {
            auto e = catalog_entry(p.name, 1, p.l, p.m, p.v);
            if (!e) return false;
            if (!is_invariant(e->op, 5).ok) return false;
        }
    }
    for (auto& [name, l, m, v] :
         std::vector<std::tuple<const char*, Rat, Rat, Rat>>{
             {"buttin_a", rat(0), rat(0), rat(1, 2)},
             {"buttin_b", rat(0), rat(0), rat(1, 2)},
             {"t002", rat(0), rat(0), rat(2)},
             {"t3200", rat(-3, 2), rat(0), rat(1, 2)},
             {"t0320", rat(0), rat(-3, 2), rat(1, 2)}}) {
        auto e = catalog_entry(name, 1, l, m, v);
        if (!e || !is_invariant(e->op, 5).ok) return false;
    }
    // n = 2, 3: the even operators of the theorem at their declared weights
    for (int n = 2; n <= 3; ++n)
        for (auto& l : lams) {
            Rat m(2, 5);
            auto a = catalog_entry("a", n, l, m, l + m);
            auto b = catalog_entry("b", n, l, m, l + m + 1);
            if (!a || !b) return false;
            if (!is_invariant(a->op, 5).ok || !is_invariant(b->op, 5).ok) return false;
        }
    for (auto& l : lams) {
        auto c = catalog_entry("c", 2, rat(0), l, l + 1);
        auto d = catalog_entry("d", 2, l, rat(0), l + 1);
        auto e = catalog_entry("e", 2, l, -l - 1, rat(0));
        if (!c || !d || !e) return false;
        if (!is_invariant(c->op, 5).ok) return false;
        if (!is_invariant(d->op, 5).ok) return false;
        if (!is_invariant(e->op, 5).ok) return false;
    }
    return true;
}

bool crit5_theorem_main_search() {
    std::vector<Rat> grid = {rat(-3, 2), rat(-1), rat(-1, 2), rat(-1, 3), rat(0), rat(1, 4), rat(1)};
    std::vector<Rat> offsets = {rat(-1, 2), rat(0), rat(1, 2), rat(1), rat(3, 2), rat(2)};
    for (int n = 2; n <= 3; ++n)
        for (auto& l : grid)
            for (auto& m : grid)
                for (auto& off : offsets) {
                    Rat v = l + m + off;
                    std::size_t expect = 0;
                    if (off == 0) expect = 1;
                    else if (off == 1) expect = (n == 2 && l * m * v == 0) ? 2 : 1;
                    auto s = search_invariant(n, l, m, v, 4);
                    if (s.basis.size() != expect) {
                        std::cerr << "  mismatch n=" << n << " l=" << rat_str(l) << " m="
                                  << rat_str(m) << " nu=" << rat_str(v) << " got "
                                  << s.basis.size() << " want " << expect << "\n";
                        return false;
                    }
                    if (!s.verified || !s.matches_catalog) return false;
                }
    return true;
}

bool crit6_poisson() {
    for (int n = 2; n <= 3; ++n) {
        auto rep = verify_poisson_laws(n, {rat(-1), rat(0), rat(1, 2)}, 2);
        if (!rep.ok()) return false;
    }
    if (!verify_poisson_laws(3, {rat(0)}, 2).ok()) return false;
    return true;
}

bool crit7_cocycles() {
    struct P {
        const char* name;
        int n;
        Rat lam;
    };
    std::vector<P> probes = {
        {"u_0", 2, rat(1, 4)},      {"u_0", 2, rat(-2, 3)},    {"u2_0t", 2, rat(0)},
        {"u2_0t", 2, rat(1, 4)},    {"u2_1", 2, rat(1, 4)},    {"u2_1", 2, rat(-1, 2)},
        {"u2_2", 2, rat(1, 4)},     {"u2_2", 2, rat(-1, 2)},   {"u2_2t", 2, rat(1, 4)},
        {"u2_2t", 2, rat(-1)},      {"u_0", 3, rat(1, 4)},     {"u3_half", 3, rat(1, 4)},
        {"u3_half", 3, rat(-1, 2)}, {"u3_3half", 3, rat(1, 4)}, {"u3_3half", 3, rat(-1)},
        {"u3_odd", 3, rat(-1, 2)},  {"u3_rel_1", 3, rat(-1, 2)}, {"u3_rel_2", 3, rat(-1, 2)},
        {"u4_1", 4, rat(1, 4)},     {"u4_1", 4, rat(-1)},      {"u_0", 4, rat(1, 4)},
    };
    for (auto& p : probes) {
        auto y = build_cocycle(p.name, p.n, p.lam);
        if (!y) return false;
        if (!is_cocycle(*y, 3).ok) {
            std::cerr << "  " << p.name << " at " << rat_str(p.lam) << " fails\n";
            return false;
        }
    }
    if (!verify_index_swap_identity(1) || !verify_index_swap_identity(2)) return false;
    // no entry of the catalog is a coboundary at its own order + 2
    for (auto& p : std::vector<P>{{"u_0", 3, rat(1, 4)},
                                  {"u3_half", 3, rat(1, 4)},
                                  {"u3_3half", 3, rat(1, 4)},
                                  {"u3_odd", 3, rat(-1, 2)},
                                  {"u2_2", 2, rat(1, 4)},
                                  {"u2_2t", 2, rat(1, 4)},
                                  {"u4_1", 4, rat(1, 4)}}) {
        auto yy = build_cocycle(p.name, p.n, p.lam);
        int order = 0;
        for (auto& e : cocycle_catalog(p.n))
            if (e.name == p.name) order = e.order;
        if (is_coboundary(*yy, order + 2).has_value()) {
            std::cerr << "  " << p.name << " unexpectedly trivial\n";
            return false;
        }
    }
    // Proposition-pro restriction claims for the distinguished class
    auto y = build_cocycle("u3_odd", 3, rat(-1, 2));
    if (!vanishes_on_subalgebra(*y, bit(3))) return false;
    if (!odd_cocycle_variant(3).equal_terms(*y)) return false;
    for (int j = 1; j <= 2; ++j)
        if (!is_coboundary_on(*y, bit(j), 3).has_value()) return false;
    return true;
}

bool crit8_h1_tables() {
    std::vector<Rat> lams = {rat(1, 4), rat(-2, 3)};
    auto expect_dim = [&](int n, const Rat& off) -> int {
        if (n == 2) {
            if (off == 0 || off == 2) return 2;
            if (off == 1) return 1;
            return 0;
        }
        if (n == 3) return (off == 0 || off == rat(1, 2) || off == rat(3, 2)) ? 1 : 0;
        if (n == 4) return (off == 0 || off == 1) ? 1 : 0;
        return off == 0 ? 1 : 0; // n >= 5
    };
    struct Run {
        int n;
        Rat off;
        int order;
    };
    std::vector<Run> runs;
    for (auto off : {rat(0), rat(1, 2), rat(1), rat(3, 2), rat(2), rat(5, 2), rat(3)})
        runs.push_back({2, off, 5});
    for (auto off : {rat(0), rat(1, 2), rat(3, 2), rat(-1, 2), rat(1), rat(2), rat(5, 2)})
        runs.push_back({3, off, 5});
    for (auto off : {rat(0), rat(1), rat(1, 2), rat(3, 2), rat(2)}) runs.push_back({4, off, 4});
    for (auto off : {rat(0), rat(1, 2), rat(1)}) runs.push_back({5, off, 4});
    for (auto& r : runs)
        for (auto& l : lams) {
            H1Report h = h1_dim(r.n, l, l + r.off, r.order);
            if (h.h1_dim != expect_dim(r.n, r.off) || !h.verified) {
                std::cerr << "  mismatch n=" << r.n << " lam=" << rat_str(l) << " off="
                          << rat_str(r.off) << " got " << h.h1_dim << " want "
                          << expect_dim(r.n, r.off) << "\n";
                return false;
            }
        }
    return true;
}

bool crit9_relative() {
    // dim 1 rows of the relative theorem
    for (auto& l : {rat(1, 2), rat(-2, 3)})
        for (int i = 1; i <= 2; ++i)
            if (relative_h1_dim(2, i, l, l, 3).h1_dim != 1) return false;
    for (int i = 1; i <= 3; ++i)
        if (relative_h1_dim(3, i, rat(-1, 2), rat(0), 3).h1_dim != 1) return false;
    // six off-table samples
    if (relative_h1_dim(2, 1, rat(0), rat(0), 3).h1_dim != 0) return false;
    if (relative_h1_dim(2, 1, rat(1, 3), rat(4, 3), 3).h1_dim != 0) return false;
    if (relative_h1_dim(2, 2, rat(1, 4), rat(3, 4), 3).h1_dim != 0) return false;
    if (relative_h1_dim(3, 1, rat(1, 4), rat(1, 4), 3).h1_dim != 0) return false;
    if (relative_h1_dim(3, 2, rat(1, 3), rat(5, 6), 3).h1_dim != 0) return false;
    if (relative_h1_dim(3, 3, rat(0), rat(1), 3).h1_dim != 0) return false;
    // Lemma-co catalog: every tabulated case verifies its vanishing property
    // (the builder throws when the property fails)
    if (coboundary_catalog_k2(1, 2, rat(0), rat(1, 2)).size() != 2) return false;
    if (coboundary_catalog_k2(2, 3, rat(-1, 2), rat(0)).size() != 2) return false;
    if (coboundary_catalog_k2(3, 1, rat(0), rat(0)).size() != 2) return false;
    if (coboundary_catalog_k2(1, 3, rat(-1, 2), rat(1, 2)).size() != 1) return false;
    if (coboundary_catalog_k2(2, 1, rat(2, 7), rat(2, 7)).size() != 1) return false;
    if (coboundary_catalog_k2(1, 2, rat(1, 5), rat(1, 5) + rat(1, 2)).size() != 1) return false;
    if (coboundary_catalog_k2(1, 2, rat(1, 5), rat(1, 5) - rat(1, 2)).size() != 1) return false;
    if (!coboundary_catalog_k2(1, 2, rat(2, 7), rat(3, 5)).empty()) return false;
    return true;
}

bool crit10_negative_controls() {
    int n = 2;
    // 1: sign-flipped eta-term of the Poisson-type invariant
    Rat lam(1, 3), mu(1, 5), nu = lam + mu + 1;
    BinBuilder bad(n);
    bad.term(mu, false, Sym{1, 0}, Sym{0, 0});
    bad.term(-lam, false, Sym{0, 0}, Sym{1, 0});
    for (int i = 1; i <= n; ++i) bad.term(rat(1, 2), true, Sym{0, bit(i)}, Sym{0, bit(i)});
    auto r1 = is_invariant(bad.build(lam, mu, nu), 3);
    if (r1.ok || r1.witness.is_zero() || r1.defect.is_zero()) return false;

    // 2: G'' pseudo-cocycle at lam = mu
    BinOp t(n, Rat(-1), lam, lam);
    t.add_term({Sym{2, 0}, Sym{0, 0}}, SuperPoly::one(n));
    auto r2 = is_cocycle(Cochain1{n, lam, lam, t}, 3);
    if (r2.ok) return false;
    if (delta1_defect(Cochain1{n, lam, lam, t}, ContactField(n, r2.witness_f),
                      ContactField(n, r2.witness_g))
            .is_zero())
        return false;

    // 3: sign-flipped twin class at mu = lam + 2 is no longer a cocycle
    auto good = build_cocycle("u2_2t", 2, rat(1, 4));
    BinOp flipped = good->body;
    BinOp flip_term(n, Rat(-1), rat(1, 4), rat(1, 4) + 2);
    flip_term.add_term({Sym{1, bit(1) | bit(2)}, Sym{1, 0}}, SuperPoly::constant(n, rat(-4)));
    flipped = flipped + flip_term; // 2 -> -2 on the dx-carrying term
    auto r3 = is_cocycle(Cochain1{n, rat(1, 4), rat(1, 4) + 2, flipped}, 3);
    if (r3.ok) return false;

    // 4: mutated identity in the relative analysis
    Cochain1 lhs = *build_cocycle("u3_odd", 3, rat(-1, 2)) - odd_cocycle_variant(1);
    DiffOp inner = normal_compose(DiffOp::mult(SuperPoly::theta(3, 3), 0, 0),
                                  DiffOp::from_sym(3, {0, bit(1)}, 0, 0)) +
                   normal_compose(DiffOp::mult(SuperPoly::theta(3, 1), 0, 0),
                                  DiffOp::from_sym(3, {0, bit(3)}, 0, 0));
    DiffOp a = normal_compose(inner, DiffOp::from_sym(3, {0, bit(2)}, 0, 0))
                   .with_weights(rat(-1, 2), rat(0));
    if (lhs.equal_terms(delta0(a) * Rat(2))) return false; // wrong sign must not match
    return true;
}

bool crit11_cli_golden() {
    const char* golden_dir = std::getenv("CK_GOLDEN_DIR");
    std::string dir = golden_dir ? golden_dir : "tests/golden";
    struct Case {
        std::string file;
        std::function<Json()> build;
    };
    std::vector<Case> cases = {
        {"search_n2_b_c.json",
         [] { return report_search_invariant(2, rat(0), rat(1, 3), rat(4, 3), 4, true); }},
        {"h1_n3_quarter.json", [] { return report_h1(3, rat(1, 4), rat(1, 4), 3, 0, false); }},
        {"h1_n2_off2.json", [] { return report_h1(2, rat(1, 3), rat(7, 3), 5, 0, false); }},
    };
    for (auto& c : cases) {
        Json r1 = c.build();
        Json r2 = c.build();
        std::string b1 = report_bytes(r1), b2 = report_bytes(r2);
        if (b1 != b2) return false; // repeatability
        std::ifstream in(dir + "/" + c.file);
        if (!in) {
            std::cerr << "  missing golden file " << c.file << "\n";
            return false;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        if (buf.str() != b1) {
            std::cerr << "  golden mismatch for " << c.file << "\n";
            return false;
        }
        // cache round trip is byte-identical
        ReportCache cache("/tmp/ck_acceptance_cache");
        std::string key = cache_key(r1);
        cache.store(key, b1);
        auto hit = cache.load(key);
        if (!hit || *hit != b1) return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    auto want = [&](int k) {
        return which.empty() || std::find(which.begin(), which.end(), k) != which.end();
    };

    if (want(1)) run(1, "algebra laws on monomials (n <= 4)", crit1_algebra_laws);
    if (want(2)) run(2, "contact bracket laws and operator compatibility", crit2_contact);
    if (want(3)) run(3, "density module law at 6 weights (n <= 3)", crit3_module_law);
    if (want(4)) run(4, "invariance of the full operator catalog (dmax = 5)", crit4_catalog_invariance);
    if (want(5)) run(5, "classification of invariant operators by search (n = 2, 3)", crit5_theorem_main_search);
    if (want(6)) run(6, "Poisson superalgebra laws (n = 2, 3)", crit6_poisson);
    if (want(7)) run(7, "certified cocycle catalog and restriction identities", crit7_cocycles);
    if (want(8)) run(8, "H^1 dimension tables (n = 2..5)", crit8_h1_tables);
    if (want(9)) run(9, "relative H^1 table and coboundary catalog", crit9_relative);
    if (want(10)) run(10, "negative controls carry concrete witnesses", crit10_negative_controls);
    if (want(11)) run(11, "byte-stable golden JSON reports and cache hits", crit11_cli_golden);

    return failures == 0 ? 0 : 1;
}
