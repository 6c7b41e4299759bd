#include "contactk/cohomology.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace ck {

namespace {

const Sym ID{0, 0};
const Sym DX{1, 0};
Sym E(int i) { return {0, bit(i)}; }

// L^w_{X_G} with the generator slot formal: terms (D1 applied to G | D2 on the operand).
WTerms l_formal(int n, const Rat& w) {
    WTerms ts;
    ts.push_back({Rat(1), {0, 0}, false, false, false, ID, DX});
    for (int i = 1; i <= n; ++i)
        ts.push_back({Rat(-1, 2), {0, 0}, true, false, false, E(i), E(i)});
    ts.push_back({w, {0, 0}, false, false, false, DX, ID});
    return ts;
}

} // namespace

DiffOp Cochain1::eval_at(const SuperPoly& g) const {
    DiffOp r(n, lam, mu);
    for (auto& [k, c] : body.terms()) r.add_term(k.second, c * apply_sym(k.first, g));
    return r;
}

Cochain1 Cochain1::operator+(const Cochain1& o) const { return {n, lam, mu, body + o.body}; }
Cochain1 Cochain1::operator-(const Cochain1& o) const { return {n, lam, mu, body - o.body}; }
Cochain1 Cochain1::operator*(const Rat& c) const { return {n, lam, mu, body * c}; }

static Cochain1 delta0_impl(const DiffOp& a, int parity_shift) {
    int n = a.arity();
    const Rat& lam = a.src_weight();
    const Rat& mu = a.tgt_weight();
    int pa = (a.parity_bit() + parity_shift) & 1;
    WTerms first = wt_compose_slot2(l_formal(n, mu), a);
    if (pa) first = wt_twist_s1(std::move(first));
    WTerms second = wt_scale(wt_compose_out(a, l_formal(n, lam)), Rat(-1));
    for (auto& t : second) first.push_back(std::move(t));
    return {n, lam, mu, normalize(first, n, Rat(-1), lam, mu)};
}

Cochain1 delta0(const DiffOp& a) { return delta0_impl(a, 0); }
Cochain1 delta0_pi(const DiffOp& a) { return delta0_impl(a, 1); }

static DiffOp defect_impl(const Cochain1& y, const ContactField& xf, const ContactField& xg,
                          bool pi_twist) {
    if (xf.n != y.n || xg.n != y.n) throw error("defect: arity mismatch");
    int py = (y.parity_bit() + (pi_twist ? 1 : 0)) & 1;
    int pf = xf.parity_bit(), pg = xg.parity_bit();
    auto act = [&](const SuperPoly& h, const DiffOp& op) {
        return pi_twist ? module_action_pi(h, op) : module_action(h, op);
    };
    DiffOp t1 = act(xf.gen, y.eval_at(xg.gen));
    if (pf & py) t1 = -t1;
    DiffOp t2 = act(xg.gen, y.eval_at(xf.gen));
    if (pg & ((pf + py) & 1)) t2 = -t2;
    DiffOp t3 = y.eval_at(contact_bracket(xf.gen, xg.gen));
    return t1 - t2 - t3;
}

DiffOp delta1_defect(const Cochain1& y, const ContactField& xf, const ContactField& xg) {
    return defect_impl(y, xf, xg, false);
}

DiffOp delta1_defect_pi(const Cochain1& y, const ContactField& xf, const ContactField& xg) {
    return defect_impl(y, xf, xg, true);
}

// ---------------------------------------------------------------------------
// Generation certificate: iterated brackets of S = {x^m, x^m theta_i : m <= 3}
// span all monomial fields of x-degree <= deg.

std::vector<SuperPoly> cocycle_seed_family(int n) {
    std::vector<SuperPoly> s;
    for (int m = 0; m <= 3; ++m) s.push_back(SuperPoly::x_pow(n, m));
    for (int i = 1; i <= n; ++i) {
        s.push_back(SuperPoly::theta(n, i));
        s.push_back(SuperPoly::mono(n, {1, bit(i)}));
    }
    return s;
}

bool generation_certificate(int n, int deg) {
    static std::map<std::pair<int, int>, bool> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find({n, deg});
        if (it != cache.end()) return it->second;
    }

    std::map<Monomial, int> coord;
    Mask full = (Mask{1} << n) - 1;
    for (int m = 0; m <= deg; ++m)
        for (Mask s = 0; s <= full; ++s) coord.emplace(Monomial{m, s}, static_cast<int>(coord.size()));

    // forward-echelon insertion
    std::map<int, SparseVec> rows_by_pivot;
    auto try_insert = [&](const SuperPoly& p) -> bool {
        SparseVec v;
        for (auto& [m, c] : p.terms()) v.emplace_back(coord.at(m), c);
        svec_normalize(v);
        while (!v.empty()) {
            auto it = rows_by_pivot.find(v.front().first);
            if (it == rows_by_pivot.end()) {
                Rat inv = 1 / v.front().second;
                for (auto& [i, c] : v) c *= inv;
                rows_by_pivot.emplace(v.front().first, v);
                return true;
            }
            v = svec_axpy(v, -v.front().second, it->second);
        }
        return false;
    };

    std::vector<SuperPoly> seed = cocycle_seed_family(n);
    std::vector<SuperPoly> pool;
    for (auto& s : seed)
        if (try_insert(s)) pool.push_back(s);

    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (auto& s : seed) {
            SuperPoly br = contact_bracket(s, pool[i]);
            if (br.is_zero() || br.max_xdeg() > deg) continue;
            if (try_insert(br)) pool.push_back(br);
        }
    }
    bool ok = rows_by_pivot.size() == coord.size();
    std::lock_guard<std::mutex> lock(mtx);
    cache[{n, deg}] = ok;
    return ok;
}

// ---------------------------------------------------------------------------

static void cochain_order_bounds(const BinOp& body, int& k1, int& k2) {
    k1 = k2 = 0;
    for (auto& [k, c] : body.terms()) {
        k1 = std::max(k1, k.first.k + popcount(k.first.etas));
        k2 = std::max(k2, k.second.k + popcount(k.second.etas));
    }
}

static CocycleCheck cocycle_impl(const Cochain1& y, int dmax, bool pi_twist) {
    int n = y.n;
    int k1, k2;
    cochain_order_bounds(y.body, k1, k2);
    // each defect composition differentiates a slot coefficient at most once
    int window = std::max(dmax, std::max(k1, k2) + 2);
    if (!generation_certificate(n, window))
        throw error("generation certificate failed; enlarge the seed family");
    auto fields = monomial_fields(n, window);
    for (auto& s : cocycle_seed_family(n)) {
        ContactField xs(n, s);
        for (auto& xg : fields) {
            DiffOp d = defect_impl(y, xs, xg, pi_twist);
            if (!d.is_zero()) return {false, s, xg.gen};
        }
    }
    return {true, SuperPoly(n), SuperPoly(n)};
}

CocycleCheck is_cocycle(const Cochain1& y, int dmax) { return cocycle_impl(y, dmax, false); }
CocycleCheck is_cocycle_pi(const Cochain1& y, int dmax) { return cocycle_impl(y, dmax, true); }

CocycleCheck is_cocycle_on(const Cochain1& y, Mask avoid, int dmax) {
    int n = y.n;
    int k1, k2;
    cochain_order_bounds(y.body, k1, k2);
    int window = std::max(dmax, std::max(k1, k2) + 2);
    // the subalgebra avoiding k thetas is a copy of K(n-k)
    if (!generation_certificate(n - popcount(avoid), window))
        throw error("generation certificate failed");
    Mask full = (Mask{1} << n) - 1;
    std::vector<SuperPoly> seeds;
    for (auto& s : cocycle_seed_family(n)) {
        Mask m = s.terms().begin()->first.mask;
        if (!(m & avoid)) seeds.push_back(s);
    }
    for (auto& s : seeds) {
        ContactField xs(n, s);
        for (int m = 0; m <= window; ++m)
            for (Mask msk = 0; msk <= full; ++msk) {
                if (msk & avoid) continue;
                ContactField xg(n, SuperPoly::mono(n, {m, msk}));
                DiffOp d = delta1_defect(y, xs, xg);
                if (!d.is_zero()) return {false, s, xg.gen};
            }
    }
    return {true, SuperPoly(n), SuperPoly(n)};
}

bool vanishes_on_subalgebra(const Cochain1& y, Mask avoid) {
    int k1, k2;
    cochain_order_bounds(y.body, k1, k2);
    Mask full = (Mask{1} << y.n) - 1;
    for (int m = 0; m <= k1 + 2; ++m)
        for (Mask s = 0; s <= full; ++s) {
            if (s & avoid) continue;
            if (!y.eval_at(SuperPoly::mono(y.n, {m, s})).is_zero()) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// Coboundary solving.

std::vector<UnaryKey> unary_ansatz(int n, int max_order, int max_xdeg) {
    std::vector<UnaryKey> keys;
    Mask full = (Mask{1} << n) - 1;
    for (int a = 0; a <= max_xdeg; ++a)
        for (Mask t = 0; t <= full; ++t)
            for (Mask e = 0; e <= full; ++e)
                for (int k = 0; k <= max_order; ++k) {
                    if (k + (popcount(e) + 1) / 2 > max_order) continue;
                    keys.push_back({{a, t}, {k, e}});
                }
    return keys;
}

int unary_order(const UnaryKey& k) { return k.s.k + (popcount(k.s.etas) + 1) / 2; }

int unary_sector(const UnaryKey& k) {
    return 2 * k.s.k + popcount(k.s.etas) - popcount(k.c.mask) - 2 * k.c.xdeg;
}

DiffOp materialize_unary(int n, const Rat& lam, const Rat& mu,
                         const std::vector<UnaryKey>& keys, const SparseVec& v) {
    DiffOp a(n, lam, mu);
    for (auto& [j, q] : v) a.add_term(keys[j].s, SuperPoly::mono(n, keys[j].c, q));
    return a;
}

static std::vector<UnaryKey> parity_filtered(std::vector<UnaryKey> keys, int parity) {
    std::erase_if(keys, [&](const UnaryKey& k) {
        return ((k.c.parity() + k.s.parity()) & 1) != parity;
    });
    return keys;
}

static std::optional<DiffOp> coboundary_impl(const Cochain1& y, int max_order, bool pi_twist) {
    int n = y.n;
    auto keys = parity_filtered(unary_ansatz(n, max_order, 1), y.parity_bit());
    std::map<AnsatzKey, SparseVec> rows;
    for (std::size_t j = 0; j < keys.size(); ++j) {
        DiffOp a(n, y.lam, y.mu);
        a.add_term(keys[j].s, SuperPoly::mono(n, keys[j].c));
        Cochain1 d = pi_twist ? delta0_pi(a) : delta0(a);
        for (auto& [sp, poly] : d.body.terms())
            for (auto& [m, q] : poly.terms())
                rows[{m, sp.first, sp.second}].emplace_back(static_cast<int>(j), q);
    }
    int ncols = static_cast<int>(keys.size());
    for (auto& [sp, poly] : y.body.terms())
        for (auto& [m, q] : poly.terms())
            rows[{m, sp.first, sp.second}].emplace_back(ncols, -q);
    std::vector<SparseVec> eqs;
    eqs.reserve(rows.size());
    for (auto& [k, v] : rows) eqs.push_back(std::move(v));
    auto sol = solve_augmented(std::move(eqs), ncols);
    if (!sol) return std::nullopt;
    DiffOp a = materialize_unary(n, y.lam, y.mu, keys, *sol);
    // exact re-verification of the witness
    Cochain1 check = pi_twist ? delta0_pi(a) : delta0(a);
    if (!check.equal_terms(y)) throw error("coboundary witness failed re-verification");
    return a;
}

std::optional<DiffOp> is_coboundary(const Cochain1& y, int max_order) {
    // delta0 preserves parity sectors; a parity-mixed potential would not help
    return coboundary_impl(y, max_order, false);
}

std::optional<DiffOp> is_coboundary_pi(const Cochain1& y, int max_order) {
    return coboundary_impl(y, max_order, true);
}

std::optional<DiffOp> is_coboundary_on(const Cochain1& y, Mask avoid, int max_order) {
    int n = y.n;
    int k1, k2;
    cochain_order_bounds(y.body, k1, k2);
    int window = k1 + k2 + max_order + 3;
    auto keys = parity_filtered(unary_ansatz(n, max_order, 1), y.parity_bit());

    struct Coord {
        int g;
        Monomial m;
        Sym s;
        auto operator<=>(const Coord&) const = default;
    };
    std::map<Coord, SparseVec> rows;
    Mask full = (Mask{1} << n) - 1;
    std::vector<SuperPoly> gs;
    for (int m = 0; m <= window; ++m)
        for (Mask s = 0; s <= full; ++s)
            if (!(s & avoid)) gs.push_back(SuperPoly::mono(n, {m, s}));

    for (std::size_t j = 0; j < keys.size(); ++j) {
        DiffOp a(n, y.lam, y.mu);
        a.add_term(keys[j].s, SuperPoly::mono(n, keys[j].c));
        Cochain1 d = delta0(a);
        for (std::size_t gi = 0; gi < gs.size(); ++gi) {
            DiffOp val = d.eval_at(gs[gi]);
            for (auto& [s, poly] : val.terms())
                for (auto& [m, q] : poly.terms())
                    rows[{static_cast<int>(gi), m, s}].emplace_back(static_cast<int>(j), q);
        }
    }
    int ncols = static_cast<int>(keys.size());
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
        DiffOp val = y.eval_at(gs[gi]);
        for (auto& [s, poly] : val.terms())
            for (auto& [m, q] : poly.terms())
                rows[{static_cast<int>(gi), m, s}].emplace_back(ncols, -q);
    }
    std::vector<SparseVec> eqs;
    eqs.reserve(rows.size());
    for (auto& [k, v] : rows) eqs.push_back(std::move(v));
    auto sol = solve_augmented(std::move(eqs), ncols);
    if (!sol) return std::nullopt;
    DiffOp a = materialize_unary(n, y.lam, y.mu, keys, *sol);
    Cochain1 d = delta0(a);
    for (auto& g : gs)
        if (!d.eval_at(g).equal_terms(y.eval_at(g)))
            throw error("restricted coboundary witness failed re-verification");
    return a;
}

} // namespace ck
