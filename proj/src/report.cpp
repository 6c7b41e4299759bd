#include "contactk/report.hpp"

#include "contactk/cohomology.hpp"
#include "contactk/invariants.hpp"
#include "contactk/version.hpp"

#include <sys/file.h>
#include <sys/stat.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ck {

std::string report_bytes(const Json& report) { return report.dump(2) + "\n"; }

ReportCache::ReportCache(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) return;
    if (mkdir(dir_.c_str(), 0755) != 0 && errno != EEXIST) {
        std::cerr << "[cache] warning: cannot create " << dir_ << "; caching disabled\n";
        dir_.clear();
    }
}

namespace {

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct FileLock {
    int fd = -1;
    explicit FileLock(const std::string& path) {
        fd = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd >= 0) ::flock(fd, LOCK_EX);
    }
    ~FileLock() {
        if (fd >= 0) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
        }
    }
};

} // namespace

std::optional<std::string> ReportCache::load(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    std::string base = dir_ + "/" + fnv1a_hex(key);
    FileLock lock(base + ".lock");
    std::ifstream in(base + ".json");
    if (!in) return std::nullopt;
    Json entry = Json::parse(in, nullptr, false);
    if (entry.is_discarded() || !entry.is_object() || !entry.contains("engine_version") ||
        !entry.contains("key") || !entry.contains("report")) {
        std::cerr << "[cache] warning: corrupted entry ignored\n";
        return std::nullopt;
    }
    if (entry["engine_version"] != engine_version || entry["key"] != key) return std::nullopt;
    return entry["report"].get<std::string>();
}

void ReportCache::store(const std::string& key, const std::string& bytes) const {
    if (!enabled()) return;
    std::string base = dir_ + "/" + fnv1a_hex(key);
    FileLock lock(base + ".lock");
    Json entry;
    entry["engine_version"] = engine_version;
    entry["key"] = key;
    entry["report"] = bytes;
    std::ofstream out(base + ".json");
    if (!out) {
        std::cerr << "[cache] warning: cannot write cache entry\n";
        return;
    }
    out << entry.dump(2) << "\n";
}

std::string cache_key(const Json& report) {
    Json key;
    key["command"] = report.at("command");
    key["params"] = report.at("params");
    return key.dump();
}

// ---------------------------------------------------------------------------

namespace {

Json base_report(const std::string& command) {
    Json r;
    r["command"] = command;
    r["engine_version"] = engine_version;
    return r;
}

} // namespace

Json report_search_invariant(int n, const Rat& lam, const Rat& mu, const Rat& nu, int max_order,
                             bool grading_filter) {
    Json r = base_report("search-invariant");
    r["params"] = {{"n", n},
                   {"lambda", rat_str(lam)},
                   {"mu", rat_str(mu)},
                   {"nu", rat_str(nu)},
                   {"max_order", max_order},
                   {"grading_filter", grading_filter}};
    SearchResult s = search_invariant(n, lam, mu, nu, max_order, grading_filter);
    Json basis = Json::array();
    for (auto& t : s.basis) basis.push_back(format_binop(t));
    r["result"] = {{"dim", static_cast<int>(s.basis.size())},
                   {"basis", basis},
                   {"ansatz_size", static_cast<int>(s.ansatz.size())},
                   {"matches_catalog", s.matches_catalog}};
    r["truncation"] = {{"max_order", max_order}, {"generator_dmax", 5}};
    r["verified"] = s.verified;
    return r;
}

Json report_h1(int n, const Rat& lam, const Rat& mu, int max_order, int relative_i,
               bool all_sectors) {
    Json r = base_report(relative_i ? "relative-h1" : "h1-dim");
    r["params"] = {{"n", n},
                   {"lambda", rat_str(lam)},
                   {"mu", rat_str(mu)},
                   {"max_order", max_order}};
    if (relative_i) r["params"]["relative"] = relative_i;
    H1Options opts;
    opts.all_sectors = all_sectors;
    H1Report h = relative_i ? relative_h1_dim(n, relative_i, lam, mu, max_order, opts)
                            : h1_dim(n, lam, mu, max_order, opts);
    Json reps = Json::array();
    for (auto& s : h.representatives) reps.push_back(s);
    Json matched = Json::array();
    for (auto& s : h.matched_catalog) matched.push_back(s);
    r["result"] = {{"z_dim", h.z_dim},
                   {"b_dim", h.b_dim},
                   {"h1_dim", h.h1_dim},
                   {"representatives", reps},
                   {"matched_catalog", matched},
                   {"catalog_covers", h.catalog_covers}};
    if (!h.note.empty()) r["result"]["note"] = h.note;
    r["truncation"] = {{"max_order", h.max_order}, {"generator_dmax", h.generator_dmax}};
    r["verified"] = h.verified;
    return r;
}

Json report_catalog(int n, const std::optional<Rat>& lam, const std::optional<Rat>& mu,
                    const std::optional<Rat>& nu) {
    Json r = base_report("catalog");
    r["params"] = {{"n", n}};
    Json entries = Json::array();
    if (lam && mu && nu) {
        r["params"]["lambda"] = rat_str(*lam);
        r["params"]["mu"] = rat_str(*mu);
        r["params"]["nu"] = rat_str(*nu);
        for (auto& e : catalog(n, *lam, *mu, *nu))
            entries.push_back({{"name", e.name},
                               {"operator", format_binop(e.op)},
                               {"provenance", e.provenance}});
    } else {
        for (auto& name : catalog_names(n)) entries.push_back({{"name", name}});
    }
    r["result"] = {{"entries", entries}};
    r["truncation"] = Json::object();
    r["verified"] = true;
    return r;
}

Json report_list_cocycles(int n) {
    Json r = base_report("list-cocycles");
    r["params"] = {{"n", n}};
    Json entries = Json::array();
    for (auto& e : cocycle_catalog(n))
        entries.push_back({{"name", e.name},
                           {"mu_minus_lambda", rat_str(e.mu_minus_lambda)},
                           {"order", e.order},
                           {"provenance", e.provenance}});
    r["result"] = {{"entries", entries}};
    r["truncation"] = Json::object();
    r["verified"] = true;
    return r;
}

Json report_verify_cocycle(const std::string& name, int n, const Rat& lam, int dmax) {
    Json r = base_report("verify-cocycle");
    r["params"] = {{"name", name}, {"n", n}, {"lambda", rat_str(lam)}, {"dmax", dmax}};
    auto y = build_cocycle(name, n, lam);
    if (!y) {
        r["result"] = {{"applicable", false}};
        r["truncation"] = Json::object();
        r["verified"] = false;
        return r;
    }
    auto c = is_cocycle(*y, dmax);
    r["result"] = {{"applicable", true},
                   {"is_cocycle", c.ok},
                   {"cochain", format_binop(y->body)},
                   {"parity", y->parity_bit() ? "odd" : "even"}};
    if (!c.ok) {
        r["result"]["witness_f"] = format_poly(c.witness_f);
        r["result"]["witness_g"] = format_poly(c.witness_g);
    }
    r["truncation"] = {{"generator_dmax", dmax}};
    r["verified"] = c.ok;
    return r;
}

Json report_verify_bracket(int n, int dmax) {
    Json r = base_report("verify-bracket");
    r["params"] = {{"n", n}, {"dmax", dmax}};
    bool antisym = true, jacobi = true, compat = true;
    auto fields = monomial_fields(n, 2);
    for (auto& xf : fields)
        for (auto& xg : fields) {
            SuperPoly fg = contact_bracket(xf.gen, xg.gen);
            SuperPoly gf = contact_bracket(xg.gen, xf.gen);
            SuperPoly rhs = (xf.parity_bit() && xg.parity_bit()) ? gf : -gf;
            if (!(fg == rhs)) antisym = false;
        }
    auto small = monomial_fields(n, 1);
    for (auto& a : small)
        for (auto& b : small)
            for (auto& c : small) {
                SuperPoly j1 = contact_bracket(a.gen, contact_bracket(b.gen, c.gen));
                SuperPoly j2 = contact_bracket(b.gen, contact_bracket(c.gen, a.gen));
                SuperPoly j3 = contact_bracket(c.gen, contact_bracket(a.gen, b.gen));
                if (a.parity_bit() & c.parity_bit()) j1 = -j1;
                if (b.parity_bit() & a.parity_bit()) j2 = -j2;
                if (c.parity_bit() & b.parity_bit()) j3 = -j3;
                if (!(j1 + j2 + j3).is_zero()) jacobi = false;
            }
    for (auto& xf : generators(n, dmax))
        for (auto& xg : generators(n, dmax)) {
            DiffOp lhs = vector_field_of(bracket_as_fields(xf, xg));
            DiffOp rhs = super_commutator(vector_field_of(xf), vector_field_of(xg));
            if (!lhs.equal_terms(rhs)) compat = false;
        }
    r["result"] = {{"antisymmetry", antisym}, {"jacobi", jacobi}, {"operator_compat", compat}};
    r["truncation"] = {{"generator_dmax", dmax}};
    r["verified"] = antisym && jacobi && compat;
    return r;
}

Json report_verify_action(int n, int dmax) {
    Json r = base_report("verify-action");
    r["params"] = {{"n", n}, {"dmax", dmax}};
    std::vector<Rat> weights = {rat(-1), rat(-1, 2), rat(0), rat(1, 2), rat(1), rat(3, 2)};
    bool ok = true;
    auto gens = generators(n, dmax);
    for (auto& w : weights)
        for (auto& xf : gens)
            for (auto& xg : gens) {
                DiffOp comm = super_commutator(density_action_op(xf.gen, w),
                                               density_action_op(xg.gen, w));
                if (!comm.equal_terms(density_action_op(contact_bracket(xf.gen, xg.gen), w)))
                    ok = false;
            }
    r["result"] = {{"module_law", ok}, {"weights", static_cast<int>(weights.size())}};
    r["truncation"] = {{"generator_dmax", dmax}};
    r["verified"] = ok;
    return r;
}

Json report_verify_poisson(int n, const std::vector<Rat>& weights) {
    Json r = base_report("verify-poisson");
    Json ws = Json::array();
    for (auto& w : weights) ws.push_back(rat_str(w));
    r["params"] = {{"n", n}, {"weights", ws}};
    PoissonReport p = verify_poisson_laws(n, weights, 2);
    r["result"] = {{"antisymmetry", p.antisymmetry}, {"jacobi", p.jacobi}, {"leibniz", p.leibniz}};
    r["truncation"] = Json::object();
    r["verified"] = p.ok();
    return r;
}

} // namespace ck
