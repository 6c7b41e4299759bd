#include "contactk/exactla.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace ck {

void svec_normalize(SparseVec& v) {
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
    SparseVec out;
    out.reserve(v.size());
    for (auto& [i, c] : v) {
        if (!out.empty() && out.back().first == i) out.back().second += c;
        else out.emplace_back(i, c);
        if (!out.empty() && out.back().second == 0) out.pop_back();
    }
    v = std::move(out);
}

SparseVec svec_axpy(const SparseVec& y, const Rat& c, const SparseVec& x) {
    SparseVec out;
    out.reserve(y.size() + x.size());
    std::size_t i = 0, j = 0;
    while (i < y.size() || j < x.size()) {
        if (j >= x.size() || (i < y.size() && y[i].first < x[j].first)) {
            out.push_back(y[i++]);
        } else if (i >= y.size() || x[j].first < y[i].first) {
            Rat v = c * x[j].second;
            if (v != 0) out.emplace_back(x[j].first, std::move(v));
            ++j;
        } else {
            Rat v = y[i].second + c * x[j].second;
            if (v != 0) out.emplace_back(y[i].first, std::move(v));
            ++i, ++j;
        }
    }
    return out;
}

Rat svec_get(const SparseVec& v, int i) {
    auto it = std::lower_bound(v.begin(), v.end(), i,
                               [](const auto& p, int k) { return p.first < k; });
    return (it != v.end() && it->first == i) ? it->second : Rat(0);
}

SparseVec svec_canonical(SparseVec v) {
    if (v.empty()) return v;
    mpz_class den_lcm = 1, num_gcd = 0;
    for (auto& [i, c] : v) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    for (auto& [i, c] : v) {
        mpz_class num = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), num.get_mpz_t());
    }
    Rat scale(den_lcm, num_gcd);
    scale.canonicalize();
    if (v.front().second < 0) scale = -scale;
    for (auto& [i, c] : v) c *= scale;
    return v;
}

void RatMatrix::add_row(SparseVec r) {
    svec_normalize(r);
    rows.push_back(std::move(r));
}

void RatMatrix::set(int r, int c, const Rat& v) {
    while (nrows() <= r) rows.emplace_back();
    auto& row = rows[r];
    for (auto& [i, x] : row)
        if (i == c) {
            x = v;
            return;
        }
    if (v != 0) {
        row.emplace_back(c, v);
        svec_normalize(row);
    }
}

// ---------------------------------------------------------------------------
// Streaming full-Jordan elimination. Maintained invariant: every stored row
// has coefficient 1 at its own pivot column and no entries at other pivot
// columns, so each row's fill is bounded by 1 + (number of non-pivot columns).

namespace {

std::size_t rat_size(const Rat& r) {
    return mpz_size(r.get_num().get_mpz_t()) + mpz_size(r.get_den().get_mpz_t());
}

class Eliminator {
public:
    Eliminator(int ncols, int avoid_col) : ncols_(ncols), avoid_(avoid_col) {}

    // Returns false when the row reduced to an avoid-only equation (inconsistency).
    bool add_row(SparseVec row) {
        svec_normalize(row);
        for (;;) {
            // reduce against current pivots; introduced entries are never at
            // pivot columns, so one restartable scan suffices
            bool reduced = false;
            for (auto& [c, v] : row) {
                auto it = pivot_row_.find(c);
                if (it != pivot_row_.end()) {
                    row = svec_axpy(row, -v, rows_[it->second]);
                    reduced = true;
                    break;
                }
            }
            if (!reduced) break;
        }
        if (row.empty()) return true;
        int pcol = -1;
        std::size_t psize = 0;
        for (auto& [c, v] : row) {
            if (c == avoid_) continue;
            std::size_t s = rat_size(v);
            if (pcol < 0 || s < psize) {
                pcol = c;
                psize = s;
            }
        }
        if (pcol < 0) return false; // only the avoided column survived
        Rat inv = 1 / svec_get(row, pcol);
        for (auto& [c, v] : row) v *= inv;
        // eliminate the new pivot column from every stored row containing it
        auto holders = col_rows_.find(pcol);
        if (holders != col_rows_.end()) {
            for (int rid : std::set<int>(holders->second)) {
                Rat f = -svec_get(rows_[rid], pcol);
                if (f == 0) continue;
                unindex(rid);
                rows_[rid] = svec_axpy(rows_[rid], f, row);
                index(rid);
            }
        }
        int rid = static_cast<int>(rows_.size());
        rows_.push_back(std::move(row));
        index(rid);
        pivot_row_.emplace(pcol, rid);
        pivot_col_.push_back(pcol);
        return true;
    }

    int rank() const { return static_cast<int>(rows_.size()); }
    int ncols() const { return ncols_; }

    Rref result() const {
        // deterministic order: ascending pivot column
        std::vector<std::pair<int, int>> order;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            order.emplace_back(pivot_col_[i], static_cast<int>(i));
        std::sort(order.begin(), order.end());
        Rref out;
        out.cols = ncols_;
        for (auto& [c, i] : order) {
            out.rows.push_back(rows_[i]);
            out.pivot_col.push_back(c);
        }
        return out;
    }

private:
    void index(int rid) {
        for (auto& [c, v] : rows_[rid]) col_rows_[c].insert(rid);
    }
    void unindex(int rid) {
        for (auto& [c, v] : rows_[rid]) {
            auto it = col_rows_.find(c);
            if (it != col_rows_.end()) it->second.erase(rid);
        }
    }

    int ncols_;
    int avoid_;
    std::vector<SparseVec> rows_;
    std::vector<int> pivot_col_;
    std::map<int, int> pivot_row_;                  // pivot col -> row id
    std::unordered_map<int, std::set<int>> col_rows_; // col -> rows touching it
};

Subspace nullspace_of(const Rref& e) {
    std::vector<char> is_pivot(e.cols, 0);
    for (int c : e.pivot_col) is_pivot[c] = 1;
    Subspace s;
    s.ambient = e.cols;
    for (int f = 0; f < e.cols; ++f) {
        if (is_pivot[f]) continue;
        SparseVec v;
        v.emplace_back(f, Rat(1));
        for (std::size_t r = 0; r < e.rows.size(); ++r) {
            Rat c = svec_get(e.rows[r], f);
            if (c != 0) v.emplace_back(e.pivot_col[r], -c);
        }
        svec_normalize(v);
        s.basis.push_back(svec_canonical(std::move(v)));
    }
    return s;
}

} // namespace

struct NullAccumulator::EliminatorState {
    explicit EliminatorState(int n) : e(n, -1) {}
    Eliminator e;
};

Rref rref(std::vector<SparseVec> rows, int ncols) {
    Eliminator e(ncols, -1);
    for (auto& r : rows) e.add_row(std::move(r));
    return e.result();
}

int rank(const RatMatrix& m) {
    Eliminator e(m.cols, -1);
    for (auto& r : m.rows) e.add_row(r);
    return e.rank();
}

Subspace nullspace(const RatMatrix& m) {
    return nullspace_of(rref(m.rows, m.cols));
}

int span_rank(const std::vector<SparseVec>& vecs, int ambient) {
    Eliminator e(ambient, -1);
    for (auto& v : vecs) e.add_row(v);
    return e.rank();
}

bool in_span(const std::vector<SparseVec>& span_vecs, int ambient, const SparseVec& v) {
    Eliminator e(ambient, -1);
    for (auto& w : span_vecs) e.add_row(w);
    int r0 = e.rank();
    e.add_row(v);
    return e.rank() == r0;
}

int quotient_dim(const Subspace& z, const Subspace& b) {
    if (z.ambient != b.ambient) throw error("quotient: ambient dimension mismatch");
    int rz = span_rank(z.basis, z.ambient);
    int rb = span_rank(b.basis, b.ambient);
    Eliminator e(z.ambient, -1);
    for (auto& v : z.basis) e.add_row(v);
    for (auto& v : b.basis) e.add_row(v);
    if (e.rank() != rz) throw error("quotient: B is not contained in Z");
    return rz - rb;
}

std::optional<SparseVec> solve_augmented(std::vector<SparseVec> rows, int cols) {
    // Rows encode equations sum a_c x_c + const = 0 with the constant stored at
    // column index `cols`. Solution with all free variables zero: x_p = -const.
    Eliminator e(cols + 1, cols);
    for (auto& r : rows)
        if (!e.add_row(std::move(r))) return std::nullopt;
    Rref red = e.result();
    SparseVec sol;
    for (std::size_t r = 0; r < red.rows.size(); ++r) {
        Rat v = svec_get(red.rows[r], cols);
        if (v != 0) sol.emplace_back(red.pivot_col[r], -v);
    }
    svec_normalize(sol);
    return sol;
}

void NullAccumulator::constrain(const std::vector<SparseVec>& rows) {
    if (!elim_) elim_ = std::make_shared<EliminatorState>(ncols_);
    for (auto& r : rows) elim_->e.add_row(r);
}

int NullAccumulator::dim() const {
    if (!elim_) return ncols_;
    return ncols_ - elim_->e.rank();
}

std::vector<SparseVec> NullAccumulator::basis() const {
    if (!elim_) {
        std::vector<SparseVec> b;
        b.reserve(ncols_);
        for (int i = 0; i < ncols_; ++i) b.push_back({{i, Rat(1)}});
        return b;
    }
    return nullspace_of(elim_->e.result()).basis;
}

} // namespace ck
