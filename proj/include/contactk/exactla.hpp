#pragma once

#include "rat.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace ck {

// Sparse vector: (index, value) pairs, sorted by index, no zeros.
using SparseVec = std::vector<std::pair<int, Rat>>;

void svec_normalize(SparseVec& v);
SparseVec svec_axpy(const SparseVec& y, const Rat& c, const SparseVec& x); // y + c*x
Rat svec_get(const SparseVec& v, int i);
// Scale to a primitive integer vector with positive leading entry; canonical
// representative of the ray, used for deterministic bases and reports.
SparseVec svec_canonical(SparseVec v);

// Exact sparse rational matrix, row major.
struct RatMatrix {
    int cols = 0;
    std::vector<SparseVec> rows;

    RatMatrix() = default;
    explicit RatMatrix(int ncols) : cols(ncols) {}
    void add_row(SparseVec r);
    void set(int r, int c, const Rat& v);
    int nrows() const { return static_cast<int>(rows.size()); }
};

// Reduced row echelon form; pivot entries are 1 and eliminated from all other
// rows. Pivoting prefers short rows and small entries; the output is
// deterministic and correctness never depends on the pivot rule.
struct Rref {
    int cols = 0;
    std::vector<SparseVec> rows;
    std::vector<int> pivot_col; // per stored row
};

Rref rref(std::vector<SparseVec> rows, int ncols);

struct Subspace {
    int ambient = 0;
    std::vector<SparseVec> basis;
    int dim() const { return static_cast<int>(basis.size()); }
};

int rank(const RatMatrix& m);
Subspace nullspace(const RatMatrix& m);

// dim Z - dim span(B); throws if span(B) is not contained in span(Z).
int quotient_dim(const Subspace& z, const Subspace& b);

// Rank of the span of a vector list (basis-independent).
int span_rank(const std::vector<SparseVec>& vecs, int ambient);
bool in_span(const std::vector<SparseVec>& span_vecs, int ambient, const SparseVec& v);

// Solve M x = rhs; rows given augmented (rhs stored at column index `cols`).
// Returns one exact solution or nullopt if inconsistent.
std::optional<SparseVec> solve_augmented(std::vector<SparseVec> rows, int cols);

// Incremental nullspace: stream constraint rows into a running full-Jordan
// elimination; the basis is extracted on demand. Row fill stays bounded by
// 1 + nullity, which keeps large systems with small kernels cheap.
class NullAccumulator {
public:
    explicit NullAccumulator(int ncols) : ncols_(ncols) {}

    int dim() const;
    // Constraint rows are over the original coordinates.
    void constrain(const std::vector<SparseVec>& rows);
    std::vector<SparseVec> basis() const; // columns over original coordinates

private:
    struct EliminatorState;
    int ncols_;
    std::shared_ptr<EliminatorState> elim_;
};

} // namespace ck
