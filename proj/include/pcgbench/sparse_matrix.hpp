#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pcgbench {

using Index = std::int64_t;
/// Operation counts in the work model. Always exact integers.
using Count = std::int64_t;
using Vector = std::vector<double>;

struct Triplet {
    Index row;
    Index col;
    double value;
};

/// Square compressed-row sparse matrix.
///
/// Rows are sorted by column, duplicates are summed and explicit zeros are
/// dropped at construction, so nnz() is exactly the number of stored
/// nonzeros that the work model charges for a matvec. Symmetric matrices
/// carry both triangles. The symmetric() flag is computed, not asserted:
/// it is set iff value(i,j) == value(j,i) bit-for-bit for every entry.
class SparseMatrix {
public:
    SparseMatrix() = default;

    static SparseMatrix from_triplets(Index n, std::vector<Triplet> entries);

    /// Takes ownership of CSR arrays. Rows must already be sorted with no
    /// duplicate columns; zeros are removed.
    static SparseMatrix from_csr(Index n, std::vector<Index> row_ptr,
                                 std::vector<Index> col_idx,
                                 std::vector<double> values);

    static SparseMatrix identity(Index n);
    static SparseMatrix diagonal(std::span<const double> d);

    Index n() const { return n_; }
    Index nnz() const { return static_cast<Index>(values_.size()); }
    bool symmetric() const { return symmetric_; }

    std::span<const Index> row_ptr() const { return row_ptr_; }
    std::span<const Index> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }

    std::span<const Index> row_cols(Index i) const {
        return {col_idx_.data() + row_ptr_[i],
                static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
    }
    std::span<const double> row_values(Index i) const {
        return {values_.data() + row_ptr_[i],
                static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
    }

    /// Stored value or 0.
    double at(Index i, Index j) const;
    bool contains(Index i, Index j) const;

    Vector diagonal_values() const;

    SparseMatrix transpose() const;
    /// Lower triangle including the diagonal.
    SparseMatrix lower() const;
    /// Upper triangle including the diagonal.
    SparseMatrix upper() const;

    std::vector<Triplet> triplets() const;

    /// Exact structural and value equality.
    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

private:
    void finalize();

    Index n_ = 0;
    std::vector<Index> row_ptr_{0};
    std::vector<Index> col_idx_;
    std::vector<double> values_;
    bool symmetric_ = true;
};

/// y = A x. Charged as nnz(A) multiply-adds by callers.
Vector matvec(const SparseMatrix& a, std::span<const double> x);
void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

/// Solves L y = b for lower-triangular L (diagonal present and nonzero).
Vector lower_tri_solve(const SparseMatrix& l, std::span<const double> b);
void lower_tri_solve(const SparseMatrix& l, std::span<const double> b, std::span<double> y);

/// Solves U y = b for upper-triangular U (diagonal present and nonzero).
Vector upper_tri_solve(const SparseMatrix& u, std::span<const double> b);
void upper_tri_solve(const SparseMatrix& u, std::span<const double> b, std::span<double> y);

/// Largest |i - j| over stored entries.
Index bandwidth(const SparseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace pcgbench
