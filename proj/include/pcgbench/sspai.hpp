#pragma once

#include <string>

#include "pcgbench/preconditioner.hpp"

namespace pcgbench {

struct SspaiConfig {
    double fill_multiplier = 1.0;  ///< default grid: 0.5, 1, 2, 3
};

/// k = max(1, round(multiplier * nnz / n)).
Index sspai_column_budget(const SparseMatrix& a, double fill_multiplier);

/// Symmetrized sparse approximate inverse K ~ A^{-1}, applied as z = K r.
///
/// Column j of the unsymmetrized inverse lives on the pattern made of j and
/// the k-1 largest-magnitude off-diagonals of A(:,j) (ties to lower index).
/// Its values minimize ||A(:,P) m - e_j||_2 over the rows touched by
/// A(:,P), via the normal equations. A block whose Gram matrix is not
/// positive definite is retried with a 1e-12 relative diagonal jitter and
/// otherwise falls back to m = e_j / a_jj. K is then replaced by (K + K^T)/2.
class SspaiPreconditioner final : public Preconditioner {
public:
    SspaiPreconditioner(SparseMatrix inverse, Count generation_cost, Index fallback_columns,
                        std::string label);

    Index dim() const override { return inverse_.n(); }
    void apply(std::span<const double> r, std::span<double> z) const override;
    Count apply_cost() const override { return inverse_.nnz(); }
    /// Dense normal-equation flops: sum_j (|R_j| |P_j|^2 + |P_j|^3).
    Count generation_cost() const override { return generation_cost_; }
    std::string label() const override { return label_; }

    const SparseMatrix& inverse() const { return inverse_; }
    Index fallback_columns() const { return fallback_columns_; }

private:
    SparseMatrix inverse_;
    Count generation_cost_;
    Index fallback_columns_;
    std::string label_;
};

std::string sspai_label(const SspaiConfig& cfg);

std::shared_ptr<const SspaiPreconditioner> build_sspai(const SparseMatrix& a,
                                                       const SspaiConfig& cfg);
/// Explicit per-column budget (used by tests to request the full pattern).
std::shared_ptr<const SspaiPreconditioner> build_sspai_with_budget(const SparseMatrix& a, Index k,
                                                                   std::string label);

}  // namespace pcgbench
