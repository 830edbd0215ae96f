#pragma once

#include <string>
#include <variant>

#include "pcgbench/preconditioner.hpp"

namespace pcgbench {

/// Lower factor L with L L^T ~ A.
struct IcFactor {
    SparseMatrix lower;
    double droptol = 0.0;  ///< 0 selects the fixed tril(A) pattern
    bool modified = false;
    double fill_ratio = 0.0;  ///< nnz(L) / nnz(tril(A))
};

struct IcOptions {
    /// 0: IC(0), pattern fixed to tril(A). > 0: threshold mode, a computed
    /// subdiagonal L(i,j) is dropped when |L(i,j)| < droptol * ||A(:,j)||_1.
    double droptol = 0.0;
    /// Add each dropped value back onto both affected diagonals (rows i and j)
    /// before their square roots, so that L L^T e = A e.
    bool modified = false;
};

/// Left-looking column incomplete Cholesky. A nonpositive (or non-finite)
/// pivot yields GenerationFailure{column, value}. A must be symmetric.
std::variant<IcFactor, GenerationFailure> build_ic(const SparseMatrix& a, const IcOptions& opts);

std::string ic_label(const IcOptions& opts);

/// z = L^{-T} (L^{-1} r), charged 2 nnz(L) per application.
class TriangularPairPreconditioner final : public Preconditioner {
public:
    TriangularPairPreconditioner(SparseMatrix lower, std::string label);

    Index dim() const override { return lower_.n(); }
    void apply(std::span<const double> r, std::span<double> z) const override;
    Count apply_cost() const override { return 2 * lower_.nnz(); }
    /// sum of squared column counts of L.
    Count generation_cost() const override { return generation_cost_; }
    std::string label() const override { return label_; }

    const SparseMatrix& lower() const { return lower_; }

private:
    SparseMatrix lower_;
    SparseMatrix upper_;
    Count generation_cost_ = 0;
    std::string label_;
};

/// Builds IC and wraps it, or forwards the failure.
BuildResult build_ic_preconditioner(const SparseMatrix& a, const IcOptions& opts);

BuildResult make_ic_preconditioner(IcFactor factor, std::string label);

/// Symmetric adapter for an external LU: L' = L diag(u)^{1/2}, M = L' L'^T.
/// L must be lower triangular with a full diagonal. A nonpositive diag(U)
/// entry yields GenerationFailure.
BuildResult symmetrize_lu(const SparseMatrix& lower, std::span<const double> diag_u,
                          std::string label = "lu-sym");

}  // namespace pcgbench
