#pragma once

#include <functional>
#include <span>
#include <string>

#include "pcgbench/incomplete_cholesky.hpp"
#include "pcgbench/pcg.hpp"
#include "pcgbench/problem.hpp"

namespace pcgbench {

/// Connected components of the graph of a symmetric matrix, labelled by
/// order of their lowest vertex.
std::vector<Index> connected_components(const SparseMatrix& a, Index* count = nullptr);

/// Approximate pseudo-inverse of a graph Laplacian by threshold IC after
/// grounding the highest-numbered vertex of every connected component.
///
/// apply() solves the reduced system and returns 0 at grounded vertices.
/// With project set, the input and output are made orthogonal to the
/// per-component constant vectors, which keeps PCG on the singular system
/// inside range(L).
class GroundedIcPreconditioner final : public Preconditioner {
public:
    GroundedIcPreconditioner(std::vector<Index> component, std::vector<Index> grounded,
                             SparseMatrix reduced_lower, bool project, std::string label);

    Index dim() const override { return static_cast<Index>(component_.size()); }
    void apply(std::span<const double> r, std::span<double> z) const override;
    Count apply_cost() const override { return inner_.apply_cost(); }
    Count generation_cost() const override { return inner_.generation_cost(); }
    std::string label() const override { return label_; }

private:
    void project_out_constants(std::span<double> v) const;

    std::vector<Index> component_;
    std::vector<Index> reduced_index_;  ///< -1 at grounded vertices
    Index component_count_ = 0;
    TriangularPairPreconditioner inner_;
    bool project_;
    std::string label_;
};

BuildResult build_grounded_ic(const SparseMatrix& laplacian, double droptol, bool project = false);

using LaplacianInnerFactory = std::function<BuildResult(const SparseMatrix& laplacian)>;

struct LaplacianPipelineConfig {
    double droptol = 1e-4;
    /// Lift the diagonal when neither the scaled nor the unscaled matrix is SDD.
    bool allow_lift = true;
};

std::string laplacian_label(const LaplacianPipelineConfig& cfg);

/// n-dimensional operator z = (1/2) E^T M E r with E = [I; -I] and M an
/// inner preconditioner for the augmented Laplacian. Symmetric whenever M is.
///
/// The matrix handed to the augmentation follows the SDD case split: the
/// scaled matrix if it is SDD; otherwise the unscaled one diag(s) A diag(s)
/// if that is SDD (the result is then conjugated back by s); otherwise the
/// diagonally lifted scaled matrix, or NotSdd when lifting is disabled.
/// `scale` holds s_i = sqrt(a_ii) of the original matrix in the same
/// ordering as `scaled`. A null inner factory means grounded IC with
/// cfg.droptol.
BuildResult build_laplacian_pipeline(const SparseMatrix& scaled, std::span<const double> scale,
                                     const LaplacianPipelineConfig& cfg,
                                     const LaplacianInnerFactory& inner = nullptr);

/// diag(s) A diag(s), assembled so that the result stays bit-symmetric.
SparseMatrix unscale(const SparseMatrix& scaled, std::span<const double> scale);

struct AugmentedSolve {
    Vector x;
    SolveStatus status = SolveStatus::max_iters;
    Index iters = 0;
    double rel_residual = 0.0;
};

/// Solves A x = b through the augmented Laplacian with PCG (grounded IC
/// preconditioner, iterates projected off the null space every 50 iterations)
/// and recovers x. A must be SDD unless allow_lift.
AugmentedSolve solve_augmented(const SparseMatrix& a, std::span<const double> b,
                               double droptol = 1e-8, double tol = 1e-12,
                               bool allow_lift = false);

}  // namespace pcgbench
