#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pcgbench/preconditioner.hpp"

namespace pcgbench {

struct PcgConfig {
    double rel_res_tol = 1e-10;
    /// 0 means 10 * n.
    Index max_iters = 0;
    Index record_every = 1;
    bool track_nrbe = true;
    /// ||A||_2 for the backward error; estimated by power iteration when <= 0.
    double two_norm_estimate = 0.0;
};

enum class SolveStatus { converged, max_iters, breakdown };

const char* to_string(SolveStatus s);

struct TraceRecord {
    Index iter = 0;
    double rel_residual = 0.0;            ///< ||b - A x_k|| / ||b||, recomputed
    double rel_residual_recursive = 0.0;  ///< same, from the updated r_k
    double nrbe = 0.0;
    Count cumulative_work = 0;
    /// ||x_k - x*||_A when x_star is supplied, else -1.
    double error_a_norm = -1.0;
};

struct SolveTrace {
    std::vector<TraceRecord> records;
    SolveStatus status = SolveStatus::max_iters;
    Index iters = 0;
    /// Work charged up to the last iteration performed (equals the work to
    /// tolerance when status is converged).
    Count work_to_tol = 0;
    Count apply_cost = 0;
    double final_rel_residual = 0.0;
    double final_error_vs_xstar = -1.0;
    Vector x;
    /// Step lengths and direction updates, one per iteration performed.
    std::vector<double> alphas;
    std::vector<double> betas;
};

/// Preconditioned conjugate gradients (Hestenes-Stiefel) from x0 = 0.
///
/// Work per iteration is 5n + nnz(A) + apply_cost, plus one startup
/// application. Convergence is tested on the recomputed residual, whose extra
/// matvec is not charged. Nonpositive p'Ap or r'z ends the solve with status
/// breakdown.
SolveTrace pcg(const SparseMatrix& a, std::span<const double> b, const Preconditioner& m,
               const PcgConfig& cfg = {},
               std::optional<std::span<const double>> x_star = std::nullopt);

/// One JSON object per record: {"iter","relres","nrbe","work"}.
void write_trace_jsonl(std::ostream& out, const SolveTrace& trace);

}  // namespace pcgbench
