#pragma once

#include <cstdint>

#include "pcgbench/sparse_matrix.hpp"

namespace pcgbench {

inline constexpr std::uint64_t kDefaultSeed = 123456789;

/// Sparse +-1 solution and its consistent right-hand side.
struct SeededProblem {
    Vector x_star;
    Vector b;
    std::uint64_t seed = kDefaultSeed;
    Index support_size = 0;
};

/// round(log2 n) with halves rounded up.
Index rounded_log2(Index n);

/// Draws rounded_log2(n) warm-up uniform vectors of length n and discards
/// them; from the next vector keeps the rounded_log2(n)+1 largest entries
/// (ties to the lowest index). Each kept position, in increasing position
/// order, takes +1 if its next uniform draw is < 0.5 and -1 otherwise.
/// b = A x_star. Throws std::invalid_argument when n < 2.
SeededProblem generate_problem(const SparseMatrix& a, std::uint64_t seed = kDefaultSeed);

enum class SddStatus { sdd_as_scaled, sdd_unscaled_only, not_sdd };

const char* to_string(SddStatus s);

struct SddClassification {
    SddStatus status = SddStatus::not_sdd;
    /// a_ii - sum_{j != i} |a_ij| on the designated matrix (scaled unless
    /// status is sdd_unscaled_only).
    Vector slack;
};

/// Row slack a_ii - sum_{j != i} |a_ij|.
Vector sdd_slack(const SparseMatrix& a);
/// Every slack >= -tol * max(1, a_ii).
bool is_sdd(const SparseMatrix& a, double tol = 1e-12);

/// Scaled dominance is checked first, then unscaled.
SddClassification classify_sdd(const SparseMatrix& unscaled, const SparseMatrix& scaled);

/// a_ii <- max(a_ii, sum_{j != i} |a_ij|); off-diagonals untouched.
SparseMatrix diagonal_lift_to_sdd(const SparseMatrix& a);

/// 2n x 2n graph Laplacian whose block solve reproduces A x = b.
struct AugmentedSystem {
    SparseMatrix laplacian;
    Index n = 0;
};

/// L = [[D + N + S/2, -(P + S/2)], [-(P + S/2), D + N + S/2]] with P/N the
/// positive/negative off-diagonals, D = diag(P e - N e), S = diag(a_ii - d_ii).
/// Throws NotSdd on negative slack unless allow_lift, which first applies
/// diagonal_lift_to_sdd.
AugmentedSystem augment_to_laplacian(const SparseMatrix& a, bool allow_lift = false);

/// b' = [b; -b]
Vector augment_rhs(std::span<const double> b);
/// x = (x'_{1:n} - x'_{n+1:2n}) / 2
Vector recover_solution(std::span<const double> x_aug);

}  // namespace pcgbench
