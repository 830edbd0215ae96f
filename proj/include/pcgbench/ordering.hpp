#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pcgbench/sparse_matrix.hpp"

namespace pcgbench {

/// Symmetric permutation. perm maps new index -> old index; inv is its inverse.
class Permutation {
public:
    Permutation() = default;
    /// Validates that perm is a bijection on {0..n-1}.
    Permutation(std::vector<Index> perm, std::string label);

    static Permutation identity(Index n, std::string label = "natural");

    Index size() const { return static_cast<Index>(perm_.size()); }
    const std::vector<Index>& perm() const { return perm_; }
    const std::vector<Index>& inv() const { return inv_; }
    const std::string& label() const { return label_; }

    /// The inverse permutation as a Permutation (label gets a "^-1" suffix).
    Permutation inverse() const;

private:
    std::vector<Index> perm_;
    std::vector<Index> inv_;
    std::string label_;
};

/// Reverse Cuthill-McKee. Components are processed in order of their lowest
/// unvisited vertex; each starts from a pseudo-peripheral vertex found by
/// repeated BFS level maximization; neighbors are queued by (degree, index).
Permutation rcm_order(const SparseMatrix& a);

/// Reads n integers, one per line. 0- or 1-based, detected from the range.
Permutation load_permutation(const std::filesystem::path& path, Index n,
                             std::string label = "amd");
void save_permutation(const std::filesystem::path& path, const Permutation& p);

/// B = P A P^T, i.e. B(i,j) = A(perm[i], perm[j]).
SparseMatrix permute_symmetric(const SparseMatrix& a, const Permutation& p);

/// x_new[i] = x_old[perm[i]]
Vector permute_vector(std::span<const double> x, const Permutation& p);
/// Inverse of permute_vector.
Vector unpermute_vector(std::span<const double> x, const Permutation& p);

}  // namespace pcgbench
