#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "pcgbench/sparse_matrix.hpp"

namespace pcgbench {

struct MatrixNorms {
    double fro = 0.0;
    double one = 0.0;  ///< max column sum
    double inf = 0.0;  ///< max row sum
};

MatrixNorms norms(const SparseMatrix& a);

struct PowerIterationOptions {
    int max_iters = 5000;
    double tol = 1e-6;
    std::uint64_t seed = 0x5eed;
};

/// y = Op x for a symmetric linear operator of dimension n.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Largest |eigenvalue| of a symmetric operator by power iteration from a
/// seeded uniform start. Stops once the normalized iterate stagnates
/// (change below tol, up to sign) or the estimate's relative change drops
/// below tol^2; otherwise returns the best estimate at the cap.
double estimate_spectral_radius(Index n, const LinearOperator& op,
                                const PowerIterationOptions& opts = {});

/// ||A||_2 for symmetric A.
double estimate_two_norm(const SparseMatrix& a, const PowerIterationOptions& opts = {});
double estimate_two_norm(const SparseMatrix& a, int max_iters, std::uint64_t seed);

/// ||I - D^{-1} A||_2, the Jacobi iteration matrix norm (A symmetric, nonzero diagonal).
double estimate_jacobi_norm(const SparseMatrix& a, const PowerIterationOptions& opts = {});

}  // namespace pcgbench
