#include "pcgbench/norms.hpp"

#include <algorithm>
#include <cmath>

#include "pcgbench/errors.hpp"
#include "pcgbench/rng.hpp"

namespace pcgbench {

MatrixNorms norms(const SparseMatrix& a)
{
    MatrixNorms out;
    Vector col_sums(static_cast<std::size_t>(a.n()), 0.0);
    double fro2 = 0.0;
    for (Index i = 0; i < a.n(); ++i) {
        double row_sum = 0.0;
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const double v = std::abs(vals[k]);
            row_sum += v;
            col_sums[cols[k]] += v;
            fro2 += v * v;
        }
        out.inf = std::max(out.inf, row_sum);
    }
    out.fro = std::sqrt(fro2);
    for (const double c : col_sums) {
        out.one = std::max(out.one, c);
    }
    return out;
}

double estimate_spectral_radius(Index n, const LinearOperator& op, const PowerIterationOptions& opts)
{
    if (n == 0) {
        return 0.0;
    }
    Xoshiro256pp rng(opts.seed);
    Vector v(static_cast<std::size_t>(n));
    for (auto& x : v) {
        x = rng.uniform() + 0.5;
    }
    double nv = norm2(v);
    for (auto& x : v) {
        x /= nv;
    }

    Vector w(v.size());
    double estimate = 0.0;
    for (int it = 0; it < opts.max_iters; ++it) {
        op(v, w);
        const double nw = norm2(w);
        if (nw == 0.0) {
            return estimate;
        }
        const double prev = estimate;
        estimate = nw;
        double diff_same = 0.0;
        double diff_flip = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double wi = w[i] / nw;
            diff_same += (wi - v[i]) * (wi - v[i]);
            diff_flip += (wi + v[i]) * (wi + v[i]);
            v[i] = wi;
        }
        const double vector_change = std::sqrt(std::min(diff_same, diff_flip));
        if (it > 0 && (vector_change <= opts.tol ||
                       std::abs(estimate - prev) <= opts.tol * opts.tol * estimate)) {
            break;
        }
    }
    return estimate;
}

double estimate_two_norm(const SparseMatrix& a, const PowerIterationOptions& opts)
{
    return estimate_spectral_radius(
        a.n(), [&a](std::span<const double> x, std::span<double> y) { matvec(a, x, y); }, opts);
}

double estimate_two_norm(const SparseMatrix& a, int max_iters, std::uint64_t seed)
{
    PowerIterationOptions opts;
    opts.max_iters = max_iters;
    opts.seed = seed;
    return estimate_two_norm(a, opts);
}

double estimate_jacobi_norm(const SparseMatrix& a, const PowerIterationOptions& opts)
{
    // I - D^{-1/2} A D^{-1/2} is similar to I - D^{-1} A and symmetric.
    Vector inv_sqrt = a.diagonal_values();
    for (auto& d : inv_sqrt) {
        if (!(d > 0.0)) {
            throw NotSpdCandidate("Jacobi norm needs a positive diagonal");
        }
        d = 1.0 / std::sqrt(d);
    }
    Vector tmp(inv_sqrt.size());
    return estimate_spectral_radius(
        a.n(),
        [&](std::span<const double> x, std::span<double> y) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                tmp[i] = inv_sqrt[i] * x[i];
            }
            matvec(a, tmp, y);
            for (std::size_t i = 0; i < x.size(); ++i) {
                y[i] = x[i] - inv_sqrt[i] * y[i];
            }
        },
        opts);
}

}  // namespace pcgbench
