#pragma once

// Independent dense reference implementations used by the unit and
// acceptance tests. Nothing here calls into the sparse kernels under test
// except for format conversion.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pcgbench/rng.hpp"
#include "pcgbench/sparse_matrix.hpp"

namespace oracle {

using pcgbench::Index;
using pcgbench::SparseMatrix;
using pcgbench::Triplet;
using pcgbench::Vector;

inline Eigen::MatrixXd dense(const SparseMatrix& a)
{
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.n(), a.n());
    for (Index i = 0; i < a.n(); ++i) {
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            d(i, cols[k]) += vals[k];
        }
    }
    return d;
}

inline SparseMatrix sparse(const Eigen::MatrixXd& d)
{
    std::vector<Triplet> t;
    for (Index i = 0; i < d.rows(); ++i) {
        for (Index j = 0; j < d.cols(); ++j) {
            if (d(i, j) != 0.0) {
                t.push_back({i, j, d(i, j)});
            }
        }
    }
    return SparseMatrix::from_triplets(d.rows(), std::move(t));
}

inline Eigen::VectorXd to_eigen(const Vector& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Vector to_std(const Eigen::VectorXd& v)
{
    return Vector(v.data(), v.data() + v.size());
}

inline Vector random_vector(Index n, pcgbench::Xoshiro256pp& rng)
{
    Vector v(static_cast<std::size_t>(n));
    for (auto& x : v) {
        x = 2.0 * rng.uniform() - 1.0;
    }
    return v;
}

/// Dense SPD: B^T B + shift I with B uniform in [-1, 1].
inline Eigen::MatrixXd random_dense_spd(Index n, std::uint64_t seed, double shift = 0.5)
{
    pcgbench::Xoshiro256pp rng(seed);
    Eigen::MatrixXd b(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            b(i, j) = 2.0 * rng.uniform() - 1.0;
        }
    }
    Eigen::MatrixXd a = b.transpose() * b;
    a.diagonal().array() += shift;
    // force exact symmetry
    return 0.5 * (a + a.transpose());
}

/// Sparse SPD that is generally not diagonally dominant: B^T B + shift I
/// where B keeps the identity plus random entries with probability density.
inline Eigen::MatrixXd random_sparse_spd(Index n, double density, std::uint64_t seed,
                                         double shift = 0.1)
{
    pcgbench::Xoshiro256pp rng(seed);
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (i != j && rng.uniform() < density) {
                b(i, j) = 2.0 * rng.uniform() - 1.0;
            }
        }
    }
    Eigen::MatrixXd a = b.transpose() * b;
    a.diagonal().array() += shift;
    return 0.5 * (a + a.transpose());
}

/// Symmetric random pattern with full diagonal (values irrelevant: 1 off, n on diagonal).
inline SparseMatrix random_pattern(Index n, double density, std::uint64_t seed)
{
    pcgbench::Xoshiro256pp rng(seed);
    std::vector<Triplet> t;
    for (Index i = 0; i < n; ++i) {
        t.push_back({i, i, static_cast<double>(n)});
        for (Index j = i + 1; j < n; ++j) {
            if (rng.uniform() < density) {
                t.push_back({i, j, -1.0});
                t.push_back({j, i, -1.0});
            }
        }
    }
    return SparseMatrix::from_triplets(n, std::move(t));
}

/// Structural Cholesky by dense boolean elimination: column counts of L
/// (diagonal included).
inline std::vector<std::int64_t> boolean_elimination_counts(const SparseMatrix& a)
{
    const Index n = a.n();
    std::vector<std::vector<char>> s(n, std::vector<char>(n, 0));
    for (Index i = 0; i < n; ++i) {
        s[i][i] = 1;
        for (const Index j : a.row_cols(i)) {
            s[i][j] = 1;
        }
    }
    std::vector<std::int64_t> counts(n, 0);
    for (Index k = 0; k < n; ++k) {
        std::vector<Index> below;
        for (Index i = k + 1; i < n; ++i) {
            if (s[i][k]) {
                below.push_back(i);
            }
        }
        counts[k] = static_cast<std::int64_t>(below.size()) + 1;
        for (const Index i : below) {
            for (const Index j : below) {
                s[i][j] = 1;
            }
        }
    }
    return counts;
}

/// Right-looking dense Cholesky restricted to the structural pattern,
/// counting one operation per sqrt or division and two per lower-triangle
/// update (multiply and subtract). Returns the count.
inline std::int64_t instrumented_factor_flops(const SparseMatrix& a)
{
    const Index n = a.n();
    Eigen::MatrixXd d = dense(a);
    std::vector<std::vector<char>> s(n, std::vector<char>(n, 0));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            s[i][j] = d(i, j) != 0.0 || i == j;
        }
    }
    std::int64_t flops = 0;
    for (Index k = 0; k < n; ++k) {
        d(k, k) = std::sqrt(d(k, k));
        ++flops;
        for (Index i = k + 1; i < n; ++i) {
            if (s[i][k]) {
                d(i, k) /= d(k, k);
                ++flops;
            }
        }
        for (Index j = k + 1; j < n; ++j) {
            if (!s[j][k]) {
                continue;
            }
            for (Index i = j; i < n; ++i) {
                if (s[i][k]) {
                    d(i, j) -= d(i, k) * d(j, k);
                    s[i][j] = 1;
                    s[j][i] = 1;
                    flops += 2;
                }
            }
        }
    }
    return flops;
}

struct CgResult {
    int iters = 0;
    bool converged = false;
    std::vector<double> alphas;
    std::vector<double> betas;
    Eigen::VectorXd x;
};

/// Textbook unpreconditioned CG in dense arithmetic, stopping when the true
/// relative residual ||b - A x|| / ||b|| reaches tol. Plain loops in
/// ascending index order, so the rounding matches any kernel that sums rows
/// and inner products left to right.
inline CgResult textbook_cg(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol, int max_iters)
{
    const Index n = b.size();
    auto mul = [&](const std::vector<double>& v) {
        std::vector<double> out(n, 0.0);
        for (Index i = 0; i < n; ++i) {
            double s = 0.0;
            for (Index j = 0; j < n; ++j) {
                if (a(i, j) != 0.0) {
                    s += a(i, j) * v[j];
                }
            }
            out[i] = s;
        }
        return out;
    };
    auto inner = [n](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (Index i = 0; i < n; ++i) {
            s += u[i] * v[i];
        }
        return s;
    };
    CgResult out;
    std::vector<double> x(n, 0.0);
    std::vector<double> r(b.data(), b.data() + n);
    std::vector<double> p = r;
    double rr = inner(r, r);
    const double bn = std::sqrt(rr);
    for (int k = 1; k <= max_iters; ++k) {
        const auto q = mul(p);
        const double alpha = rr / inner(p, q);
        out.alphas.push_back(alpha);
        for (Index i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        out.iters = k;
        auto res = mul(x);
        for (Index i = 0; i < n; ++i) {
            res[i] = b[i] - res[i];
        }
        if (std::sqrt(inner(res, res)) / bn <= tol) {
            out.converged = true;
            break;
        }
        const double rr_new = inner(r, r);
        const double beta = rr_new / rr;
        out.betas.push_back(beta);
        rr = rr_new;
        for (Index i = 0; i < n; ++i) {
            p[i] = r[i] + beta * p[i];
        }
    }
    out.x = Eigen::Map<Eigen::VectorXd>(x.data(), n);
    return out;
}

}  // namespace oracle
