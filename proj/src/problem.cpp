#include "pcgbench/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pcgbench/errors.hpp"
#include "pcgbench/rng.hpp"

namespace pcgbench {

Index rounded_log2(Index n)
{
    return static_cast<Index>(std::floor(std::log2(static_cast<double>(n)) + 0.5));
}

SeededProblem generate_problem(const SparseMatrix& a, std::uint64_t seed)
{
    const Index n = a.n();
    if (n < 2) {
        throw std::invalid_argument("generate_problem needs n >= 2");
    }
    const Index warmup = rounded_log2(n);
    const Index support = warmup + 1;

    Xoshiro256pp rng(seed);
    for (Index v = 0; v < warmup; ++v) {
        for (Index i = 0; i < n; ++i) {
            (void)rng.uniform();
        }
    }
    Vector draw(static_cast<std::size_t>(n));
    for (auto& x : draw) {
        x = rng.uniform();
    }

    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    const auto keep = static_cast<std::ptrdiff_t>(std::min(support, n));
    std::partial_sort(idx.begin(), idx.begin() + keep, idx.end(), [&draw](Index i, Index j) {
        const double ai = std::abs(draw[i]);
        const double aj = std::abs(draw[j]);
        return ai != aj ? ai > aj : i < j;
    });
    idx.resize(static_cast<std::size_t>(keep));
    std::sort(idx.begin(), idx.end());

    SeededProblem p;
    p.seed = seed;
    p.support_size = keep;
    p.x_star.assign(static_cast<std::size_t>(n), 0.0);
    for (const Index i : idx) {
        p.x_star[i] = rng.uniform() < 0.5 ? 1.0 : -1.0;
    }
    p.b = matvec(a, p.x_star);
    return p;
}

const char* to_string(SddStatus s)
{
    switch (s) {
    case SddStatus::sdd_as_scaled:
        return "sdd_as_scaled";
    case SddStatus::sdd_unscaled_only:
        return "sdd_unscaled_only";
    case SddStatus::not_sdd:
        return "not_sdd";
    }
    return "unknown";
}

Vector sdd_slack(const SparseMatrix& a)
{
    Vector slack(static_cast<std::size_t>(a.n()), 0.0);
    for (Index i = 0; i < a.n(); ++i) {
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        double diag = 0.0;
        double off = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == i) {
                diag = vals[k];
            } else {
                off += std::abs(vals[k]);
            }
        }
        slack[i] = diag - off;
    }
    return slack;
}

bool is_sdd(const SparseMatrix& a, double tol)
{
    const Vector slack = sdd_slack(a);
    for (Index i = 0; i < a.n(); ++i) {
        if (slack[i] < -tol * std::max(1.0, std::abs(a.at(i, i)))) {
            return false;
        }
    }
    return true;
}

SddClassification classify_sdd(const SparseMatrix& unscaled, const SparseMatrix& scaled)
{
    if (unscaled.n() != scaled.n()) {
        throw DimensionMismatch("classify_sdd: matrices differ in size");
    }
    SddClassification c;
    if (is_sdd(scaled)) {
        c.status = SddStatus::sdd_as_scaled;
        c.slack = sdd_slack(scaled);
    } else if (is_sdd(unscaled)) {
        c.status = SddStatus::sdd_unscaled_only;
        c.slack = sdd_slack(unscaled);
    } else {
        c.status = SddStatus::not_sdd;
        c.slack = sdd_slack(scaled);
    }
    return c;
}

SparseMatrix diagonal_lift_to_sdd(const SparseMatrix& a)
{
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(a.nnz() + a.n()));
    for (Index i = 0; i < a.n(); ++i) {
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        double diag = 0.0;
        double off = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == i) {
                diag = vals[k];
            } else {
                off += std::abs(vals[k]);
                t.push_back({i, cols[k], vals[k]});
            }
        }
        t.push_back({i, i, std::max(diag, off)});
    }
    return SparseMatrix::from_triplets(a.n(), std::move(t));
}

AugmentedSystem augment_to_laplacian(const SparseMatrix& a, bool allow_lift)
{
    if (!a.symmetric()) {
        throw std::invalid_argument("augment_to_laplacian needs a symmetric matrix");
    }
    if (!is_sdd(a)) {
        if (!allow_lift) {
            throw NotSdd("matrix is not diagonally dominant; enable lifting to augment it");
        }
        return augment_to_laplacian(diagonal_lift_to_sdd(a), false);
    }

    const Index n = a.n();
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(2 * a.nnz() + 4 * n));
    for (Index i = 0; i < n; ++i) {
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        double diag = 0.0;
        double d = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const Index j = cols[k];
            const double v = vals[k];
            if (j == i) {
                diag = v;
                continue;
            }
            d += std::abs(v);
            if (v < 0.0) {
                t.push_back({i, j, v});
                t.push_back({i + n, j + n, v});
            } else {
                t.push_back({i, j + n, -v});
                t.push_back({i + n, j, -v});
            }
        }
        // Within-tolerance negative slack is treated as exact dominance.
        const double half_slack = 0.5 * std::max(0.0, diag - d);
        t.push_back({i, i, d + half_slack});
        t.push_back({i + n, i + n, d + half_slack});
        t.push_back({i, i + n, -half_slack});
        t.push_back({i + n, i, -half_slack});
    }
    return {SparseMatrix::from_triplets(2 * n, std::move(t)), n};
}

Vector augment_rhs(std::span<const double> b)
{
    Vector out(2 * b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        out[i] = b[i];
        out[i + b.size()] = -b[i];
    }
    return out;
}

Vector recover_solution(std::span<const double> x_aug)
{
    if (x_aug.size() % 2 != 0) {
        throw DimensionMismatch("augmented solution must have even length");
    }
    const std::size_t n = x_aug.size() / 2;
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = (x_aug[i] - x_aug[i + n]) / 2.0;
    }
    return x;
}

}  // namespace pcgbench
