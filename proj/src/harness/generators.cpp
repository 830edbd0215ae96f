#include "pcgbench/harness/generators.hpp"

#include <cmath>

#include "pcgbench/errors.hpp"
#include "pcgbench/rng.hpp"

namespace pcgbench {

SparseMatrix poisson2d(Index k)
{
    if (k < 1) {
        throw InvalidConfig("poisson2d: k must be >= 1");
    }
    const Index n = k * k;
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(5 * n));
    for (Index r = 0; r < k; ++r) {
        for (Index c = 0; c < k; ++c) {
            const Index i = r * k + c;
            if (r > 0) {
                t.push_back({i, i - k, -1.0});
            }
            if (c > 0) {
                t.push_back({i, i - 1, -1.0});
            }
            t.push_back({i, i, 4.0});
            if (c + 1 < k) {
                t.push_back({i, i + 1, -1.0});
            }
            if (r + 1 < k) {
                t.push_back({i, i + k, -1.0});
            }
        }
    }
    return SparseMatrix::from_triplets(n, std::move(t));
}

SparseMatrix tridiag(Index n, double diag, double off)
{
    if (n < 1) {
        throw InvalidConfig("tridiag: n must be >= 1");
    }
    std::vector<Triplet> t;
    for (Index i = 0; i < n; ++i) {
        if (i > 0) {
            t.push_back({i, i - 1, off});
        }
        t.push_back({i, i, diag});
        if (i + 1 < n) {
            t.push_back({i, i + 1, off});
        }
    }
    return SparseMatrix::from_triplets(n, std::move(t));
}

SparseMatrix random_sdd(Index n, double density, std::uint64_t seed)
{
    if (n < 1) {
        throw InvalidConfig("random_sdd: n must be >= 1");
    }
    if (!(density >= 0.0 && density <= 1.0)) {
        throw InvalidConfig("random_sdd: density must lie in [0, 1]");
    }
    Xoshiro256pp rng(seed);
    std::vector<Triplet> t;
    Vector rowsum(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            if (rng.uniform() >= density) {
                continue;
            }
            double v = 2.0 * rng.uniform() - 1.0;
            if (v == 0.0) {
                v = 0.5;
            }
            t.push_back({i, j, v});
            t.push_back({j, i, v});
            rowsum[i] += std::abs(v);
            rowsum[j] += std::abs(v);
        }
    }
    for (Index i = 0; i < n; ++i) {
        t.push_back({i, i, rowsum[i] + 0.1 + rng.uniform()});
    }
    return SparseMatrix::from_triplets(n, std::move(t));
}

}  // namespace pcgbench
