#include "pcgbench/scaling.hpp"

#include <cmath>
#include <string>

#include "pcgbench/errors.hpp"

namespace pcgbench {

ScaledSystem scale_and_symmetrize(const SparseMatrix& a)
{
    const Index n = a.n();
    ScaledSystem out;
    out.original_diag = a.diagonal_values();
    out.scale.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        const double d = out.original_diag[i];
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw NotSpdCandidate("diagonal entry " + std::to_string(i) + " is not positive (" +
                                  std::to_string(d) + ")");
        }
        out.scale[i] = std::sqrt(d);
    }

    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(2 * a.nnz()));
    for (Index i = 0; i < n; ++i) {
        t.push_back({i, i, 1.0});
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const Index j = cols[k];
            if (j == i) {
                continue;
            }
            const double half = 0.5 * (vals[k] / (out.scale[i] * out.scale[j]));
            // Each off-diagonal position receives exactly the two halves
            // {a'_ij/2, a'_ji/2}; two-term sums commute, so the result is bit-symmetric.
            t.push_back({i, j, half});
            t.push_back({j, i, half});
        }
    }
    out.matrix = SparseMatrix::from_triplets(n, std::move(t));
    return out;
}

}  // namespace pcgbench
