#include "pcgbench/costing.hpp"

#include <algorithm>

namespace pcgbench {

std::vector<Count> column_counts(const SparseMatrix& lower)
{
    std::vector<Count> counts(static_cast<std::size_t>(lower.n()), 0);
    for (Index i = 0; i < lower.n(); ++i) {
        for (const Index j : lower.row_cols(i)) {
            if (j <= i) {
                ++counts[j];
            }
        }
    }
    return counts;
}

Count generation_cost(std::span<const Count> counts)
{
    Count total = 0;
    for (const Count c : counts) {
        total += c * c;
    }
    return total;
}

SymbolicFactor symbolic_cholesky(const SparseMatrix& a)
{
    const Index n = a.n();
    SymbolicFactor f;
    f.parent.assign(static_cast<std::size_t>(n), -1);
    f.counts.assign(static_cast<std::size_t>(n), 0);

    // Strict-lower pattern of each column, merged from A and the etree children.
    std::vector<std::vector<Index>> pattern(static_cast<std::size_t>(n));
    std::vector<std::vector<Index>> children(static_cast<std::size_t>(n));
    std::vector<Index> mark(static_cast<std::size_t>(n), -1);

    for (Index j = 0; j < n; ++j) {
        std::vector<Index> col;
        mark[j] = j;
        auto add = [&](Index i) {
            if (i > j && mark[i] != j) {
                mark[i] = j;
                col.push_back(i);
            }
        };
        // Row j right of the diagonal is column j below it for a symmetric pattern.
        for (const Index i : a.row_cols(j)) {
            add(i);
        }
        for (const Index c : children[j]) {
            for (const Index i : pattern[c]) {
                add(i);
            }
            std::vector<Index>().swap(pattern[c]);
        }
        std::sort(col.begin(), col.end());
        if (!col.empty()) {
            f.parent[j] = col.front();
            children[col.front()].push_back(j);
        }
        f.counts[j] = static_cast<Count>(col.size()) + 1;
        f.nnz += f.counts[j];
        pattern[j] = std::move(col);
    }
    return f;
}

Count direct_cost_baseline(const SparseMatrix& a, const Permutation& p)
{
    return direct_cost_baseline(permute_symmetric(a, p));
}

Count direct_cost_baseline(const SparseMatrix& a)
{
    const SymbolicFactor f = symbolic_cholesky(a);
    return f.nnz + generation_cost(f.counts);
}

}  // namespace pcgbench
