#include "pcgbench/ordering.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>

#include "pcgbench/errors.hpp"

namespace pcgbench {

Permutation::Permutation(std::vector<Index> perm, std::string label)
    : perm_(std::move(perm)), inv_(perm_.size(), -1), label_(std::move(label))
{
    const auto n = static_cast<Index>(perm_.size());
    for (Index i = 0; i < n; ++i) {
        const Index p = perm_[i];
        if (p < 0 || p >= n) {
            throw std::invalid_argument("permutation entry " + std::to_string(p) +
                                        " out of range for n = " + std::to_string(n));
        }
        if (inv_[p] != -1) {
            throw std::invalid_argument("permutation is not a bijection: " + std::to_string(p) +
                                        " repeated");
        }
        inv_[p] = i;
    }
}

Permutation Permutation::identity(Index n, std::string label)
{
    std::vector<Index> p(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        p[i] = i;
    }
    return Permutation(std::move(p), std::move(label));
}

Permutation Permutation::inverse() const
{
    return Permutation(inv_, label_ + "^-1");
}

namespace {

/// Off-diagonal adjacency of the symmetrized pattern, sorted by index.
std::vector<std::vector<Index>> adjacency(const SparseMatrix& a)
{
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(a.n()));
    for (Index i = 0; i < a.n(); ++i) {
        for (const Index j : a.row_cols(i)) {
            if (j != i) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return adj;
}

struct LevelInfo {
    Index eccentricity = 0;
    std::vector<Index> last_level;
    std::vector<Index> members;
};

/// BFS level structure rooted at `root`. `stamp` marks visited vertices with
/// the current `tag` so the buffer is reused across calls.
LevelInfo level_structure(const std::vector<std::vector<Index>>& adj, Index root,
                          std::vector<Index>& stamp, Index tag)
{
    LevelInfo info;
    std::vector<Index> current{root};
    stamp[root] = tag;
    info.members.push_back(root);
    while (true) {
        std::vector<Index> next;
        for (const Index v : current) {
            for (const Index w : adj[v]) {
                if (stamp[w] != tag) {
                    stamp[w] = tag;
                    next.push_back(w);
                }
            }
        }
        if (next.empty()) {
            info.last_level = std::move(current);
            return info;
        }
        info.members.insert(info.members.end(), next.begin(), next.end());
        ++info.eccentricity;
        current = std::move(next);
    }
}

Index min_degree_vertex(std::vector<Index> candidates, const std::vector<std::vector<Index>>& adj)
{
    std::sort(candidates.begin(), candidates.end());
    Index best = candidates.front();
    for (const Index v : candidates) {
        if (adj[v].size() < adj[best].size()) {
            best = v;
        }
    }
    return best;
}

}  // namespace

Permutation rcm_order(const SparseMatrix& a)
{
    const Index n = a.n();
    const auto adj = adjacency(a);
    std::vector<Index> stamp(static_cast<std::size_t>(n), -1);
    std::vector<char> placed(static_cast<std::size_t>(n), 0);
    std::vector<Index> order;
    order.reserve(static_cast<std::size_t>(n));
    Index tag = 0;

    for (Index seed = 0; seed < n; ++seed) {
        if (placed[seed]) {
            continue;
        }
        // Component members, then George-Liu pseudo-peripheral search.
        LevelInfo info = level_structure(adj, seed, stamp, tag++);
        Index root = min_degree_vertex(info.members, adj);
        info = level_structure(adj, root, stamp, tag++);
        while (true) {
            const Index candidate = min_degree_vertex(info.last_level, adj);
            LevelInfo trial = level_structure(adj, candidate, stamp, tag++);
            if (trial.eccentricity <= info.eccentricity) {
                break;
            }
            root = candidate;
            info = std::move(trial);
        }

        // Cuthill-McKee BFS.
        std::size_t head = order.size();
        order.push_back(root);
        placed[root] = 1;
        std::vector<Index> fresh;
        while (head < order.size()) {
            const Index v = order[head++];
            fresh.clear();
            for (const Index w : adj[v]) {
                if (!placed[w]) {
                    placed[w] = 1;
                    fresh.push_back(w);
                }
            }
            std::stable_sort(fresh.begin(), fresh.end(), [&adj](Index x, Index y) {
                return adj[x].size() < adj[y].size();
            });
            order.insert(order.end(), fresh.begin(), fresh.end());
        }
    }
    std::reverse(order.begin(), order.end());
    return Permutation(std::move(order), "rcm");
}

Permutation load_permutation(const std::filesystem::path& path, Index n, std::string label)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open permutation file " + path.string());
    }
    std::vector<Index> values;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        long long v = 0;
        const char* b = line.data() + first;
        const char* e = line.data() + last + 1;
        const auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc{} || ptr != e) {
            throw ParseError("malformed permutation line: '" + line + "'");
        }
        values.push_back(v);
    }
    if (static_cast<Index>(values.size()) != n) {
        throw ParseError("permutation file has " + std::to_string(values.size()) +
                         " entries, expected " + std::to_string(n));
    }
    if (n > 0) {
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        if (*lo == 1 && *hi == n) {
            for (auto& v : values) {
                --v;
            }
        } else if (*lo < 0 || *hi >= n) {
            throw ParseError("permutation values out of range [0, n) and [1, n]");
        }
    }
    try {
        return Permutation(std::move(values), std::move(label));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

void save_permutation(const std::filesystem::path& path, const Permutation& p)
{
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path.string());
    }
    for (const Index v : p.perm()) {
        out << v << '\n';
    }
}

SparseMatrix permute_symmetric(const SparseMatrix& a, const Permutation& p)
{
    if (p.size() != a.n()) {
        throw DimensionMismatch("permutation of size " + std::to_string(p.size()) +
                                " applied to matrix of size " + std::to_string(a.n()));
    }
    const Index n = a.n();
    const auto& perm = p.perm();
    const auto& inv = p.inv();
    std::vector<Index> rp(static_cast<std::size_t>(n) + 1, 0);
    std::vector<Index> ci;
    std::vector<double> v;
    ci.reserve(static_cast<std::size_t>(a.nnz()));
    v.reserve(static_cast<std::size_t>(a.nnz()));
    std::vector<std::pair<Index, double>> row;
    for (Index i = 0; i < n; ++i) {
        const Index old = perm[i];
        const auto cols = a.row_cols(old);
        const auto vals = a.row_values(old);
        row.clear();
        for (std::size_t k = 0; k < cols.size(); ++k) {
            row.emplace_back(inv[cols[k]], vals[k]);
        }
        std::sort(row.begin(), row.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [j, x] : row) {
            ci.push_back(j);
            v.push_back(x);
        }
        rp[i + 1] = static_cast<Index>(ci.size());
    }
    return SparseMatrix::from_csr(n, std::move(rp), std::move(ci), std::move(v));
}

Vector permute_vector(std::span<const double> x, const Permutation& p)
{
    if (static_cast<Index>(x.size()) != p.size()) {
        throw DimensionMismatch("permute_vector: length mismatch");
    }
    Vector out(x.size());
    for (Index i = 0; i < p.size(); ++i) {
        out[i] = x[p.perm()[i]];
    }
    return out;
}

Vector unpermute_vector(std::span<const double> x, const Permutation& p)
{
    if (static_cast<Index>(x.size()) != p.size()) {
        throw DimensionMismatch("unpermute_vector: length mismatch");
    }
    Vector out(x.size());
    for (Index i = 0; i < p.size(); ++i) {
        out[p.perm()[i]] = x[i];
    }
    return out;
}

}  // namespace pcgbench
