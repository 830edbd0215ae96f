#include "pcgbench/sspai.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcgbench/errors.hpp"

namespace pcgbench {

Index sspai_column_budget(const SparseMatrix& a, double fill_multiplier)
{
    if (!(fill_multiplier > 0.0)) {
        throw InvalidConfig("SSPAI fill multiplier must be positive");
    }
    if (a.n() == 0) {
        return 1;
    }
    const double avg = static_cast<double>(a.nnz()) / static_cast<double>(a.n());
    return std::max<Index>(1, static_cast<Index>(std::floor(fill_multiplier * avg + 0.5)));
}

SspaiPreconditioner::SspaiPreconditioner(SparseMatrix inverse, Count generation_cost,
                                         Index fallback_columns, std::string label)
    : inverse_(std::move(inverse)),
      generation_cost_(generation_cost),
      fallback_columns_(fallback_columns),
      label_(std::move(label))
{
}

void SspaiPreconditioner::apply(std::span<const double> r, std::span<double> z) const
{
    matvec(inverse_, r, z);
}

std::string sspai_label(const SspaiConfig& cfg)
{
    return "sspai(fill=" + format_param(cfg.fill_multiplier) + ")";
}

std::shared_ptr<const SspaiPreconditioner> build_sspai(const SparseMatrix& a,
                                                       const SspaiConfig& cfg)
{
    return build_sspai_with_budget(a, sspai_column_budget(a, cfg.fill_multiplier),
                                   sspai_label(cfg));
}

std::shared_ptr<const SspaiPreconditioner> build_sspai_with_budget(const SparseMatrix& a, Index k,
                                                                   std::string label)
{
    if (!a.symmetric()) {
        throw std::invalid_argument("SSPAI needs a symmetric matrix");
    }
    if (k < 1) {
        throw InvalidConfig("SSPAI column budget must be >= 1");
    }
    const Index n = a.n();
    std::vector<Triplet> t;
    Count gen_cost = 0;
    Index fallbacks = 0;
    std::vector<Index> local_row(static_cast<std::size_t>(n), -1);

    for (Index j = 0; j < n; ++j) {
        // A(:,j) == A(j,:) by symmetry.
        const auto cols = a.row_cols(j);
        const auto vals = a.row_values(j);
        std::vector<std::size_t> off;
        for (std::size_t q = 0; q < cols.size(); ++q) {
            if (cols[q] != j) {
                off.push_back(q);
            }
        }
        const auto extra = std::min<std::size_t>(off.size(), static_cast<std::size_t>(k - 1));
        std::partial_sort(off.begin(), off.begin() + static_cast<std::ptrdiff_t>(extra), off.end(),
                          [&](std::size_t x, std::size_t y) {
                              const double ax = std::abs(vals[x]);
                              const double ay = std::abs(vals[y]);
                              return ax != ay ? ax > ay : cols[x] < cols[y];
                          });
        std::vector<Index> pattern{j};
        for (std::size_t q = 0; q < extra; ++q) {
            pattern.push_back(cols[off[q]]);
        }
        std::sort(pattern.begin(), pattern.end());

        std::vector<Index> rows;
        for (const Index p : pattern) {
            for (const Index i : a.row_cols(p)) {
                if (local_row[i] == -1) {
                    local_row[i] = 0;
                    rows.push_back(i);
                }
            }
        }
        std::sort(rows.begin(), rows.end());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            local_row[rows[r]] = static_cast<Index>(r);
        }

        const auto np = static_cast<Eigen::Index>(pattern.size());
        const auto nr = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(nr, np);
        for (Eigen::Index c = 0; c < np; ++c) {
            const Index p = pattern[c];
            const auto pc = a.row_cols(p);
            const auto pv = a.row_values(p);
            for (std::size_t q = 0; q < pc.size(); ++q) {
                block(local_row[pc[q]], c) = pv[q];
            }
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(np);
        if (local_row[j] >= 0) {
            rhs = block.row(local_row[j]).transpose();
        }
        gen_cost += static_cast<Count>(nr) * np * np + static_cast<Count>(np) * np * np;

        const Eigen::MatrixXd gram = block.transpose() * block;
        Eigen::VectorXd m;
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        bool ok = llt.info() == Eigen::Success;
        if (!ok) {
            const double jitter = 1e-12 * std::max(1.0, gram.diagonal().cwiseAbs().maxCoeff());
            llt.compute(gram + jitter * Eigen::MatrixXd::Identity(np, np));
            ok = llt.info() == Eigen::Success;
        }
        if (ok) {
            m = llt.solve(rhs);
            ok = m.allFinite();
        }
        if (ok) {
            for (Eigen::Index c = 0; c < np; ++c) {
                t.push_back({pattern[c], j, m[c]});
            }
        } else {
            ++fallbacks;
            const double ajj = a.at(j, j);
            if (ajj == 0.0) {
                throw SingularFactor("SSPAI fallback needs a nonzero diagonal at " +
                                     std::to_string(j));
            }
            t.push_back({j, j, 1.0 / ajj});
        }
        for (const Index i : rows) {
            local_row[i] = -1;
        }
    }

    // (K + K^T) / 2 with two-term sums per position, hence bit-symmetric.
    std::vector<Triplet> sym;
    sym.reserve(2 * t.size());
    for (const auto& e : t) {
        sym.push_back({e.row, e.col, 0.5 * e.value});
        sym.push_back({e.col, e.row, 0.5 * e.value});
    }
    return std::make_shared<SspaiPreconditioner>(SparseMatrix::from_triplets(n, std::move(sym)),
                                                 gen_cost, fallbacks, std::move(label));
}

}  // namespace pcgbench
