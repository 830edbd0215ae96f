#include "pcgbench/incomplete_cholesky.hpp"

#include <algorithm>
#include <cmath>

#include "pcgbench/costing.hpp"
#include "pcgbench/errors.hpp"

namespace pcgbench {

std::variant<IcFactor, GenerationFailure> build_ic(const SparseMatrix& a, const IcOptions& opts)
{
    if (!a.symmetric()) {
        throw std::invalid_argument("incomplete Cholesky needs a symmetric matrix");
    }
    if (opts.droptol < 0.0) {
        throw InvalidConfig("droptol must be >= 0");
    }
    const Index n = a.n();
    const bool pattern_mode = opts.droptol == 0.0;

    // Columns of L are produced in order; this is CSC of L == CSR of L^T.
    std::vector<Index> col_ptr{0};
    std::vector<Index> rows;
    std::vector<double> vals;
    rows.reserve(static_cast<std::size_t>(a.nnz()));
    vals.reserve(static_cast<std::size_t>(a.nnz()));

    // head[r]: columns k whose next unconsumed entry is in row r; link chains them.
    std::vector<Index> head(static_cast<std::size_t>(n), -1);
    std::vector<Index> link(static_cast<std::size_t>(n), -1);
    std::vector<Index> next_pos(static_cast<std::size_t>(n), 0);

    Vector work(static_cast<std::size_t>(n), 0.0);
    std::vector<char> in_a(static_cast<std::size_t>(n), 0);
    std::vector<char> touched_flag(static_cast<std::size_t>(n), 0);
    std::vector<Index> touched;
    Vector compensation(static_cast<std::size_t>(n), 0.0);

    for (Index j = 0; j < n; ++j) {
        touched.clear();
        double col_norm = 0.0;
        const auto acols = a.row_cols(j);
        const auto avals = a.row_values(j);
        for (std::size_t k = 0; k < acols.size(); ++k) {
            col_norm += std::abs(avals[k]);
            const Index i = acols[k];
            if (i >= j) {
                work[i] = avals[k];
                in_a[i] = 1;
                touched_flag[i] = 1;
                touched.push_back(i);
            }
        }
        if (!touched_flag[j]) {
            touched_flag[j] = 1;
            touched.push_back(j);
        }

        // Left-looking update from every column k with L(j,k) != 0.
        for (Index k = head[j]; k != -1;) {
            const Index following = link[k];
            const Index p = next_pos[k];
            const double ljk = vals[p];
            for (Index q = p; q < col_ptr[k + 1]; ++q) {
                const Index i = rows[q];
                if (!touched_flag[i]) {
                    touched_flag[i] = 1;
                    touched.push_back(i);
                }
                work[i] -= vals[q] * ljk;
            }
            next_pos[k] = p + 1;
            if (p + 1 < col_ptr[k + 1]) {
                const Index r = rows[p + 1];
                link[k] = head[r];
                head[r] = k;
            }
            k = following;
        }
        head[j] = -1;

        std::sort(touched.begin(), touched.end());
        const double trial_pivot = work[j] + compensation[j];
        if (!(trial_pivot > 0.0) || !std::isfinite(trial_pivot)) {
            return GenerationFailure{"nonpositive pivot", j, trial_pivot};
        }
        const double trial_diag = std::sqrt(trial_pivot);
        const double threshold = opts.droptol * col_norm;

        const std::size_t start = rows.size();
        rows.push_back(j);
        vals.push_back(0.0);
        for (const Index i : touched) {
            if (i == j) {
                continue;
            }
            const double w = work[i];
            const bool keep = w != 0.0 && (pattern_mode ? in_a[i] != 0
                                                        : std::abs(w) / trial_diag >= threshold);
            if (keep) {
                rows.push_back(i);
                vals.push_back(w);
            } else if (opts.modified && w != 0.0) {
                compensation[j] += w;
                compensation[i] += w;
            }
        }
        const double pivot = work[j] + compensation[j];
        if (!(pivot > 0.0) || !std::isfinite(pivot)) {
            return GenerationFailure{"nonpositive pivot after compensation", j, pivot};
        }
        const double ljj = std::sqrt(pivot);
        vals[start] = ljj;
        for (std::size_t q = start + 1; q < rows.size(); ++q) {
            vals[q] /= ljj;
        }
        col_ptr.push_back(static_cast<Index>(rows.size()));
        if (start + 1 < rows.size()) {
            next_pos[j] = static_cast<Index>(start + 1);
            const Index r = rows[start + 1];
            link[j] = head[r];
            head[r] = j;
        }

        for (const Index i : touched) {
            work[i] = 0.0;
            in_a[i] = 0;
            touched_flag[i] = 0;
        }
    }

    const SparseMatrix lt = SparseMatrix::from_csr(n, std::move(col_ptr), std::move(rows),
                                                   std::move(vals));
    IcFactor f;
    f.lower = lt.transpose();
    f.droptol = opts.droptol;
    f.modified = opts.modified;
    const Index tril_nnz = a.lower().nnz();
    f.fill_ratio = tril_nnz > 0 ? static_cast<double>(f.lower.nnz()) / static_cast<double>(tril_nnz)
                                : 0.0;
    return f;
}

std::string ic_label(const IcOptions& opts)
{
    return std::string(opts.modified ? "mic" : "ic") + "(droptol=" + format_param(opts.droptol) +
           ")";
}

TriangularPairPreconditioner::TriangularPairPreconditioner(SparseMatrix lower, std::string label)
    : lower_(std::move(lower)), upper_(lower_.transpose()), label_(std::move(label))
{
    generation_cost_ = pcgbench::generation_cost(column_counts(lower_));
}

void TriangularPairPreconditioner::apply(std::span<const double> r, std::span<double> z) const
{
    if (static_cast<Index>(r.size()) != lower_.n() || r.size() != z.size()) {
        throw DimensionMismatch("triangular pair: length mismatch");
    }
    Vector y(r.size());
    lower_tri_solve(lower_, r, y);
    upper_tri_solve(upper_, y, z);
}

BuildResult make_ic_preconditioner(IcFactor factor, std::string label)
{
    return std::make_shared<TriangularPairPreconditioner>(std::move(factor.lower),
                                                          std::move(label));
}

BuildResult build_ic_preconditioner(const SparseMatrix& a, const IcOptions& opts)
{
    auto result = build_ic(a, opts);
    if (auto* failure = std::get_if<GenerationFailure>(&result)) {
        return *failure;
    }
    return make_ic_preconditioner(std::get<IcFactor>(std::move(result)), ic_label(opts));
}

BuildResult symmetrize_lu(const SparseMatrix& lower, std::span<const double> diag_u,
                          std::string label)
{
    const Index n = lower.n();
    if (static_cast<Index>(diag_u.size()) != n) {
        throw DimensionMismatch("diag(U) length does not match L");
    }
    Vector root(diag_u.size());
    for (Index j = 0; j < n; ++j) {
        if (!(diag_u[j] > 0.0) || !std::isfinite(diag_u[j])) {
            return GenerationFailure{"nonpositive diag(U) entry", j, diag_u[j]};
        }
        root[j] = std::sqrt(diag_u[j]);
    }
    std::vector<Index> rp{0};
    std::vector<Index> ci;
    std::vector<double> v;
    for (Index i = 0; i < n; ++i) {
        const auto cols = lower.row_cols(i);
        const auto vals = lower.row_values(i);
        if (cols.empty() || cols.back() != i) {
            if (!cols.empty() && cols.back() > i) {
                throw std::invalid_argument("symmetrize_lu: L has entries above the diagonal");
            }
            return GenerationFailure{"L has a zero diagonal", i, 0.0};
        }
        for (std::size_t k = 0; k < cols.size(); ++k) {
            ci.push_back(cols[k]);
            v.push_back(vals[k] * root[cols[k]]);
        }
        rp.push_back(static_cast<Index>(ci.size()));
    }
    auto scaled = SparseMatrix::from_csr(n, std::move(rp), std::move(ci), std::move(v));
    return std::make_shared<TriangularPairPreconditioner>(std::move(scaled), std::move(label));
}

}  // namespace pcgbench
