#include "pcgbench/laplacian.hpp"

#include <algorithm>

#include "pcgbench/errors.hpp"

namespace pcgbench {

std::vector<Index> connected_components(const SparseMatrix& a, Index* count)
{
    const Index n = a.n();
    std::vector<Index> comp(static_cast<std::size_t>(n), -1);
    std::vector<Index> stack;
    Index c = 0;
    for (Index s = 0; s < n; ++s) {
        if (comp[s] != -1) {
            continue;
        }
        comp[s] = c;
        stack.push_back(s);
        while (!stack.empty()) {
            const Index v = stack.back();
            stack.pop_back();
            for (const Index w : a.row_cols(v)) {
                if (comp[w] == -1) {
                    comp[w] = c;
                    stack.push_back(w);
                }
            }
        }
        ++c;
    }
    if (count != nullptr) {
        *count = c;
    }
    return comp;
}

GroundedIcPreconditioner::GroundedIcPreconditioner(std::vector<Index> component,
                                                   std::vector<Index> grounded,
                                                   SparseMatrix reduced_lower, bool project,
                                                   std::string label)
    : component_(std::move(component)),
      reduced_index_(component_.size(), 0),
      inner_(std::move(reduced_lower), "grounded-ic"),
      project_(project),
      label_(std::move(label))
{
    for (const Index g : grounded) {
        reduced_index_[g] = -1;
    }
    Index next = 0;
    for (auto& ri : reduced_index_) {
        ri = ri == -1 ? -1 : next++;
    }
    component_count_ = static_cast<Index>(grounded.size());
}

void GroundedIcPreconditioner::project_out_constants(std::span<double> v) const
{
    std::vector<double> sum(static_cast<std::size_t>(component_count_), 0.0);
    std::vector<Index> size(static_cast<std::size_t>(component_count_), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        sum[component_[i]] += v[i];
        ++size[component_[i]];
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] -= sum[component_[i]] / static_cast<double>(size[component_[i]]);
    }
}

void GroundedIcPreconditioner::apply(std::span<const double> r, std::span<double> z) const
{
    if (r.size() != component_.size() || z.size() != r.size()) {
        throw DimensionMismatch("grounded IC: length mismatch");
    }
    Vector rr(r.begin(), r.end());
    if (project_) {
        project_out_constants(rr);
    }
    Vector reduced_r(static_cast<std::size_t>(inner_.dim()));
    for (std::size_t i = 0; i < rr.size(); ++i) {
        if (reduced_index_[i] >= 0) {
            reduced_r[reduced_index_[i]] = rr[i];
        }
    }
    const Vector reduced_z = inner_.Preconditioner::apply(reduced_r);
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = reduced_index_[i] >= 0 ? reduced_z[reduced_index_[i]] : 0.0;
    }
    if (project_) {
        project_out_constants(z);
    }
}

BuildResult build_grounded_ic(const SparseMatrix& laplacian, double droptol, bool project)
{
    Index count = 0;
    std::vector<Index> comp = connected_components(laplacian, &count);
    const Index n = laplacian.n();
    std::vector<Index> grounded(static_cast<std::size_t>(count), -1);
    for (Index i = 0; i < n; ++i) {
        grounded[comp[i]] = i;  // highest index wins
    }
    std::vector<char> is_grounded(static_cast<std::size_t>(n), 0);
    for (const Index g : grounded) {
        is_grounded[g] = 1;
    }
    std::vector<Index> map(static_cast<std::size_t>(n), -1);
    Index m = 0;
    for (Index i = 0; i < n; ++i) {
        if (!is_grounded[i]) {
            map[i] = m++;
        }
    }
    std::vector<Index> rp{0};
    std::vector<Index> ci;
    std::vector<double> v;
    for (Index i = 0; i < n; ++i) {
        if (is_grounded[i]) {
            continue;
        }
        const auto cols = laplacian.row_cols(i);
        const auto vals = laplacian.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (!is_grounded[cols[k]]) {
                ci.push_back(map[cols[k]]);
                v.push_back(vals[k]);
            }
        }
        rp.push_back(static_cast<Index>(ci.size()));
    }
    // Removing vertices keeps each row's column order, so CSR stays sorted.
    const SparseMatrix reduced = SparseMatrix::from_csr(m, std::move(rp), std::move(ci), std::move(v));
    auto factor = build_ic(reduced, IcOptions{droptol, false});
    if (auto* failure = std::get_if<GenerationFailure>(&factor)) {
        return *failure;
    }
    std::sort(grounded.begin(), grounded.end());
    return std::make_shared<GroundedIcPreconditioner>(
        std::move(comp), std::move(grounded), std::move(std::get<IcFactor>(factor).lower), project,
        "grounded-ic(droptol=" + format_param(droptol) + ")");
}

std::string laplacian_label(const LaplacianPipelineConfig& cfg)
{
    return "laplacian(droptol=" + format_param(cfg.droptol) + ")";
}

SparseMatrix unscale(const SparseMatrix& scaled, std::span<const double> scale)
{
    if (static_cast<Index>(scale.size()) != scaled.n()) {
        throw DimensionMismatch("unscale: scale length differs from n");
    }
    std::vector<Index> rp(scaled.row_ptr().begin(), scaled.row_ptr().end());
    std::vector<Index> ci(scaled.col_idx().begin(), scaled.col_idx().end());
    std::vector<double> v(scaled.values().begin(), scaled.values().end());
    for (Index i = 0; i < scaled.n(); ++i) {
        for (Index k = rp[i]; k < rp[i + 1]; ++k) {
            v[k] *= scale[i] * scale[ci[k]];
        }
    }
    return SparseMatrix::from_csr(scaled.n(), std::move(rp), std::move(ci), std::move(v));
}

namespace {

/// z = (1/2) E^T M E r, optionally conjugated by diag(s).
class LaplacianPipelinePreconditioner final : public Preconditioner {
public:
    LaplacianPipelinePreconditioner(PreconditionerPtr inner, Vector conjugate, std::string label)
        : inner_(std::move(inner)), conjugate_(std::move(conjugate)), label_(std::move(label))
    {
    }

    Index dim() const override { return inner_->dim() / 2; }

    void apply(std::span<const double> r, std::span<double> z) const override
    {
        const std::size_t n = r.size();
        if (static_cast<Index>(n) != dim() || z.size() != n) {
            throw DimensionMismatch("laplacian pipeline: length mismatch");
        }
        Vector ra(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ri = conjugate_.empty() ? r[i] : conjugate_[i] * r[i];
            ra[i] = ri;
            ra[n + i] = -ri;
        }
        const Vector za = inner_->Preconditioner::apply(ra);
        for (std::size_t i = 0; i < n; ++i) {
            const double zi = 0.5 * (za[i] - za[n + i]);
            z[i] = conjugate_.empty() ? zi : conjugate_[i] * zi;
        }
    }

    Count apply_cost() const override { return inner_->apply_cost(); }
    Count generation_cost() const override { return inner_->generation_cost(); }
    std::string label() const override { return label_; }

private:
    PreconditionerPtr inner_;
    Vector conjugate_;
    std::string label_;
};

}  // namespace

BuildResult build_laplacian_pipeline(const SparseMatrix& scaled, std::span<const double> scale,
                                     const LaplacianPipelineConfig& cfg,
                                     const LaplacianInnerFactory& inner)
{
    const SparseMatrix unscaled = unscale(scaled, scale);
    const SddClassification cls = classify_sdd(unscaled, scaled);
    Vector conjugate;
    AugmentedSystem aug;
    switch (cls.status) {
    case SddStatus::sdd_as_scaled:
        aug = augment_to_laplacian(scaled, true);
        break;
    case SddStatus::sdd_unscaled_only:
        aug = augment_to_laplacian(unscaled, true);
        conjugate.assign(scale.begin(), scale.end());
        break;
    case SddStatus::not_sdd:
        if (!cfg.allow_lift) {
            throw NotSdd("matrix is not SDD scaled or unscaled and lifting is disabled");
        }
        aug = augment_to_laplacian(scaled, true);
        break;
    }
    // is_sdd tolerates rounding-level negative slack, so the augmentation
    // above is always allowed to clamp it.
    BuildResult built = inner ? inner(aug.laplacian) : build_grounded_ic(aug.laplacian, cfg.droptol);
    if (auto* failure = std::get_if<GenerationFailure>(&built)) {
        return *failure;
    }
    return std::make_shared<LaplacianPipelinePreconditioner>(
        std::get<PreconditionerPtr>(std::move(built)), std::move(conjugate), laplacian_label(cfg));
}

AugmentedSolve solve_augmented(const SparseMatrix& a, std::span<const double> b, double droptol,
                               double tol, bool allow_lift)
{
    if (static_cast<Index>(b.size()) != a.n()) {
        throw DimensionMismatch("solve_augmented: b length differs from n");
    }
    const AugmentedSystem aug = augment_to_laplacian(a, allow_lift);
    const SparseMatrix& l = aug.laplacian;
    const Vector rhs = augment_rhs(b);
    BuildResult built = build_grounded_ic(l, droptol, true);
    if (auto* failure = std::get_if<GenerationFailure>(&built)) {
        throw SingularFactor("augmented IC failed: " + failure->reason);
    }
    const auto& m = *std::get<PreconditionerPtr>(built);

    Index count = 0;
    const std::vector<Index> comp = connected_components(l, &count);
    auto project = [&](Vector& v) {
        std::vector<double> sum(static_cast<std::size_t>(count), 0.0);
        std::vector<Index> size(static_cast<std::size_t>(count), 0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            sum[comp[i]] += v[i];
            ++size[comp[i]];
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] -= sum[comp[i]] / static_cast<double>(size[comp[i]]);
        }
    };

    const std::size_t n2 = rhs.size();
    Vector x(n2, 0.0);
    Vector r = rhs;
    project(r);
    Vector z = m.Preconditioner::apply(r);
    Vector p = z;
    Vector q(n2);
    double rz = dot(r, z);
    const double bnorm = norm2(rhs);
    AugmentedSolve out;
    const Index max_iters = 10 * static_cast<Index>(n2) + 10;
    out.status = SolveStatus::max_iters;
    if (bnorm == 0.0) {
        out.status = SolveStatus::converged;
    }
    for (Index k = 1; k <= max_iters && out.status != SolveStatus::converged; ++k) {
        matvec(l, p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) {
            out.status = SolveStatus::breakdown;
            break;
        }
        const double alpha = rz / pq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        if (k % 50 == 0) {
            project(x);
            r = matvec(l, x);
            for (std::size_t i = 0; i < n2; ++i) {
                r[i] = rhs[i] - r[i];
            }
            project(r);
        }
        out.iters = k;
        out.rel_residual = norm2(r) / bnorm;
        if (out.rel_residual <= tol) {
            out.status = SolveStatus::converged;
            break;
        }
        z = m.Preconditioner::apply(r);
        const double rz_new = dot(r, z);
        if (!(rz_new > 0.0)) {
            out.status = SolveStatus::breakdown;
            break;
        }
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n2; ++i) {
            p[i] = z[i] + beta * p[i];
        }
    }
    project(x);
    out.x = recover_solution(x);
    return out;
}

}  // namespace pcgbench
