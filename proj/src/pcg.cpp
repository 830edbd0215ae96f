#include "pcgbench/pcg.hpp"

#include <cmath>
#include "json.hpp"
#include <ostream>

#include "pcgbench/costing.hpp"
#include "pcgbench/errors.hpp"
#include "pcgbench/norms.hpp"

namespace pcgbench {

const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged:
        return "converged";
    case SolveStatus::max_iters:
        return "max_iters";
    case SolveStatus::breakdown:
        return "breakdown";
    }
    return "unknown";
}

namespace {

double a_norm_error(const SparseMatrix& a, std::span<const double> x, std::span<const double> x_star,
                    Vector& scratch_e, Vector& scratch_ae)
{
    for (std::size_t i = 0; i < x.size(); ++i) {
        scratch_e[i] = x[i] - x_star[i];
    }
    matvec(a, scratch_e, scratch_ae);
    return std::sqrt(std::max(0.0, dot(scratch_e, scratch_ae)));
}

}  // namespace

SolveTrace pcg(const SparseMatrix& a, std::span<const double> b, const Preconditioner& m,
               const PcgConfig& cfg, std::optional<std::span<const double>> x_star)
{
    const Index n = a.n();
    if (static_cast<Index>(b.size()) != n || m.dim() != n) {
        throw DimensionMismatch("pcg: A, b and M dimensions differ");
    }
    if (x_star && static_cast<Index>(x_star->size()) != n) {
        throw DimensionMismatch("pcg: x_star length differs from n");
    }
    if (!(cfg.rel_res_tol > 0.0)) {
        throw InvalidConfig("pcg: rel_res_tol must be positive");
    }
    if (cfg.record_every < 1) {
        throw InvalidConfig("pcg: record_every must be >= 1");
    }
    const Index max_iters = cfg.max_iters > 0 ? cfg.max_iters : 10 * n;
    double two_norm = cfg.two_norm_estimate;
    if (cfg.track_nrbe && !(two_norm > 0.0)) {
        two_norm = estimate_two_norm(a);
    }

    SolveTrace trace;
    trace.apply_cost = m.apply_cost();
    trace.x.assign(static_cast<std::size_t>(n), 0.0);
    Vector& x = trace.x;
    Vector r(b.begin(), b.end());
    Vector z(static_cast<std::size_t>(n));
    Vector p(static_cast<std::size_t>(n));
    Vector q(static_cast<std::size_t>(n));
    Vector true_r(static_cast<std::size_t>(n));
    Vector e_scratch;
    Vector ae_scratch;
    if (x_star) {
        e_scratch.resize(static_cast<std::size_t>(n));
        ae_scratch.resize(static_cast<std::size_t>(n));
    }

    const double bnorm = norm2(b);
    const Count per_iter = iteration_work(n, a.nnz(), m.apply_cost());
    Count work = m.apply_cost();

    auto record = [&](Index k, double true_res, double rec_res) {
        TraceRecord rec;
        rec.iter = k;
        rec.rel_residual = true_res;
        rec.rel_residual_recursive = rec_res;
        rec.cumulative_work = work;
        if (cfg.track_nrbe) {
            const double denom = two_norm * norm2(x) + bnorm;
            rec.nrbe = denom > 0.0 ? true_res * bnorm / denom : 0.0;
        }
        if (x_star) {
            rec.error_a_norm = a_norm_error(a, x, *x_star, e_scratch, ae_scratch);
        }
        trace.records.push_back(rec);
    };
    auto finish = [&](SolveStatus status, Index k, double res) {
        trace.status = status;
        trace.iters = k;
        trace.work_to_tol = work;
        trace.final_rel_residual = res;
        if (trace.records.empty() || trace.records.back().iter != k) {
            record(k, res, bnorm > 0.0 ? norm2(r) / bnorm : 0.0);
        }
        trace.final_error_vs_xstar = trace.records.back().error_a_norm;
        return trace;
    };

    if (bnorm == 0.0) {
        record(0, 0.0, 0.0);
        return finish(SolveStatus::converged, 0, 0.0);
    }

    m.apply(r, z);
    p = z;
    double rz = dot(r, z);
    record(0, 1.0, 1.0);
    if (!(rz > 0.0)) {
        return finish(SolveStatus::breakdown, 0, 1.0);
    }

    for (Index k = 1; k <= max_iters; ++k) {
        matvec(a, p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) {
            return finish(SolveStatus::breakdown, k - 1, trace.records.back().rel_residual);
        }
        const double alpha = rz / pq;
        trace.alphas.push_back(alpha);
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        work += per_iter;

        // Uncharged check on the true residual.
        matvec(a, x, true_r);
        for (Index i = 0; i < n; ++i) {
            true_r[i] = b[i] - true_r[i];
        }
        const double true_res = norm2(true_r) / bnorm;
        const double rec_res = norm2(r) / bnorm;
        if (true_res <= cfg.rel_res_tol) {
            record(k, true_res, rec_res);
            return finish(SolveStatus::converged, k, true_res);
        }

        m.apply(r, z);
        const double rz_new = dot(r, z);
        if (k % cfg.record_every == 0) {
            record(k, true_res, rec_res);
        }
        if (!(rz_new > 0.0)) {
            return finish(SolveStatus::breakdown, k, true_res);
        }
        const double beta = rz_new / rz;
        trace.betas.push_back(beta);
        rz = rz_new;
        for (Index i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
        if (k == max_iters) {
            return finish(SolveStatus::max_iters, k, true_res);
        }
    }
    return finish(SolveStatus::max_iters, max_iters, trace.records.back().rel_residual);
}

void write_trace_jsonl(std::ostream& out, const SolveTrace& trace)
{
    for (const auto& rec : trace.records) {
        nlohmann::ordered_json j;
        j["iter"] = rec.iter;
        j["relres"] = rec.rel_residual;
        j["nrbe"] = rec.nrbe;
        j["work"] = rec.cumulative_work;
        out << j.dump() << '\n';
    }
}

}  // namespace pcgbench
