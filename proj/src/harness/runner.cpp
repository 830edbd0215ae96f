#include "pcgbench/harness/runner.hpp"

#include <atomic>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pcgbench/costing.hpp"
#include "pcgbench/errors.hpp"
#include "pcgbench/harness/fetch.hpp"
#include "pcgbench/harness/generators.hpp"
#include "pcgbench/matrix_market.hpp"
#include "pcgbench/norms.hpp"
#include "pcgbench/ordering.hpp"
#include "pcgbench/scaling.hpp"

namespace pcgbench {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string run_key(const std::string& matrix, const std::string& ordering,
                    const std::string& precond, std::uint64_t seed, double tol)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", tol);
    return matrix + "|" + ordering + "|" + precond + "|" + std::to_string(seed) + "|" + buf;
}

std::string run_key(const RunRecord& r)
{
    return run_key(r.matrix_id, r.ordering_label, r.precond_label, r.seed, r.tol);
}

namespace {

std::string utc_now()
{
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string describe(const GeneratorSpec& g)
{
    if (g.kind == "poisson2d") {
        return "generated:poisson2d(k=" + std::to_string(g.k) + ")";
    }
    if (g.kind == "tridiag") {
        return "generated:tridiag(n=" + std::to_string(g.n) + ")";
    }
    return "generated:random_sdd(n=" + std::to_string(g.n) + ",density=" + format_param(g.density) +
           ",seed=" + std::to_string(g.seed) + ")";
}

std::string substitute_id(std::string pattern, const std::string& id)
{
    for (auto pos = pattern.find("{id}"); pos != std::string::npos; pos = pattern.find("{id}")) {
        pattern.replace(pos, 4, id);
    }
    return pattern;
}

std::string file_safe(const std::string& s)
{
    std::string out;
    for (const char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '-' || c == '.' || c == '_';
        out.push_back(ok ? c : '_');
    }
    return out;
}

/// Everything a run on one (matrix, ordering) needs; read-only during the sweep.
struct OrderedProblem {
    std::string ordering;
    SparseMatrix a;
    Vector b;
    Vector x_star;
    Vector scale;
    std::optional<Count> direct_work;
    std::vector<PrecondSpec> specs;
};

struct PreparedMatrix {
    std::string id;
    Index n = 0;
    double two_norm = 0.0;
    std::vector<OrderedProblem> problems;
};

struct Task {
    std::size_t problem = 0;
    std::size_t spec = 0;
};

/// Drops a torn trailing line and returns the complete records.
std::vector<RunRecord> load_for_resume(const fs::path& path)
{
    std::vector<RunRecord> out;
    std::error_code ec;
    if (!fs::exists(path, ec)) {
        return out;
    }
    std::string content;
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        content = ss.str();
    }
    const auto last_nl = content.find_last_of('\n');
    const std::size_t keep = last_nl == std::string::npos ? 0 : last_nl + 1;
    if (keep != content.size()) {
        fs::resize_file(path, keep);
        content.resize(keep);
    }
    std::istringstream in(content);
    return read_records(in);
}

RunRecord execute(const PreparedMatrix& pm, const OrderedProblem& op, const PrecondSpec& spec,
                  const BenchmarkConfig& cfg, const fs::path& trace_dir)
{
    RunRecord rec;
    rec.matrix_id = pm.id;
    rec.ordering_label = op.ordering;
    rec.precond_label = spec.label;
    rec.precond_class = precond_class_of(spec.label);
    rec.seed = cfg.seed;
    rec.tol = cfg.solver.rel_res_tol;
    rec.direct_work = op.direct_work;

    const BuildResult built = build_preconditioner(spec, op.a, op.scale, pm.two_norm);

    if (const auto* failure = std::get_if<GenerationFailure>(&built)) {
        rec.status = RunStatus::generation_failure;
        std::string reason = failure->reason;
        if (failure->column >= 0) {
            char buf[96];
            std::snprintf(buf, sizeof buf, " (column %lld, value %.17g)",
                          static_cast<long long>(failure->column), failure->value);
            reason += buf;
        }
        rec.failure_reason = reason;
        return rec;
    }
    const Preconditioner& m = *std::get<PreconditionerPtr>(built);
    rec.generation_cost = m.generation_cost();
    rec.apply_cost = m.apply_cost();
    if (const auto* tri = dynamic_cast<const TriangularPairPreconditioner*>(&m)) {
        const Count tril = op.a.lower().nnz();
        rec.fill_ratio = tril > 0 ? static_cast<double>(tri->lower().nnz()) / static_cast<double>(tril) : 0.0;
    }

    PcgConfig pc = cfg.solver;
    if (pc.max_iters <= 0) {
        pc.max_iters = cfg.max_iters_factor * pm.n;
    }
    pc.two_norm_estimate = pm.two_norm;
    try {
        const SolveTrace trace = pcg(op.a, op.b, m, pc, std::span<const double>(op.x_star));
        rec.iters = trace.iters;
        rec.final_rel_residual = trace.final_rel_residual;
        switch (trace.status) {
        case SolveStatus::converged:
            rec.status = RunStatus::converged;
            rec.work_to_tol = trace.work_to_tol;
            break;
        case SolveStatus::max_iters:
            rec.status = RunStatus::max_iters;
            break;
        case SolveStatus::breakdown:
            rec.status = RunStatus::breakdown;
            break;
        }
        if (spec.kind == PrecondSpec::Kind::control) {
            // The control baseline is the work actually spent, converged or not.
            rec.control_work = trace.work_to_tol;
        }
        if (!trace_dir.empty()) {
            std::ofstream out(trace_dir / (file_safe(pm.id + "__" + op.ordering + "__" + spec.label) +
                                           ".jsonl"));
            write_trace_jsonl(out, trace);
        }
    } catch (const std::exception& e) {
        rec.status = RunStatus::breakdown;
        rec.failure_reason = e.what();
    }
    return rec;
}

PreparedMatrix prepare(const MatrixSource& src, const BenchmarkConfig& cfg, MatrixStatus& status)
{
    PreparedMatrix pm;
    pm.id = src.id;
    const SparseMatrix raw = ingest_matrix(src, cfg, status);
    const ScaledSystem sc = scale_and_symmetrize(raw);
    pm.n = sc.matrix.n();
    const SeededProblem prob = generate_problem(sc.matrix, cfg.seed);
    pm.two_norm = estimate_two_norm(sc.matrix);
    double norm_j = -1.0;
    try {
        norm_j = estimate_jacobi_norm(sc.matrix);
    } catch (const std::exception&) {
        norm_j = -1.0;
    }
    for (const auto& ord : cfg.orderings) {
        Permutation p;
        if (ord.file) {
            p = load_permutation(substitute_id(*ord.file, src.id), pm.n, ord.label);
        } else if (ord.label == "rcm") {
            p = rcm_order(sc.matrix);
        } else {
            p = Permutation::identity(pm.n);
        }
        OrderedProblem op;
        op.ordering = ord.label;
        op.a = permute_symmetric(sc.matrix, p);
        op.x_star = permute_vector(prob.x_star, p);
        op.b = matvec(op.a, op.x_star);
        op.scale = permute_vector(sc.scale, p);
        if (cfg.direct_baseline) {
            op.direct_work = direct_cost_baseline(op.a);
        }
        op.specs = expand_grid(cfg.grid, src.id, ord.label, norm_j);
        pm.problems.push_back(std::move(op));
    }
    return pm;
}

}  // namespace

BuildResult build_preconditioner(const PrecondSpec& spec, const SparseMatrix& a,
                                 std::span<const double> scale, double two_norm)
{
    try {
        switch (spec.kind) {
        case PrecondSpec::Kind::control:
            return build_jacobi_control(a.n());
        case PrecondSpec::Kind::tns:
            return build_tns(a, spec.tns, two_norm);
        case PrecondSpec::Kind::ssor:
            return build_ssor(a, spec.ssor);
        case PrecondSpec::Kind::sspai:
            return PreconditionerPtr(build_sspai(a, spec.sspai));
        case PrecondSpec::Kind::ic:
            return build_ic_preconditioner(a, spec.ic);
        case PrecondSpec::Kind::laplacian:
            return build_laplacian_pipeline(a, scale, spec.laplacian);
        case PrecondSpec::Kind::lu: {
            if (!spec.lu) {
                return GenerationFailure{"lu entry without factor files"};
            }
            const SparseMatrix lower = read_matrix_market(spec.lu->lower);
            const Vector diag_u = read_vector_file(spec.lu->diag_u);
            if (lower.n() != a.n()) {
                throw DimensionMismatch("LU factor dimension differs from the matrix");
            }
            return symmetrize_lu(lower, diag_u, spec.label);
        }
        }
    } catch (const std::exception& e) {
        return GenerationFailure{e.what()};
    }
    return GenerationFailure{"unknown preconditioner kind"};
}

SparseMatrix ingest_matrix(const MatrixSource& src, const BenchmarkConfig& cfg, MatrixStatus& status)
{
    status.id = src.id;
    SparseMatrix a;
    if (src.generate) {
        const auto& g = *src.generate;
        status.source = describe(g);
        if (g.kind == "poisson2d") {
            a = poisson2d(g.k);
        } else if (g.kind == "tridiag") {
            a = tridiag(g.n);
        } else {
            a = random_sdd(g.n, g.density, g.seed);
        }
    } else if (src.path) {
        status.source = src.path->string();
        status.sha256 = sha256_file(*src.path);
        if (src.sha256 && *src.sha256 != status.sha256) {
            throw ParseError("checksum mismatch for " + src.path->string());
        }
        a = read_matrix_market(*src.path);
    } else {
        status.source = *src.url;
        FetchOptions fo;
        fo.offline = cfg.offline;
        fo.expected_sha256 = src.sha256;
        const FetchResult fr =
            fetch_matrix(src.id, *src.url, cfg.cache_dir.value_or(default_cache_dir()), fo);
        status.sha256 = fr.sha256;
        if (!fr.ok()) {
            throw ParseError(std::string("fetch ") + to_string(fr.status) + ": " + fr.message);
        }
        a = read_matrix_market(fr.path);
    }
    status.n = a.n();
    status.nnz = a.nnz();
    return a;
}

RunSummary run_benchmark(const BenchmarkConfig& cfg, const RunOptions& opts)
{
    RunSummary summary;
    const std::string started = utc_now();
    fs::create_directories(cfg.output_dir);
    summary.records_path = cfg.output_dir / "records.jsonl";
    summary.manifest_path = cfg.output_dir / "manifest.json";
    fs::path trace_dir;
    if (cfg.write_traces) {
        trace_dir = cfg.output_dir / "traces";
        fs::create_directories(trace_dir);
    }

    std::set<std::string> done;
    std::map<std::string, Count> control_work;  // "matrix|ordering" -> work
    if (opts.resume) {
        for (const auto& r : load_for_resume(summary.records_path)) {
            done.insert(run_key(r));
            if (r.precond_label == "control") {
                control_work[r.matrix_id + "|" + r.ordering_label] = r.control_work;
            }
        }
    }
    std::ofstream out(summary.records_path,
                      opts.resume ? std::ios::app | std::ios::binary : std::ios::trunc | std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + summary.records_path.string());
    }

    const Index jobs = std::max<Index>(1, opts.jobs.value_or(cfg.jobs));
    for (const auto& src : cfg.matrices) {
        MatrixStatus status;
        status.id = src.id;
        PreparedMatrix pm;
        try {
            pm = prepare(src, cfg, status);
            status.status = "ok";
        } catch (const std::exception& e) {
            status.status = "ingest_failure";
            status.reason = e.what();
            summary.matrices.push_back(status);
            if (opts.log) {
                *opts.log << "ingest_failure " << src.id << ": " << e.what() << '\n';
            }
            continue;
        }
        summary.matrices.push_back(status);

        std::vector<Task> tasks;
        for (std::size_t p = 0; p < pm.problems.size(); ++p) {
            for (std::size_t s = 0; s < pm.problems[p].specs.size(); ++s) {
                const auto key = run_key(pm.id, pm.problems[p].ordering, pm.problems[p].specs[s].label,
                                         cfg.seed, cfg.solver.rel_res_tol);
                if (done.contains(key)) {
                    ++summary.skipped;
                } else {
                    tasks.push_back({p, s});
                }
            }
        }

        std::vector<std::optional<RunRecord>> results(tasks.size());
        std::size_t write_pos = 0;
        std::mutex mu;
        std::atomic<std::size_t> next{0};
        auto emit_ready = [&]() {
            while (write_pos < results.size() && results[write_pos]) {
                RunRecord& r = *results[write_pos];
                const std::string ck = r.matrix_id + "|" + r.ordering_label;
                if (r.precond_label == "control") {
                    control_work[ck] = r.control_work;
                } else {
                    r.control_work = control_work.at(ck);
                }
                out << to_json_line(r) << '\n';
                out.flush();
                done.insert(run_key(r));
                ++summary.records_written;
                if (opts.log) {
                    *opts.log << to_string(r.status) << ' ' << run_key(r) << '\n';
                }
                results[write_pos].reset();
                ++write_pos;
            }
        };
        auto worker = [&]() {
            for (std::size_t i = next++; i < tasks.size(); i = next++) {
                const auto& op = pm.problems[tasks[i].problem];
                RunRecord r = execute(pm, op, op.specs[tasks[i].spec], cfg, trace_dir);
                std::lock_guard<std::mutex> lock(mu);
                results[i] = std::move(r);
                ++summary.solves_performed;
                emit_ready();
            }
        };
        const auto nthreads = static_cast<std::size_t>(std::min<Index>(jobs, static_cast<Index>(tasks.size())));
        if (nthreads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (std::size_t t = 0; t < nthreads; ++t) {
                pool.emplace_back(worker);
            }
            for (auto& t : pool) {
                t.join();
            }
        }
    }
    out.close();

    ordered_json manifest;
    manifest["toolkit"] = "pcgbench";
    manifest["version"] = kToolkitVersion;
    manifest["config_sha256"] = sha256_bytes(cfg.canonical);
    manifest["seed"] = cfg.seed;
    manifest["started_at"] = started;
    manifest["finished_at"] = utc_now();
    manifest["resume"] = opts.resume;
    manifest["jobs"] = jobs;
    manifest["solves_performed"] = summary.solves_performed;
    manifest["skipped"] = summary.skipped;
    ordered_json mats = ordered_json::array();
    for (const auto& m : summary.matrices) {
        ordered_json e;
        e["id"] = m.id;
        e["status"] = m.status;
        if (!m.reason.empty()) {
            e["reason"] = m.reason;
        }
        e["source"] = m.source;
        if (!m.sha256.empty()) {
            e["sha256"] = m.sha256;
        }
        e["n"] = m.n;
        e["nnz"] = m.nnz;
        mats.push_back(e);
    }
    manifest["matrices"] = mats;
    ordered_json runs = ordered_json::array();
    {
        std::ifstream in(summary.records_path);
        for (const auto& r : read_records(in)) {
            runs.push_back({{"key", run_key(r)}, {"status", to_string(r.status)}});
        }
    }
    manifest["runs"] = runs;
    manifest["records_sha256"] = sha256_file(summary.records_path);
    std::ofstream mf(summary.manifest_path, std::ios::trunc);
    mf << manifest.dump(2) << '\n';
    return summary;
}

}  // namespace pcgbench
