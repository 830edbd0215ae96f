// bench: sweep preconditioner configurations over matrices and report on the results.

#include <iostream>

#include "CLI11.hpp"
#include "pcgbench/errors.hpp"
#include "pcgbench/harness/config.hpp"
#include "pcgbench/harness/fetch.hpp"
#include "pcgbench/harness/generators.hpp"
#include "pcgbench/harness/report.hpp"
#include "pcgbench/harness/runner.hpp"
#include "pcgbench/matrix_market.hpp"

using namespace pcgbench;

int main(int argc, char** argv)
{
    CLI::App app{"Preconditioned CG benchmarking harness"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolkitVersion);

    auto* run = app.add_subcommand("run", "Run a benchmark sweep from a JSON config");
    std::string config_path;
    bool resume = false;
    Index jobs = 0;
    bool quiet = false;
    run->add_option("--config", config_path, "Benchmark config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_flag("--resume", resume, "Skip runs already present in the records file");
    run->add_option("--jobs", jobs, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
    run->add_flag("-q,--quiet", quiet, "Do not log each record");

    auto* report = app.add_subcommand("report", "Build profiles and summary tables from run records");
    std::string records_dir;
    std::string mode = "vs_control";
    std::string report_out;
    report->add_option("--records", records_dir, "Directory holding *.jsonl run records")->required();
    report->add_option("--mode", mode, "vs_control | vs_control_with_gen | vs_direct | vs_direct_with_gen")
        ->capture_default_str();
    report->add_option("--out", report_out, "Output directory (default <records>/report)");

    auto* fetch = app.add_subcommand("fetch", "Download matrices into the cache");
    std::string list_path;
    std::string cache_dir;
    bool offline = false;
    fetch->add_option("--list", list_path, "Lines of: id url [sha256]")->required()->check(CLI::ExistingFile);
    fetch->add_option("--cache", cache_dir, "Cache directory (default $PRECOND_BENCH_CACHE)");
    fetch->add_flag("--offline", offline, "Use the cache only");

    auto* gen = app.add_subcommand("gen", "Write a generated test matrix as Matrix Market");
    std::string kind;
    Index k = 0;
    Index n = 0;
    double density = 0.05;
    std::uint64_t seed = 1;
    std::string out_path;
    gen->add_option("--kind", kind, "poisson2d | tridiag | random_sdd")
        ->required()
        ->check(CLI::IsMember({"poisson2d", "tridiag", "random_sdd"}));
    gen->add_option("--k", k, "Grid side for poisson2d");
    gen->add_option("--n", n, "Dimension for tridiag and random_sdd");
    gen->add_option("--density", density, "Pair coupling probability for random_sdd")->capture_default_str();
    gen->add_option("--seed", seed, "Seed for random_sdd")->capture_default_str();
    gen->add_option("--out", out_path, "Output .mtx path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const BenchmarkConfig cfg = load_config(config_path);
            RunOptions opts;
            opts.resume = resume;
            if (jobs > 0) {
                opts.jobs = jobs;
            }
            opts.log = quiet ? nullptr : &std::cerr;
            const RunSummary s = run_benchmark(cfg, opts);
            std::cout << "records: " << s.records_path.string() << "\n"
                      << "manifest: " << s.manifest_path.string() << "\n"
                      << "solves performed: " << s.solves_performed << ", skipped: " << s.skipped << "\n";
            for (const auto& m : s.matrices) {
                if (m.status != "ok") {
                    std::cout << "ingest_failure " << m.id << ": " << m.reason << "\n";
                }
            }
        } else if (*report) {
            const auto records = load_records_dir(records_dir);
            const std::filesystem::path out =
                report_out.empty() ? std::filesystem::path(records_dir) / "report" : std::filesystem::path(report_out);
            const ReportFiles files = make_report(records, report_mode_from_string(mode), out);
            std::cout << "summary: " << files.summary_csv.string() << "\n"
                      << "best: " << files.best_csv.string() << "\n"
                      << "ratios: " << files.ratios_csv.string() << "\n"
                      << "profiles: " << files.profile_csvs.size() << " csv, " << files.profile_svgs.size()
                      << " svg\n";
        } else if (*fetch) {
            const auto dir = cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir);
            int failures = 0;
            for (const auto& e : read_fetch_list(list_path)) {
                FetchOptions fo;
                fo.offline = offline;
                fo.expected_sha256 = e.sha256;
                const FetchResult r = fetch_matrix(e.id, e.url, dir, fo);
                std::cout << e.id << ' ' << to_string(r.status) << ' '
                          << (r.ok() ? r.path.string() : r.message) << '\n';
                failures += r.ok() ? 0 : 1;
            }
            return failures == 0 ? 0 : 2;
        } else if (*gen) {
            SparseMatrix a;
            if (kind == "poisson2d") {
                if (k < 1) {
                    throw InvalidConfig("poisson2d needs --k >= 1");
                }
                a = poisson2d(k);
            } else if (kind == "tridiag") {
                a = tridiag(n);
            } else {
                a = random_sdd(n, density, seed);
            }
            write_matrix_market(out_path, a);
            std::cout << out_path << ": n=" << a.n() << " nnz=" << a.nnz() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
