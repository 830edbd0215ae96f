#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcgbench/analytics.hpp"
#include "pcgbench/harness/config.hpp"

namespace pcgbench {

inline constexpr const char* kToolkitVersion = "1.0.0";

/// "matrix|ordering|precond|seed|tol" with tol printed as %.17g.
std::string run_key(const std::string& matrix, const std::string& ordering,
                    const std::string& precond, std::uint64_t seed, double tol);
std::string run_key(const RunRecord& r);

struct RunOptions {
    bool resume = false;
    std::optional<Index> jobs;  ///< overrides the config
    std::ostream* log = nullptr;
};

struct MatrixStatus {
    std::string id;
    std::string status;  ///< ok | ingest_failure
    std::string reason;
    std::string source;
    std::string sha256;
    Index n = 0;
    Count nnz = 0;
};

struct RunSummary {
    Index solves_performed = 0;  ///< tasks executed in this invocation
    Index records_written = 0;
    Index skipped = 0;           ///< already present on resume
    std::vector<MatrixStatus> matrices;
    std::filesystem::path records_path;
    std::filesystem::path manifest_path;
};

/// Builds one grid entry on the (scaled, ordered) matrix. Exceptions from the
/// builders come back as a GenerationFailure.
BuildResult build_preconditioner(const PrecondSpec& spec, const SparseMatrix& a,
                                 std::span<const double> scale, double two_norm);

/// Loads, generates or fetches the matrix; records source and checksum.
SparseMatrix ingest_matrix(const MatrixSource& src, const BenchmarkConfig& cfg, MatrixStatus& status);

/// Sweeps matrices x orderings x grid and appends one RunRecord per run to
/// <output_dir>/records.jsonl in a fixed order (matrix, ordering, grid
/// position) regardless of the worker count, then writes manifest.json.
/// Without resume an existing records file is replaced. With resume, keys
/// already present are skipped and a torn final line is discarded.
RunSummary run_benchmark(const BenchmarkConfig& cfg, const RunOptions& opts = {});

}  // namespace pcgbench
