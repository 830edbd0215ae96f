#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pcgbench/classical.hpp"
#include "pcgbench/incomplete_cholesky.hpp"
#include "pcgbench/laplacian.hpp"
#include "pcgbench/pcg.hpp"
#include "pcgbench/problem.hpp"
#include "pcgbench/sspai.hpp"

namespace pcgbench {

struct GeneratorSpec {
    std::string kind;  ///< poisson2d | tridiag | random_sdd
    Index k = 0;
    Index n = 0;
    double density = 0.0;
    std::uint64_t seed = 0;
};

struct MatrixSource {
    std::string id;
    std::optional<std::filesystem::path> path;
    std::optional<std::string> url;
    std::optional<std::string> sha256;
    std::optional<GeneratorSpec> generate;
};

struct OrderingSpec {
    std::string label;  ///< natural | rcm | user label for file orderings
    /// Permutation file; "{id}" is replaced by the matrix id.
    std::optional<std::string> file;
};

/// External LU factor for one (matrix, ordering): L as Matrix Market and
/// diag(U) one value per line.
struct LuFactorSpec {
    std::string matrix;
    std::string ordering;
    std::filesystem::path lower;
    std::filesystem::path diag_u;
    std::string label = "lu-sym";
};

struct PrecondGrid {
    std::vector<std::string> classes;  ///< tns sgs ssor sspai ic mic laplacian lu
    std::vector<int> tns_terms{1, 2, 3, 4};
    std::vector<TnsAlpha> tns_alpha{TnsAlpha::inv_fro, TnsAlpha::inv_inf, TnsAlpha::inv_one,
                                    TnsAlpha::two_over_two_norm, TnsAlpha::unit};
    std::vector<double> ssor_omega{1.0, 1.2, 1.5, 1.8};
    std::vector<int> ssor_sweeps{1, 2};
    bool ssor_optimal_omega = true;
    std::vector<double> sspai_fill{0.5, 1.0, 2.0, 3.0};
    std::vector<double> ic_droptol{0.0, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    std::vector<double> laplacian_droptol{1e-4};
    bool laplacian_allow_lift = true;
    std::vector<LuFactorSpec> lu;
};

struct BenchmarkConfig {
    std::vector<MatrixSource> matrices;
    std::vector<OrderingSpec> orderings;
    PrecondGrid grid;
    PcgConfig solver;
    /// max_iters = max_iters_factor * n when solver.max_iters is 0.
    Index max_iters_factor = 10;
    std::filesystem::path output_dir = "bench-out";
    std::optional<std::filesystem::path> cache_dir;
    bool offline = false;
    Index jobs = 1;
    std::uint64_t seed = kDefaultSeed;
    bool direct_baseline = true;
    bool write_traces = false;
    /// Canonical JSON text of the parsed config, hashed into the manifest.
    std::string canonical;
};

/// Parses and validates a JSON config; relative paths resolve against base_dir.
BenchmarkConfig parse_config(const std::string& json_text,
                             const std::filesystem::path& base_dir = {});
BenchmarkConfig load_config(const std::filesystem::path& path);

/// One configured preconditioner of the grid, independent of the matrix.
struct PrecondSpec {
    enum class Kind { control, tns, ssor, sspai, ic, laplacian, lu };
    Kind kind = Kind::control;
    TnsConfig tns;
    SsorConfig ssor;
    SspaiConfig sspai;
    IcOptions ic;
    LaplacianPipelineConfig laplacian;
    std::optional<LuFactorSpec> lu;
    std::string label;
};

/// Expanded grid for one matrix and ordering, control first. norm_j is the
/// Jacobi iteration norm; the optimal-omega SSOR entries appear only when
/// it is below 1.
std::vector<PrecondSpec> expand_grid(const PrecondGrid& grid, const std::string& matrix_id,
                                     const std::string& ordering, double norm_j);

}  // namespace pcgbench
