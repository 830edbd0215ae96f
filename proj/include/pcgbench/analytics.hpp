#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcgbench/sparse_matrix.hpp"

namespace pcgbench {

enum class RunStatus { converged, max_iters, generation_failure, breakdown };

const char* to_string(RunStatus s);
RunStatus run_status_from_string(const std::string& s);

/// One solve (or failed build) of one preconditioner configuration on one
/// matrix under one ordering.
struct RunRecord {
    std::string matrix_id;
    std::string ordering_label;
    std::string precond_label;
    std::string precond_class;  ///< label up to the first '('
    RunStatus status = RunStatus::converged;
    Index iters = 0;
    std::optional<Count> work_to_tol;  ///< absent on generation failure
    Count generation_cost = 0;
    std::optional<Count> apply_cost;   ///< absent on generation failure
    Count control_work = 0;            ///< control run, same matrix and ordering
    std::optional<Count> direct_work;  ///< exact-Cholesky baseline, same ordering
    std::uint64_t seed = 0;
    double tol = 0.0;
    std::optional<double> final_rel_residual;
    std::optional<double> fill_ratio;  ///< nnz(L) / nnz(tril(A)) for factorizations
    std::optional<std::string> failure_reason;

    bool failed() const { return status != RunStatus::converged; }
};

/// Text before the first '(' ("ic(droptol=1e-06)" -> "ic").
std::string precond_class_of(const std::string& label);

/// Stable single-line JSON (fixed key order, absent optionals omitted).
std::string to_json_line(const RunRecord& r);
RunRecord record_from_json_line(const std::string& line);
std::vector<RunRecord> read_records(std::istream& in);

enum class Baseline { control, direct };

struct ProfileOptions {
    Baseline baseline = Baseline::control;
    bool include_generation = false;
    Index points = 512;
};

inline constexpr double kProfileLog2Min = -2.0;
inline constexpr double kProfileLog2Max = 7.0;

/// baseline / (work_to_tol + [include_generation] generation_cost); 0 for
/// any failed record. Throws std::invalid_argument if the baseline is missing.
double work_ratio(const RunRecord& r, const ProfileOptions& opts);

/// Sampled curve y(x) = fraction of problems whose ratio is >= x, for x on a
/// log2-uniform grid spanning [2^-2, 2^7].
struct PerformanceProfile {
    std::string label;
    std::vector<double> ratios;
    std::vector<double> x;
    std::vector<double> y;
};

/// Fraction of ratios >= threshold.
double fraction_at_least(std::span<const double> ratios, double threshold);

/// Grid points x_i = 2^(-2 + 9 i / (points - 1)).
std::vector<double> profile_grid(Index points = 512);

PerformanceProfile profile_from_ratios(std::vector<double> ratios, Index points = 512,
                                       std::string label = {});
PerformanceProfile build_profile(std::span<const RunRecord> records, const ProfileOptions& opts,
                                 std::string label = {});
/// Profile whose samples are f(log2 x) on the standard grid; used for fixtures.
PerformanceProfile sample_profile(const std::function<double(double)>& f_of_log2x,
                                  Index points = 512);

/// Composite trapezoid rule in log2 x over [2^-2, 2^7], divided by 9.
double auc(const PerformanceProfile& profile);

struct SummaryStats {
    double auc = 0.0;
    double geo_mean = 0.0;
    double success_rate = 0.0;
    double parity = 0.0;
    double ge2x = 0.0;
    double ge4x = 0.0;
    double ge8x = 0.0;
    Index count = 0;
};

/// Failures enter the geometric mean as 1/4 and every ratio is capped at
/// 128 there; the threshold fractions and AUC use the uncapped ratios with
/// failures at 0. Throws std::invalid_argument on an empty set.
SummaryStats summary_stats(std::span<const RunRecord> records, const ProfileOptions& opts);

/// Configurations of one preconditioner family, each mapped to its records.
using ConfigRecords = std::map<std::string, std::vector<RunRecord>>;

struct BestSelection {
    std::string single_best_label;
    double single_best_auc = 0.0;
    PerformanceProfile single_best;
    PerformanceProfile tuned_best;
    /// matrix id -> label chosen by the tuned selection.
    std::map<std::string, std::string> tuned_choice;
};

/// single_best = largest AUC (ties to the smallest label); tuned_best takes
/// the largest ratio per matrix across all configurations (ties to the
/// smallest label). The problem set is the union of matrices; a matrix
/// missing from a configuration counts as a failure there.
BestSelection select_best(const ConfigRecords& configs, const ProfileOptions& opts);

}  // namespace pcgbench
