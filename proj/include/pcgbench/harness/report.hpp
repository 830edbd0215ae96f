#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pcgbench/analytics.hpp"

namespace pcgbench {

enum class ReportMode { vs_control, vs_control_with_gen, vs_direct, vs_direct_with_gen };

const char* to_string(ReportMode m);
/// Throws InvalidConfig on an unknown name.
ReportMode report_mode_from_string(const std::string& s);
ProfileOptions profile_options(ReportMode m);

/// Reads every *.jsonl file directly inside dir, in file-name order.
std::vector<RunRecord> load_records_dir(const std::filesystem::path& dir);

struct ReportFiles {
    std::filesystem::path summary_csv;
    std::filesystem::path best_csv;
    std::filesystem::path ratios_csv;
    std::filesystem::path notes;
    std::vector<std::filesystem::path> profile_csvs;
    std::vector<std::filesystem::path> profile_svgs;
};

/// Writes, under out_dir:
///   summary_<mode>.csv  one row per (ordering, configuration)
///   best_<mode>.csv     single-best and tuned-best per (ordering, class)
///   ratios_<mode>.csv   per-record ratios with fill data
///   profiles/<mode>_<ordering>_<class>.{csv,svg}
///   notes_<mode>.txt    configurations flagged as equivalent to the control
/// Throws std::invalid_argument when a direct mode is requested and any
/// record lacks a direct baseline, and on an empty record set.
ReportFiles make_report(const std::vector<RunRecord>& records, ReportMode mode,
                        const std::filesystem::path& out_dir);

/// Minimal SVG line plot of profiles on the log2 threshold axis.
std::string profiles_svg(const std::vector<PerformanceProfile>& curves, const std::string& title);

}  // namespace pcgbench
