#include "pcgbench/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "pcgbench/errors.hpp"

namespace pcgbench {

using nlohmann::ordered_json;

const char* to_string(RunStatus s)
{
    switch (s) {
    case RunStatus::converged:
        return "converged";
    case RunStatus::max_iters:
        return "max_iters";
    case RunStatus::generation_failure:
        return "generation_failure";
    case RunStatus::breakdown:
        return "breakdown";
    }
    return "unknown";
}

RunStatus run_status_from_string(const std::string& s)
{
    if (s == "converged") {
        return RunStatus::converged;
    }
    if (s == "max_iters") {
        return RunStatus::max_iters;
    }
    if (s == "generation_failure") {
        return RunStatus::generation_failure;
    }
    if (s == "breakdown") {
        return RunStatus::breakdown;
    }
    throw ParseError("unknown run status '" + s + "'");
}

std::string precond_class_of(const std::string& label)
{
    return label.substr(0, label.find('('));
}

std::string to_json_line(const RunRecord& r)
{
    ordered_json j;
    j["matrix_id"] = r.matrix_id;
    j["ordering_label"] = r.ordering_label;
    j["precond_label"] = r.precond_label;
    j["precond_class"] = r.precond_class;
    j["status"] = to_string(r.status);
    j["iters"] = r.iters;
    if (r.work_to_tol) {
        j["work_to_tol"] = *r.work_to_tol;
    }
    j["generation_cost"] = r.generation_cost;
    if (r.apply_cost) {
        j["apply_cost"] = *r.apply_cost;
    }
    j["control_work"] = r.control_work;
    if (r.direct_work) {
        j["direct_work"] = *r.direct_work;
    }
    j["seed"] = r.seed;
    j["tol"] = r.tol;
    if (r.final_rel_residual) {
        j["final_relres"] = *r.final_rel_residual;
    }
    if (r.fill_ratio) {
        j["fill_ratio"] = *r.fill_ratio;
    }
    if (r.failure_reason) {
        j["failure_reason"] = *r.failure_reason;
    }
    return j.dump();
}

RunRecord record_from_json_line(const std::string& line)
{
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bad record line: ") + e.what());
    }
    try {
        RunRecord r;
        r.matrix_id = j.at("matrix_id").get<std::string>();
        r.ordering_label = j.at("ordering_label").get<std::string>();
        r.precond_label = j.at("precond_label").get<std::string>();
        r.precond_class = j.contains("precond_class") ? j["precond_class"].get<std::string>()
                                                      : precond_class_of(r.precond_label);
        r.status = run_status_from_string(j.at("status").get<std::string>());
        r.iters = j.value("iters", Index{0});
        if (j.contains("work_to_tol")) {
            r.work_to_tol = j["work_to_tol"].get<Count>();
        }
        r.generation_cost = j.value("generation_cost", Count{0});
        if (j.contains("apply_cost")) {
            r.apply_cost = j["apply_cost"].get<Count>();
        }
        r.control_work = j.value("control_work", Count{0});
        if (j.contains("direct_work")) {
            r.direct_work = j["direct_work"].get<Count>();
        }
        r.seed = j.value("seed", std::uint64_t{0});
        r.tol = j.value("tol", 0.0);
        if (j.contains("final_relres")) {
            r.final_rel_residual = j["final_relres"].get<double>();
        }
        if (j.contains("fill_ratio")) {
            r.fill_ratio = j["fill_ratio"].get<double>();
        }
        if (j.contains("failure_reason")) {
            r.failure_reason = j["failure_reason"].get<std::string>();
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad record fields: ") + e.what());
    }
}

std::vector<RunRecord> read_records(std::istream& in)
{
    std::vector<RunRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        out.push_back(record_from_json_line(line));
    }
    return out;
}

double work_ratio(const RunRecord& r, const ProfileOptions& opts)
{
    double baseline = 0.0;
    if (opts.baseline == Baseline::control) {
        if (r.control_work <= 0) {
            throw std::invalid_argument("record " + r.matrix_id + "/" + r.precond_label +
                                        " has no control baseline");
        }
        baseline = static_cast<double>(r.control_work);
    } else {
        if (!r.direct_work) {
            throw std::invalid_argument("record " + r.matrix_id + "/" + r.precond_label +
                                        " has no direct baseline");
        }
        baseline = static_cast<double>(*r.direct_work);
    }
    if (r.failed() || !r.work_to_tol) {
        return 0.0;
    }
    Count cost = *r.work_to_tol;
    if (opts.include_generation) {
        cost += r.generation_cost;
    }
    if (cost <= 0) {
        throw std::invalid_argument("record " + r.matrix_id + "/" + r.precond_label +
                                    " converged with nonpositive work");
    }
    return baseline / static_cast<double>(cost);
}

double fraction_at_least(std::span<const double> ratios, double threshold)
{
    if (ratios.empty()) {
        return 0.0;
    }
    const auto hits = std::count_if(ratios.begin(), ratios.end(),
                                    [threshold](double r) { return r >= threshold; });
    return static_cast<double>(hits) / static_cast<double>(ratios.size());
}

std::vector<double> profile_grid(Index points)
{
    if (points < 2) {
        throw std::invalid_argument("profile grid needs at least 2 points");
    }
    std::vector<double> x(static_cast<std::size_t>(points));
    const double span = kProfileLog2Max - kProfileLog2Min;
    for (Index i = 0; i < points; ++i) {
        const double t = kProfileLog2Min + span * static_cast<double>(i) /
                                               static_cast<double>(points - 1);
        x[i] = std::exp2(t);
    }
    x.front() = std::exp2(kProfileLog2Min);
    x.back() = std::exp2(kProfileLog2Max);
    return x;
}

PerformanceProfile profile_from_ratios(std::vector<double> ratios, Index points, std::string label)
{
    PerformanceProfile p;
    p.label = std::move(label);
    p.x = profile_grid(points);
    p.y.reserve(p.x.size());
    for (const double t : p.x) {
        p.y.push_back(fraction_at_least(ratios, t));
    }
    p.ratios = std::move(ratios);
    return p;
}

PerformanceProfile build_profile(std::span<const RunRecord> records, const ProfileOptions& opts,
                                 std::string label)
{
    std::vector<double> ratios;
    ratios.reserve(records.size());
    for (const auto& r : records) {
        ratios.push_back(work_ratio(r, opts));
    }
    return profile_from_ratios(std::move(ratios), opts.points, std::move(label));
}

PerformanceProfile sample_profile(const std::function<double(double)>& f_of_log2x, Index points)
{
    PerformanceProfile p;
    p.x = profile_grid(points);
    for (const double x : p.x) {
        p.y.push_back(f_of_log2x(std::log2(x)));
    }
    return p;
}

double auc(const PerformanceProfile& profile)
{
    const auto& x = profile.x;
    const auto& y = profile.y;
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("profile needs matching x/y samples");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        sum += 0.5 * (y[i] + y[i + 1]) * (std::log2(x[i + 1]) - std::log2(x[i]));
    }
    return sum / (kProfileLog2Max - kProfileLog2Min);
}

SummaryStats summary_stats(std::span<const RunRecord> records, const ProfileOptions& opts)
{
    if (records.empty()) {
        throw std::invalid_argument("summary_stats: empty record set");
    }
    SummaryStats s;
    s.count = static_cast<Index>(records.size());
    std::vector<double> ratios;
    double log_sum = 0.0;
    Index generated = 0;
    for (const auto& r : records) {
        const double ratio = work_ratio(r, opts);
        ratios.push_back(ratio);
        const double g = r.failed() ? 0.25 : std::min(ratio, 128.0);
        log_sum += std::log(g);
        if (r.status != RunStatus::generation_failure) {
            ++generated;
        }
    }
    const double n = static_cast<double>(records.size());
    s.geo_mean = std::exp(log_sum / n);
    s.success_rate = static_cast<double>(generated) / n;
    s.parity = fraction_at_least(ratios, 1.0);
    s.ge2x = fraction_at_least(ratios, 2.0);
    s.ge4x = fraction_at_least(ratios, 4.0);
    s.ge8x = fraction_at_least(ratios, 8.0);
    s.auc = auc(profile_from_ratios(std::move(ratios), opts.points));
    return s;
}

BestSelection select_best(const ConfigRecords& configs, const ProfileOptions& opts)
{
    if (configs.empty()) {
        throw std::invalid_argument("select_best: no configurations");
    }
    std::set<std::string> matrices;
    for (const auto& [label, recs] : configs) {
        for (const auto& r : recs) {
            matrices.insert(r.matrix_id);
        }
    }
    // label -> matrix -> ratio
    std::map<std::string, std::map<std::string, double>> table;
    for (const auto& [label, recs] : configs) {
        auto& row = table[label];
        for (const auto& m : matrices) {
            row[m] = 0.0;
        }
        for (const auto& r : recs) {
            row[r.matrix_id] = std::max(row[r.matrix_id], work_ratio(r, opts));
        }
    }

    BestSelection best;
    bool first = true;
    for (const auto& [label, row] : table) {  // std::map iterates labels in ascending order
        std::vector<double> ratios;
        for (const auto& [m, v] : row) {
            ratios.push_back(v);
        }
        PerformanceProfile p = profile_from_ratios(std::move(ratios), opts.points, label);
        const double a = auc(p);
        if (first || a > best.single_best_auc) {
            best.single_best_auc = a;
            best.single_best_label = label;
            best.single_best = std::move(p);
            first = false;
        }
    }

    std::vector<double> tuned;
    for (const auto& m : matrices) {
        double top = -1.0;
        std::string choice;
        for (const auto& [label, row] : table) {
            if (row.at(m) > top) {
                top = row.at(m);
                choice = label;
            }
        }
        tuned.push_back(top);
        best.tuned_choice[m] = choice;
    }
    best.tuned_best = profile_from_ratios(std::move(tuned), opts.points, "tuned-best");
    return best;
}

}  // namespace pcgbench
