#include "pcgbench/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pcgbench/classical.hpp"
#include "pcgbench/errors.hpp"

namespace pcgbench {

namespace fs = std::filesystem;

const char* to_string(ReportMode m)
{
    switch (m) {
    case ReportMode::vs_control:
        return "vs_control";
    case ReportMode::vs_control_with_gen:
        return "vs_control_with_gen";
    case ReportMode::vs_direct:
        return "vs_direct";
    case ReportMode::vs_direct_with_gen:
        return "vs_direct_with_gen";
    }
    return "unknown";
}

ReportMode report_mode_from_string(const std::string& s)
{
    for (const auto m : {ReportMode::vs_control, ReportMode::vs_control_with_gen, ReportMode::vs_direct,
                         ReportMode::vs_direct_with_gen}) {
        if (s == to_string(m)) {
            return m;
        }
    }
    throw InvalidConfig("unknown report mode '" + s +
                        "' (vs_control, vs_control_with_gen, vs_direct, vs_direct_with_gen)");
}

ProfileOptions profile_options(ReportMode m)
{
    ProfileOptions o;
    o.baseline = (m == ReportMode::vs_direct || m == ReportMode::vs_direct_with_gen) ? Baseline::direct
                                                                                     : Baseline::control;
    o.include_generation = m == ReportMode::vs_control_with_gen || m == ReportMode::vs_direct_with_gen;
    return o;
}

std::vector<RunRecord> load_records_dir(const fs::path& dir)
{
    if (!fs::is_directory(dir)) {
        throw ParseError("records directory not found: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<RunRecord> out;
    for (const auto& f : files) {
        std::ifstream in(f);
        auto recs = read_records(in);
        out.insert(out.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    return out;
}

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    return out + "\"";
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

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out.push_back(c);
        }
    }
    return out;
}

std::ofstream open_out(const fs::path& p)
{
    std::ofstream out(p, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    return out;
}

}  // namespace

std::string profiles_svg(const std::vector<PerformanceProfile>& curves, const std::string& title)
{
    const double w = 640;
    const double h = 400;
    const double left = 60;
    const double right = 170;
    const double top = 40;
    const double bottom = 50;
    const double pw = w - left - right;
    const double ph = h - top - bottom;
    auto sx = [&](double x) {
        return left + (std::log2(x) - kProfileLog2Min) / (kProfileLog2Max - kProfileLog2Min) * pw;
    };
    auto sy = [&](double y) { return top + (1.0 - y) * ph; };
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << left + pw / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
      << xml_escape(title) << "</text>\n";
    s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int e = static_cast<int>(kProfileLog2Min); e <= static_cast<int>(kProfileLog2Max); ++e) {
        const double x = sx(std::exp2(e));
        s << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + ph
          << "\" stroke=\"#ddd\"/>\n";
        s << "<text x=\"" << x << "\" y=\"" << top + ph + 15 << "\" text-anchor=\"middle\">"
          << num(std::exp2(e)) << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double y = sy(k / 4.0);
        s << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
          << "\" stroke=\"#ddd\"/>\n";
        s << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << num(k / 4.0)
          << "</text>\n";
    }
    s << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\">work reduction factor (log2)</text>\n";
    s << "<text x=\"15\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 15 " << top + ph / 2
      << ")\" text-anchor=\"middle\">fraction of problems</text>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& p = curves[c];
        const char* color = colors[c % 10];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(p.x[i]), sy(p.y[i]));
            s << buf;
        }
        s << "\"/>\n";
        const double ly = top + 14.0 * static_cast<double>(c + 1);
        s << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 30
          << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << left + pw + 34 << "\" y=\"" << ly << "\">" << xml_escape(p.label)
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

ReportFiles make_report(const std::vector<RunRecord>& records, ReportMode mode, const fs::path& out_dir)
{
    if (records.empty()) {
        throw std::invalid_argument("no records to report on");
    }
    const ProfileOptions opts = profile_options(mode);
    if (opts.baseline == Baseline::direct) {
        for (const auto& r : records) {
            if (!r.direct_work) {
                throw std::invalid_argument(std::string("mode ") + to_string(mode) +
                                            " needs direct baselines; record " + r.matrix_id + "/" +
                                            r.ordering_label + "/" + r.precond_label + " has none");
            }
        }
    }
    const std::string tag = to_string(mode);
    fs::create_directories(out_dir / "profiles");
    ReportFiles files;

    // ordering -> class -> label -> records
    std::map<std::string, std::map<std::string, ConfigRecords>> groups;
    for (const auto& r : records) {
        groups[r.ordering_label][r.precond_class][r.precond_label].push_back(r);
    }

    files.summary_csv = out_dir / ("summary_" + tag + ".csv");
    {
        auto out = open_out(files.summary_csv);
        out << "ordering,class,label,auc,geo_mean,success_rate,parity,ge2x,ge4x,ge8x,count\n";
        for (const auto& [ordering, classes] : groups) {
            for (const auto& [cls, configs] : classes) {
                for (const auto& [label, recs] : configs) {
                    const SummaryStats s = summary_stats(recs, opts);
                    out << csv_field(ordering) << ',' << csv_field(cls) << ',' << csv_field(label) << ','
                        << num(s.auc) << ',' << num(s.geo_mean) << ',' << num(s.success_rate) << ','
                        << num(s.parity) << ',' << num(s.ge2x) << ',' << num(s.ge4x) << ','
                        << num(s.ge8x) << ',' << s.count << '\n';
                }
            }
        }
    }

    files.best_csv = out_dir / ("best_" + tag + ".csv");
    {
        auto out = open_out(files.best_csv);
        out << "ordering,class,configs,single_best,single_best_auc,tuned_best_auc\n";
        for (const auto& [ordering, classes] : groups) {
            for (const auto& [cls, configs] : classes) {
                const BestSelection best = select_best(configs, opts);
                out << csv_field(ordering) << ',' << csv_field(cls) << ',' << configs.size() << ','
                    << csv_field(best.single_best_label) << ',' << num(best.single_best_auc) << ','
                    << num(auc(best.tuned_best)) << '\n';

                std::vector<PerformanceProfile> all;
                for (const auto& [label, recs] : configs) {
                    all.push_back(build_profile(recs, opts, label));
                }
                const fs::path base = out_dir / "profiles" / file_safe(tag + "_" + ordering + "_" + cls);
                auto pcsv = open_out(base.string() + ".csv");
                pcsv << "x";
                for (const auto& p : all) {
                    pcsv << ',' << csv_field(p.label);
                }
                pcsv << ",single_best,tuned_best\n";
                for (std::size_t i = 0; i < best.tuned_best.x.size(); ++i) {
                    pcsv << num(best.tuned_best.x[i]);
                    for (const auto& p : all) {
                        pcsv << ',' << num(p.y[i]);
                    }
                    pcsv << ',' << num(best.single_best.y[i]) << ',' << num(best.tuned_best.y[i]) << '\n';
                }
                files.profile_csvs.push_back(base.string() + ".csv");

                PerformanceProfile single = best.single_best;
                single.label = "single: " + best.single_best_label;
                PerformanceProfile tuned = best.tuned_best;
                tuned.label = "tuned-best";
                auto svg = open_out(base.string() + ".svg");
                svg << profiles_svg({single, tuned}, cls + " (" + ordering + ", " + tag + ")");
                files.profile_svgs.push_back(base.string() + ".svg");
            }
        }
    }

    files.ratios_csv = out_dir / ("ratios_" + tag + ".csv");
    {
        auto out = open_out(files.ratios_csv);
        out << "matrix,ordering,label,status,ratio,iters,work_to_tol,generation_cost,apply_cost,fill_ratio\n";
        for (const auto& r : records) {
            out << csv_field(r.matrix_id) << ',' << csv_field(r.ordering_label) << ','
                << csv_field(r.precond_label) << ',' << to_string(r.status) << ',' << num(work_ratio(r, opts))
                << ',' << r.iters << ',' << (r.work_to_tol ? std::to_string(*r.work_to_tol) : "") << ','
                << r.generation_cost << ',' << (r.apply_cost ? std::to_string(*r.apply_cost) : "") << ','
                << (r.fill_ratio ? num(*r.fill_ratio) : "") << '\n';
        }
    }

    files.notes = out_dir / ("notes_" + tag + ".txt");
    {
        auto out = open_out(files.notes);
        const std::string flagged = tns_label(TnsConfig{1, TnsAlpha::unit});
        bool any = false;
        for (const auto& [ordering, classes] : groups) {
            for (const auto& [cls, configs] : classes) {
                if (configs.contains(flagged)) {
                    out << flagged << " [" << ordering
                        << "]: spectrally equivalent to no preconditioning. On the unit-diagonal "
                           "system the one-term series with alpha = 1 only shifts the Krylov space "
                           "by one power of A, so no gain per unit of work is expected.\n";
                    any = true;
                }
            }
        }
        if (!any) {
            out << "no flagged configurations\n";
        }
    }
    return files;
}

}  // namespace pcgbench
