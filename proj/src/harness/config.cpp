#include "pcgbench/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pcgbench/errors.hpp"

namespace pcgbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kDefaultClasses{"tns", "sgs", "ssor", "sspai", "ic", "mic", "laplacian"};
const std::set<std::string> kKnownClasses{"tns", "sgs", "ssor", "sspai", "ic", "mic", "laplacian", "lu"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw InvalidConfig("unknown key '" + key + "' in " + where);
        }
    }
}

fs::path resolve(const fs::path& base, const std::string& p)
{
    const fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

TnsAlpha alpha_from_string(const std::string& s)
{
    for (const TnsAlpha a : {TnsAlpha::inv_fro, TnsAlpha::inv_inf, TnsAlpha::inv_one,
                             TnsAlpha::two_over_two_norm, TnsAlpha::unit}) {
        if (s == to_string(a)) {
            return a;
        }
    }
    throw InvalidConfig("unknown TNS alpha '" + s + "' (use 1/fro, 1/inf, 1/one, 2/two or 1)");
}

template <typename T>
std::vector<T> nonempty_list(const json& j, const std::string& what)
{
    auto v = j.get<std::vector<T>>();
    if (v.empty()) {
        throw InvalidConfig(what + " must not be empty");
    }
    return v;
}

GeneratorSpec parse_generator(const json& g)
{
    reject_unknown(g, {"kind", "k", "n", "density", "seed"}, "generate");
    GeneratorSpec s;
    s.kind = g.at("kind").get<std::string>();
    if (s.kind == "poisson2d") {
        s.k = g.at("k").get<Index>();
        if (s.k < 1) {
            throw InvalidConfig("poisson2d needs k >= 1");
        }
    } else if (s.kind == "tridiag") {
        s.n = g.at("n").get<Index>();
        if (s.n < 1) {
            throw InvalidConfig("tridiag needs n >= 1");
        }
    } else if (s.kind == "random_sdd") {
        s.n = g.at("n").get<Index>();
        s.density = g.at("density").get<double>();
        s.seed = g.value("seed", std::uint64_t{1});
        if (s.n < 1 || !(s.density >= 0.0 && s.density <= 1.0)) {
            throw InvalidConfig("random_sdd needs n >= 1 and density in [0,1]");
        }
    } else {
        throw InvalidConfig("unknown generator kind '" + s.kind + "'");
    }
    return s;
}

void parse_grid(const json& g, PrecondGrid& grid, const fs::path& base)
{
    reject_unknown(g, {"classes", "tns", "ssor", "sspai", "ic", "laplacian", "lu"}, "precond_grid");
    if (g.contains("classes")) {
        grid.classes = g["classes"].get<std::vector<std::string>>();
        for (const auto& c : grid.classes) {
            if (!kKnownClasses.contains(c)) {
                throw InvalidConfig("unknown preconditioner class '" + c + "'");
            }
        }
    }
    if (g.contains("tns")) {
        const auto& t = g["tns"];
        reject_unknown(t, {"terms", "alpha"}, "precond_grid.tns");
        if (t.contains("terms")) {
            grid.tns_terms = nonempty_list<int>(t["terms"], "tns.terms");
        }
        if (t.contains("alpha")) {
            grid.tns_alpha.clear();
            for (const auto& s : nonempty_list<std::string>(t["alpha"], "tns.alpha")) {
                grid.tns_alpha.push_back(alpha_from_string(s));
            }
        }
        for (const int m : grid.tns_terms) {
            if (m < 1) {
                throw InvalidConfig("tns.terms entries must be >= 1");
            }
        }
    }
    if (g.contains("ssor")) {
        const auto& s = g["ssor"];
        reject_unknown(s, {"omega", "sweeps", "optimal_omega"}, "precond_grid.ssor");
        if (s.contains("omega")) {
            grid.ssor_omega = nonempty_list<double>(s["omega"], "ssor.omega");
        }
        if (s.contains("sweeps")) {
            grid.ssor_sweeps = nonempty_list<int>(s["sweeps"], "ssor.sweeps");
        }
        grid.ssor_optimal_omega = s.value("optimal_omega", grid.ssor_optimal_omega);
        for (const double w : grid.ssor_omega) {
            if (!(w > 0.0 && w < 2.0)) {
                throw InvalidConfig("ssor.omega entries must lie in (0, 2)");
            }
        }
        for (const int k : grid.ssor_sweeps) {
            if (k < 1) {
                throw InvalidConfig("ssor.sweeps entries must be >= 1");
            }
        }
    }
    if (g.contains("sspai")) {
        const auto& s = g["sspai"];
        reject_unknown(s, {"fill"}, "precond_grid.sspai");
        if (s.contains("fill")) {
            grid.sspai_fill = nonempty_list<double>(s["fill"], "sspai.fill");
        }
        for (const double f : grid.sspai_fill) {
            if (!(f > 0.0)) {
                throw InvalidConfig("sspai.fill entries must be positive");
            }
        }
    }
    if (g.contains("ic")) {
        const auto& s = g["ic"];
        reject_unknown(s, {"droptol"}, "precond_grid.ic");
        if (s.contains("droptol")) {
            grid.ic_droptol = nonempty_list<double>(s["droptol"], "ic.droptol");
        }
        for (const double d : grid.ic_droptol) {
            if (!(d >= 0.0)) {
                throw InvalidConfig("ic.droptol entries must be >= 0");
            }
        }
    }
    if (g.contains("laplacian")) {
        const auto& s = g["laplacian"];
        reject_unknown(s, {"droptol", "allow_lift"}, "precond_grid.laplacian");
        if (s.contains("droptol")) {
            grid.laplacian_droptol = nonempty_list<double>(s["droptol"], "laplacian.droptol");
        }
        grid.laplacian_allow_lift = s.value("allow_lift", grid.laplacian_allow_lift);
        for (const double d : grid.laplacian_droptol) {
            if (!(d >= 0.0)) {
                throw InvalidConfig("laplacian.droptol entries must be >= 0");
            }
        }
    }
    if (g.contains("lu")) {
        for (const auto& e : g["lu"]) {
            reject_unknown(e, {"matrix", "ordering", "L", "diagU", "label"}, "precond_grid.lu[]");
            LuFactorSpec lu;
            lu.matrix = e.at("matrix").get<std::string>();
            lu.ordering = e.at("ordering").get<std::string>();
            lu.lower = resolve(base, e.at("L").get<std::string>());
            lu.diag_u = resolve(base, e.at("diagU").get<std::string>());
            lu.label = e.value("label", lu.label);
            if (lu.label.find('(') != std::string::npos) {
                throw InvalidConfig("lu labels must not contain '('");
            }
            grid.lu.push_back(std::move(lu));
        }
    }
}

}  // namespace

BenchmarkConfig parse_config(const std::string& json_text, const fs::path& base_dir)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidConfig(std::string("config is not valid JSON: ") + e.what());
    }
    BenchmarkConfig cfg;
    try {
        reject_unknown(j, {"matrices", "orderings", "precond_grid", "solver", "output_dir", "cache_dir",
                           "offline", "jobs", "seed", "direct_baseline", "write_traces"},
                       "config");
        std::set<std::string> ids;
        for (const auto& m : j.at("matrices")) {
            reject_unknown(m, {"id", "path", "url", "sha256", "generate"}, "matrices[]");
            MatrixSource src;
            src.id = m.at("id").get<std::string>();
            if (src.id.empty() || src.id.find_first_of("/\\ \t") != std::string::npos) {
                throw InvalidConfig("matrix id '" + src.id + "' must be nonempty without separators");
            }
            if (!ids.insert(src.id).second) {
                throw InvalidConfig("duplicate matrix id '" + src.id + "'");
            }
            int sources = 0;
            if (m.contains("path")) {
                src.path = resolve(base_dir, m["path"].get<std::string>());
                ++sources;
            }
            if (m.contains("url")) {
                src.url = m["url"].get<std::string>();
                ++sources;
            }
            if (m.contains("generate")) {
                src.generate = parse_generator(m["generate"]);
                ++sources;
            }
            if (sources != 1) {
                throw InvalidConfig("matrix '" + src.id + "' needs exactly one of path, url, generate");
            }
            if (m.contains("sha256")) {
                src.sha256 = m["sha256"].get<std::string>();
            }
            cfg.matrices.push_back(std::move(src));
        }
        if (cfg.matrices.empty()) {
            throw InvalidConfig("config lists no matrices");
        }

        const json orderings = j.value("orderings", json::array({"natural"}));
        std::set<std::string> labels;
        for (const auto& o : orderings) {
            OrderingSpec spec;
            if (o.is_string()) {
                spec.label = o.get<std::string>();
                if (spec.label != "natural" && spec.label != "rcm") {
                    throw InvalidConfig("ordering '" + spec.label +
                                        "' needs a file (use {\"label\":..., \"file\":...})");
                }
            } else {
                reject_unknown(o, {"label", "file"}, "orderings[]");
                spec.label = o.at("label").get<std::string>();
                if (o.contains("file")) {
                    spec.file = resolve(base_dir, o["file"].get<std::string>()).string();
                } else if (spec.label != "natural" && spec.label != "rcm") {
                    throw InvalidConfig("ordering '" + spec.label + "' needs a file");
                }
            }
            if (!labels.insert(spec.label).second) {
                throw InvalidConfig("duplicate ordering label '" + spec.label + "'");
            }
            cfg.orderings.push_back(std::move(spec));
        }
        if (cfg.orderings.empty()) {
            throw InvalidConfig("config lists no orderings");
        }

        cfg.grid.classes = kDefaultClasses;
        if (j.contains("precond_grid")) {
            parse_grid(j["precond_grid"], cfg.grid, base_dir);
        }
        if (!cfg.grid.lu.empty() &&
            std::find(cfg.grid.classes.begin(), cfg.grid.classes.end(), "lu") == cfg.grid.classes.end() &&
            !(j.contains("precond_grid") && j["precond_grid"].contains("classes"))) {
            cfg.grid.classes.push_back("lu");
        }

        if (j.contains("solver")) {
            const auto& s = j["solver"];
            reject_unknown(s, {"rel_res_tol", "max_iters", "max_iters_factor", "record_every",
                               "track_nrbe"},
                           "solver");
            cfg.solver.rel_res_tol = s.value("rel_res_tol", cfg.solver.rel_res_tol);
            cfg.solver.max_iters = s.value("max_iters", cfg.solver.max_iters);
            cfg.max_iters_factor = s.value("max_iters_factor", cfg.max_iters_factor);
            cfg.solver.record_every = s.value("record_every", cfg.solver.record_every);
            cfg.solver.track_nrbe = s.value("track_nrbe", cfg.solver.track_nrbe);
        }
        if (!(cfg.solver.rel_res_tol > 0.0) || cfg.solver.max_iters < 0 || cfg.max_iters_factor < 1 ||
            cfg.solver.record_every < 1) {
            throw InvalidConfig("solver settings out of range");
        }

        cfg.output_dir = resolve(base_dir, j.value("output_dir", std::string("bench-out")));
        if (j.contains("cache_dir")) {
            cfg.cache_dir = resolve(base_dir, j["cache_dir"].get<std::string>());
        }
        cfg.offline = j.value("offline", false);
        cfg.jobs = j.value("jobs", Index{1});
        if (cfg.jobs < 1) {
            throw InvalidConfig("jobs must be >= 1");
        }
        cfg.seed = j.value("seed", kDefaultSeed);
        cfg.direct_baseline = j.value("direct_baseline", true);
        cfg.write_traces = j.value("write_traces", false);
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("config field error: ") + e.what());
    }
    // jobs and output location do not change the records, so they stay out of the hash.
    json canonical = j;
    canonical.erase("jobs");
    canonical.erase("output_dir");
    cfg.canonical = canonical.dump();
    return cfg;
}

BenchmarkConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidConfig("cannot open config " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

std::vector<PrecondSpec> expand_grid(const PrecondGrid& grid, const std::string& matrix_id,
                                     const std::string& ordering, double norm_j)
{
    auto enabled = [&](const std::string& c) {
        return std::find(grid.classes.begin(), grid.classes.end(), c) != grid.classes.end();
    };
    std::vector<PrecondSpec> out;
    PrecondSpec control;
    control.label = "control";
    out.push_back(control);

    if (enabled("tns")) {
        for (const int m : grid.tns_terms) {
            for (const TnsAlpha a : grid.tns_alpha) {
                PrecondSpec s;
                s.kind = PrecondSpec::Kind::tns;
                s.tns = TnsConfig{m, a};
                s.label = tns_label(s.tns);
                out.push_back(s);
            }
        }
    }
    for (const int k : grid.ssor_sweeps) {
        for (const double w : grid.ssor_omega) {
            const bool sgs = w == 1.0;
            if (sgs ? !enabled("sgs") : !enabled("ssor")) {
                continue;
            }
            PrecondSpec s;
            s.kind = PrecondSpec::Kind::ssor;
            s.ssor = SsorConfig{w, k, sgs ? SsorMode::sgs : SsorMode::ssor, false};
            s.label = ssor_label(s.ssor);
            out.push_back(s);
        }
        if (enabled("ssor") && grid.ssor_optimal_omega && norm_j >= 0.0 && norm_j < 1.0) {
            PrecondSpec s;
            s.kind = PrecondSpec::Kind::ssor;
            s.ssor = SsorConfig{optimal_omega(norm_j), k, SsorMode::ssor, true};
            s.label = ssor_label(s.ssor);
            out.push_back(s);
        }
    }
    if (enabled("sspai")) {
        for (const double f : grid.sspai_fill) {
            PrecondSpec s;
            s.kind = PrecondSpec::Kind::sspai;
            s.sspai = SspaiConfig{f};
            s.label = sspai_label(s.sspai);
            out.push_back(s);
        }
    }
    for (const bool modified : {false, true}) {
        if (!enabled(modified ? "mic" : "ic")) {
            continue;
        }
        for (const double d : grid.ic_droptol) {
            PrecondSpec s;
            s.kind = PrecondSpec::Kind::ic;
            s.ic = IcOptions{d, modified};
            s.label = ic_label(s.ic);
            out.push_back(s);
        }
    }
    if (enabled("laplacian")) {
        for (const double d : grid.laplacian_droptol) {
            PrecondSpec s;
            s.kind = PrecondSpec::Kind::laplacian;
            s.laplacian = LaplacianPipelineConfig{d, grid.laplacian_allow_lift};
            s.label = laplacian_label(s.laplacian);
            out.push_back(s);
        }
    }
    if (enabled("lu")) {
        for (const auto& lu : grid.lu) {
            if (lu.matrix == matrix_id && lu.ordering == ordering) {
                PrecondSpec s;
                s.kind = PrecondSpec::Kind::lu;
                s.lu = lu;
                s.label = lu.label;
                out.push_back(s);
            }
        }
    }
    // Duplicate labels would collide on the run key.
    std::set<std::string> seen;
    std::vector<PrecondSpec> unique;
    for (auto& s : out) {
        if (seen.insert(s.label).second) {
            unique.push_back(std::move(s));
        }
    }
    return unique;
}

}  // namespace pcgbench
