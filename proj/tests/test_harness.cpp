#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <zlib.h>

#include "doctest.h"
#include "json.hpp"
#include "pcgbench/errors.hpp"
#include "pcgbench/harness/config.hpp"
#include "pcgbench/harness/fetch.hpp"
#include "pcgbench/harness/generators.hpp"
#include "pcgbench/harness/report.hpp"
#include "pcgbench/harness/runner.hpp"
#include "pcgbench/matrix_market.hpp"
#include "pcgbench/problem.hpp"

using namespace pcgbench;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name)
{
    const auto d = fs::temp_directory_path() / ("pcgbench_h_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string small_config(const fs::path& out, const std::string& extra = "")
{
    return R"({
      "matrices": [
        {"id": "grid", "generate": {"kind": "poisson2d", "k": 5}},
        {"id": "rand", "generate": {"kind": "random_sdd", "n": 30, "density": 0.1, "seed": 4}}
      ],
      "orderings": ["natural", "rcm"],
      "precond_grid": {"classes": ["sgs", "ic"], "ssor": {"sweeps": [1]}, "ic": {"droptol": [0, 1e-4]}},
      "output_dir": ")" + out.string() + "\"" + extra + "}";
}

std::string gzip(const std::string& data)
{
    z_stream zs{};
    deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    std::string out(deflateBound(&zs, data.size()) + 32, '\0');
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    deflate(&zs, Z_FINISH);
    out.resize(zs.total_out);
    deflateEnd(&zs);
    return out;
}

std::string tar_of(const std::vector<std::pair<std::string, std::string>>& files)
{
    std::string image;
    for (const auto& [name, data] : files) {
        std::string h(512, '\0');
        std::copy(name.begin(), name.end(), h.begin());
        std::snprintf(&h[100], 8, "%07o", 0644);
        std::snprintf(&h[108], 8, "%07o", 0);
        std::snprintf(&h[116], 8, "%07o", 0);
        std::snprintf(&h[124], 12, "%011lo", static_cast<unsigned long>(data.size()));
        std::snprintf(&h[136], 12, "%011o", 0);
        h[156] = '0';
        std::memcpy(&h[257], "ustar", 6);
        std::memcpy(&h[263], "00", 2);
        std::fill(h.begin() + 148, h.begin() + 156, ' ');
        unsigned sum = 0;
        for (const unsigned char c : h) {
            sum += c;
        }
        std::snprintf(&h[148], 8, "%06o", sum);
        h[155] = ' ';
        image += h;
        image += data;
        image.append((512 - data.size() % 512) % 512, '\0');
    }
    image.append(1024, '\0');
    return image;
}

}  // namespace

TEST_CASE("generators")
{
    const auto p = poisson2d(2);
    CHECK(p.n() == 4);
    CHECK(p.nnz() == 12);
    CHECK(p.at(0, 0) == 4.0);
    CHECK(p.at(0, 1) == -1.0);
    CHECK_FALSE(p.contains(0, 3));
    const auto t = tridiag(3);
    CHECK(t.nnz() == 7);
    CHECK(t.at(1, 1) == 2.0);
    CHECK(t.at(2, 1) == -1.0);
    const auto r1 = random_sdd(40, 0.1, 3);
    CHECK(r1 == random_sdd(40, 0.1, 3));
    CHECK(r1.symmetric());
    CHECK(is_sdd(r1));
    CHECK_FALSE(r1 == random_sdd(40, 0.1, 4));
}

TEST_CASE("config parsing and validation")
{
    const auto cfg = parse_config(small_config("/tmp/x"), "/base");
    CHECK(cfg.matrices.size() == 2);
    CHECK(cfg.orderings.size() == 2);
    CHECK(cfg.grid.ic_droptol == std::vector<double>{0, 1e-4});
    CHECK(cfg.solver.rel_res_tol == 1e-10);
    CHECK(cfg.seed == kDefaultSeed);

    const auto rel = parse_config(R"({"matrices":[{"id":"a","path":"m/a.mtx"}]})", "/base");
    CHECK(*rel.matrices[0].path == fs::path("/base/m/a.mtx"));
    CHECK(rel.orderings.size() == 1);
    CHECK(rel.grid.classes.size() == 7);

    auto bad = [](const std::string& text) { return parse_config(text); };
    CHECK_THROWS_AS(bad("{"), InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[]})"), InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a","path":"x"}],"bogus":1})"), InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a"}]})"), InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a","path":"x","url":"y"}]})"), InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a","path":"x"},{"id":"a","path":"y"}]})"), InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a","path":"x"}],"orderings":["amd"]})"), InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a","path":"x"}],"precond_grid":{"classes":["amg"]}})"),
                    InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a","path":"x"}],"precond_grid":{"ssor":{"omega":[2.0]}}})"),
                    InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a","path":"x"}],"precond_grid":{"tns":{"alpha":["2"]}}})"),
                    InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a","path":"x"}],"solver":{"rel_res_tol":-1}})"), InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a","path":"x"}],"jobs":0})"), InvalidConfig);
    CHECK_THROWS_AS(bad(R"({"matrices":[{"id":"a","generate":{"kind":"cube","n":3}}]})"), InvalidConfig);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), InvalidConfig);

    // The canonical form ignores jobs and output directory.
    const auto c1 = parse_config(small_config("/tmp/a"));
    const auto c2 = parse_config(small_config("/tmp/b", R"(, "jobs": 3)"));
    CHECK(c1.canonical == c2.canonical);
    const auto c3 = parse_config(small_config("/tmp/a", R"(, "seed": 5)"));
    CHECK(c1.canonical != c3.canonical);
}

TEST_CASE("grid expansion")
{
    const auto def = parse_config(R"({"matrices":[{"id":"a","path":"x"}]})").grid;
    const auto all = expand_grid(def, "a", "natural", 0.9);
    CHECK(all.size() == 48);
    CHECK(all.front().label == "control");
    const auto no_opt = expand_grid(def, "a", "natural", 1.0);
    CHECK(no_opt.size() == 46);
    std::set<std::string> labels;
    for (const auto& s : all) {
        CHECK(labels.insert(s.label).second);
    }
    CHECK(labels.contains("tns(m=1,alpha=1)"));
    CHECK(labels.contains("sgs(sweeps=2)"));
    CHECK(labels.contains("ssor(omega=opt,sweeps=1)"));
    CHECK(labels.contains("ic(droptol=0)"));
    CHECK(labels.contains("mic(droptol=1e-08)"));
    CHECK(labels.contains("sspai(fill=0.5)"));
    CHECK(labels.contains("laplacian(droptol=0.0001)"));

    const auto lu = parse_config(R"({"matrices":[{"id":"a","path":"x"}],
        "precond_grid":{"lu":[{"matrix":"a","ordering":"natural","L":"l.mtx","diagU":"d.txt"}]}})");
    const auto with_lu = expand_grid(lu.grid, "a", "natural", 0.5);
    CHECK(with_lu.back().label == "lu-sym");
    CHECK(expand_grid(lu.grid, "a", "rcm", 0.5).back().label != "lu-sym");
}

TEST_CASE("run, resume, determinism, manifest")
{
    const auto dir = fresh_dir("run");
    auto cfg = parse_config(small_config(dir / "out"));
    const auto s1 = run_benchmark(cfg);
    // 2 matrices x 2 orderings x (control + sgs + 2 ic) = 16 records.
    CHECK(s1.records_written == 16);
    CHECK(s1.solves_performed == 16);
    const std::string first = slurp(s1.records_path);

    std::istringstream in(first);
    const auto recs = read_records(in);
    REQUIRE(recs.size() == 16);
    for (const auto& r : recs) {
        CHECK(r.control_work > 0);
        CHECK(r.seed == kDefaultSeed);
        if (r.status == RunStatus::converged) {
            CHECK(*r.work_to_tol > 0);
        }
        CHECK(r.direct_work.has_value());
    }

    const auto resumed = run_benchmark(cfg, {true, std::nullopt, nullptr});
    CHECK(resumed.solves_performed == 0);
    CHECK(resumed.skipped == 16);
    CHECK(slurp(s1.records_path) == first);

    // A torn last line is discarded and recomputed.
    const auto cut = first.size() - 40;
    {
        std::ofstream out(s1.records_path, std::ios::binary | std::ios::trunc);
        out << first.substr(0, cut);
    }
    const auto repaired = run_benchmark(cfg, {true, std::nullopt, nullptr});
    CHECK(repaired.solves_performed == 1);
    CHECK(slurp(s1.records_path) == first);

    cfg.jobs = 4;
    const auto parallel = run_benchmark(cfg);
    CHECK(slurp(parallel.records_path) == first);

    const auto manifest = nlohmann::json::parse(slurp(s1.manifest_path));
    CHECK(manifest.at("config_sha256").get<std::string>() == sha256_bytes(cfg.canonical));
    CHECK(manifest.at("matrices").size() == 2);
    CHECK(manifest.at("runs").size() == 16);
    CHECK(manifest.contains("started_at"));
}

TEST_CASE("ingest failures are recorded, not fatal")
{
    const auto dir = fresh_dir("ingest");
    std::ofstream(dir / "bad.mtx") << "not a matrix\n";
    const std::string text = R"({"matrices":[{"id":"bad","path":")" + (dir / "bad.mtx").string() +
                             R"("},{"id":"ok","generate":{"kind":"tridiag","n":8}}],
        "precond_grid":{"classes":["sgs"],"ssor":{"sweeps":[1]}},"output_dir":")" +
                             (dir / "out").string() + "\"}";
    const auto s = run_benchmark(parse_config(text));
    REQUIRE(s.matrices.size() == 2);
    CHECK(s.matrices[0].status == "ingest_failure");
    CHECK(s.matrices[1].status == "ok");
    CHECK(s.records_written == 2);
}

TEST_CASE("report modes")
{
    const auto dir = fresh_dir("report");
    const auto s = run_benchmark(parse_config(small_config(dir / "out")));
    const auto recs = load_records_dir(dir / "out");
    CHECK(recs.size() == 16);
    for (const auto mode : {ReportMode::vs_control, ReportMode::vs_control_with_gen, ReportMode::vs_direct,
                            ReportMode::vs_direct_with_gen}) {
        const auto files = make_report(recs, mode, dir / "report");
        CHECK(fs::exists(files.summary_csv));
        CHECK(fs::exists(files.best_csv));
        CHECK(fs::exists(files.ratios_csv));
        CHECK(!files.profile_csvs.empty());
        CHECK(files.profile_csvs.size() == files.profile_svgs.size());
        const auto summary = slurp(files.summary_csv);
        CHECK(summary.rfind("ordering,class,label,auc,geo_mean,success_rate,parity,ge2x,ge4x,ge8x,count", 0) == 0);
    }
    CHECK(report_mode_from_string("vs_direct_with_gen") == ReportMode::vs_direct_with_gen);
    CHECK_THROWS_AS(report_mode_from_string("vs_amg"), InvalidConfig);
    CHECK(profile_options(ReportMode::vs_control_with_gen).include_generation);

    auto stripped = recs;
    stripped[3].direct_work.reset();
    CHECK_THROWS_AS(make_report(stripped, ReportMode::vs_direct, dir / "r2"), std::invalid_argument);
    CHECK_NOTHROW(make_report(stripped, ReportMode::vs_control, dir / "r2"));
    CHECK_THROWS_AS(make_report({}, ReportMode::vs_control, dir / "r3"), std::invalid_argument);
    CHECK(profiles_svg({profile_from_ratios({1.0, 2.0}, 512, "x")}, "t").find("<svg") != std::string::npos);
}

TEST_CASE("report flags the m=1, alpha=1 Neumann configuration")
{
    const auto dir = fresh_dir("tnsnote");
    const std::string text = R"({"matrices":[{"id":"g","generate":{"kind":"poisson2d","k":4}}],
        "precond_grid":{"classes":["tns"],"tns":{"terms":[1],"alpha":["1"]}},"output_dir":")" +
                             (dir / "out").string() + "\"}";
    run_benchmark(parse_config(text));
    const auto files = make_report(load_records_dir(dir / "out"), ReportMode::vs_control, dir / "rep");
    CHECK(slurp(files.notes).find("tns(m=1,alpha=1)") != std::string::npos);
}

TEST_CASE("fetch: cache hits, checksum mismatch, offline, archives")
{
    const auto cache = fresh_dir("cache");
    std::ostringstream mm;
    write_matrix_market(mm, tridiag(4));
    std::ofstream(cache / "t4.mtx") << mm.str();
    const auto digest = sha256_file(cache / "t4.mtx");
    CHECK(digest == sha256_bytes(mm.str()));
    CHECK(sha256_bytes("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    FetchOptions opts;
    opts.offline = true;
    const auto hit = fetch_matrix("t4", "http://invalid.invalid/t4.tar.gz", cache, opts);
    CHECK(hit.status == FetchStatus::cached);
    CHECK(hit.ok());
    CHECK(hit.sha256 == digest);

    opts.expected_sha256 = std::string(64, '0');
    CHECK(fetch_matrix("t4", "http://invalid.invalid/t4.tar.gz", cache, opts).status ==
          FetchStatus::checksum_mismatch);
    const auto miss = fetch_matrix("absent", "http://invalid.invalid/x.tar.gz", cache, {true});
    CHECK(miss.status == FetchStatus::network_failure);
    CHECK_FALSE(miss.ok());

    CHECK(gunzip(gzip("hello world")) == "hello world");
    CHECK_THROWS(gunzip("definitely not gzip"));
    const auto image = tar_of({{"t4/README", "x"}, {"t4/t4.mtx", mm.str()}});
    const auto members = read_tar(gunzip(gzip(image)));
    REQUIRE(members.size() == 2);
    CHECK(members[1].name == "t4/t4.mtx");
    CHECK(members[1].data == mm.str());

    std::ofstream(cache / "list.txt") << "# header\n\nt4 http://x/t4.tar.gz\nb http://y/b.tar.gz abcd\n";
    const auto list = read_fetch_list(cache / "list.txt");
    REQUIRE(list.size() == 2);
    CHECK(list[1].sha256 == std::optional<std::string>("abcd"));
    CHECK_FALSE(list[0].sha256.has_value());
}
