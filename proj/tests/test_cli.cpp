#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "../tools/cli.hpp"
#include "laguerre/laws.hpp"

namespace fs = std::filesystem;
using namespace laguerre;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "laguerre");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("laguerre_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

double second_column(const std::string& row) { return std::stod(row.substr(row.find(',') + 1)); }

// CSV body after the '#' metadata lines
std::vector<std::string> body(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
}

nlohmann::json metadata(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    REQUIRE(line.rfind("# ", 0) == 0);
    return nlohmann::json::parse(line.substr(2));
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"simulate", "--bogus", "1"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("minimal m = 1 simulation writes one CSV and a sidecar") {
    const fs::path dir = scratch("sim1");
    Run r = run({"simulate", "--m", "1", "--delta", "1", "--x0", "1", "--t", "0.01", "--dt", "0.001", "--out",
                 dir.string()});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(dir / "path_0.csv");
    CHECK(csv.rfind("t,lambda1\n", 0) == 0);
    CHECK(body(csv).size() == 12);
    auto meta = nlohmann::json::parse(slurp(dir / "simulate.meta.json"));
    CHECK(meta["seed"] == 1);
    CHECK(meta["model"]["delta"] == 1.0);
    CHECK(meta["scheme"] == "eigen");
    CHECK(meta.contains("version"));
    int csv_files = 0;
    for (const auto& e : fs::directory_iterator(dir)) csv_files += e.path().extension() == ".csv";
    CHECK(csv_files == 1);
}

TEST_CASE("simulation output is byte-identical for a fixed seed") {
    const fs::path a = scratch("sim_a"), b = scratch("sim_b");
    for (const auto& d : {a, b}) {
        Run r = run({"simulate", "--m", "2", "--delta", "2.5", "--x0", "2,1", "--t", "0.1", "--dt", "0.01", "--paths",
                     "3", "--seed", "42", "--out", d.string()});
        REQUIRE(r.code == 0);
    }
    for (const char* f : {"path_0.csv", "path_1.csv", "path_2.csv"}) CHECK(slurp(a / f) == slurp(b / f));
    CHECK(slurp(a / "simulate.meta.json").find("\"seed\": 42") != std::string::npos);
}

TEST_CASE("matrix and Gram schemes write matrix columns") {
    const fs::path dir = scratch("sim_m");
    REQUIRE(run({"simulate", "--m", "2", "--delta", "2", "--x0", "2,1", "--t", "0.02", "--dt", "0.01", "--scheme",
                 "gram", "--out", dir.string()})
                .code == 0);
    CHECK(slurp(dir / "path_0.csv").rfind("t,re_11,im_11,re_12,im_12,re_22,im_22\n", 0) == 0);
    CHECK(run({"simulate", "--m", "2", "--delta", "2.5", "--x0", "2,1", "--t", "0.02", "--dt", "0.01", "--scheme",
               "gram", "--out", dir.string()})
              .code == 1);
}

TEST_CASE("invalid models are configuration errors") {
    Run r = run({"simulate", "--m", "1", "--delta", "-1", "--x0", "1", "--t", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("delta") != std::string::npos);
    CHECK(run({"simulate", "--m", "2", "--delta", "2.5", "--nu", "0.4", "--x0", "2,1"}).code == 1);
    CHECK(run({"simulate", "--m", "2", "--delta", "2.5", "--x0", "1,2,3"}).code == 1);
    CHECK(run({"simulate", "--m", "2", "--x0", "2,1"}).code == 1);
    CHECK(run({"simulate", "--m", "2", "--delta", "2.5", "--x0", "-1,1"}).code == 1);
}

TEST_CASE("config file sets defaults and flags override them") {
    const fs::path dir = scratch("cfg");
    {
        std::ofstream f(dir / "run.cfg");
        f << "# t0 survival\nm = 2\nnu = -0.5\nx0 = 2,1\ngrid = 0.5,1\n";
    }
    Run r = run({"law", "t0", "--config", (dir / "run.cfg").string()});
    REQUIRE(r.code == 0);
    auto rows = body(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "t,tail");
    CHECK(second_column(rows[2]) ==
          doctest::Approx(t0_tail(2, 0.5, {2.0, 1.0}, 1.0)).epsilon(1e-15));
    Run o = run({"law", "t0", "--config", (dir / "run.cfg").string(), "--grid", "2"});
    REQUIRE(o.code == 0);
    CHECK(body(o.out).size() == 2);
    {
        std::ofstream f(dir / "bad.cfg");
        f << "m = 2\ncolour = blue\n";
    }
    Run bad = run({"law", "t0", "--config", (dir / "bad.cfg").string()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("line 2") != std::string::npos);
    CHECK(run({"law", "t0", "--config", (dir / "missing.cfg").string()}).code == 1);
}

TEST_CASE("law t0 emits t,tail with metadata") {
    Run r = run({"law", "t0", "--m", "2", "--nu", "-0.5", "--x0", "2,1", "--grid", "0.25:2:8"});
    REQUIRE(r.code == 0);
    auto rows = body(r.out);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == "t,tail");
    CHECK(rows[1].rfind("0.25,", 0) == 0);
    auto meta = metadata(r.out);
    CHECK(meta["law"] == "t0");
    CHECK(meta["model"]["m"] == 2);
    CHECK(meta["model"]["delta"] == 1.5);
}

TEST_CASE("law hw emits v,f with quadrature statistics") {
    Run r = run({"law", "hw", "--lambda", "2,1", "--grid", "1,2"});
    REQUIRE(r.code == 0);
    auto rows = body(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "v,f");
    CHECK(second_column(rows[2]) == doctest::Approx(0.2533606).epsilon(1e-6));
    auto meta = metadata(r.out);
    CHECK(meta["quadrature"]["cells"].get<long>() > 0);
    CHECK(meta["quadrature"].contains("abs_tol"));
}

TEST_CASE("other laws") {
    Run lap = run({"law", "laplace", "--m", "2", "--delta", "2.5", "--x0", "1,2", "--u", "0.3,0.1", "--grid", "1"});
    REQUIRE(lap.code == 0);
    const LaguerreModel model(2, 2.5, HermitianMatrix::diagonal({1.0, 2.0}));
    CHECK(second_column(body(lap.out)[1]) ==
          doctest::Approx(laplace_transform(model, 1.0, HermitianMatrix::diagonal({0.3, 0.1}))).epsilon(1e-15));
    Run det = run({"law", "detmoment", "--m", "2", "--delta", "2.5", "--x0", "1,1", "--t", "1", "--grid", "1"});
    REQUIRE(det.code == 0);
    CHECK(body(det.out)[0] == "s,moment");
    CHECK(second_column(body(det.out)[1]) == doctest::Approx(22.0).epsilon(1e-12));
    Run qt = run({"law", "qt", "--m", "2", "--delta", "2.5", "--x0", "2,1", "--y", "3,1", "--grid", "0.5,1"});
    REQUIRE(qt.code == 0);
    CHECK(body(qt.out)[0] == "t,q");
    CHECK(metadata(qt.out)["measure"].get<std::string>().find("chamber") != std::string::npos);
    Run dens = run({"law", "density", "--m", "2", "--delta", "2.5", "--x0", "2,1", "--y", "3,1", "--grid", "1"});
    REQUIRE(dens.code == 0);
    CHECK(body(dens.out)[0] == "t,density");
    Run s0 = run({"law", "s0", "--m", "2", "--nu", "-0.5", "--x0", "2,1", "--grid", "0.3"});
    REQUIRE(s0.code == 0);
    CHECK(second_column(body(s0.out)[1]) == doctest::Approx(0.836336748984285944795).epsilon(1e-12));
}

TEST_CASE("law errors") {
    CHECK(run({"law", "nonsense", "--grid", "1"}).code == 1);
    CHECK(run({"law", "t0", "--m", "2", "--nu", "-0.5", "--x0", "2,1"}).code == 1);  // no grid
    CHECK(run({"law", "t0", "--m", "2", "--nu", "-0.5", "--x0", "2,1", "--grid", "1:0:x"}).code == 1);
    // delta = 2.5 has no finite T0
    CHECK(run({"law", "t0", "--m", "2", "--delta", "2.5", "--x0", "2,1", "--grid", "1"}).code == 1);
    // cell cap exceeded is a numerical failure
    CHECK(run({"law", "hw", "--lambda", "2,1", "--grid", "2", "--max-cells", "3"}).code == 2);
}

TEST_CASE("law output to a file") {
    const fs::path dir = scratch("law");
    REQUIRE(run({"law", "t0", "--m", "1", "--nu", "-0.5", "--x0", "1", "--grid", "1", "--out",
                 (dir / "t0.csv").string()})
                .code == 0);
    CHECK(body(slurp(dir / "t0.csv"))[0] == "t,tail");
}

TEST_CASE("hypergeom compares series and determinant") {
    Run r = run({"hypergeom", "--a", "0.7", "--b", "2.6", "--x", "0.5,0.2"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["series"].get<double>() == doctest::Approx(j["determinant"].get<double>()).epsilon(1e-10));
    CHECK(j["rel_diff"].get<double>() < 1e-10);
}

TEST_CASE("verify runs named checks and reports JSON") {
    const fs::path dir = scratch("verify");
    Run r = run({"verify", "--check", "det_moment", "--paths", "200", "--out", dir.string()});
    CHECK((r.code == 0 || r.code == 3));
    CHECK(r.err.find("underpowered") != std::string::npos);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["name"] == "det_moment");
    CHECK(j[0]["paths"] == 200);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(run({"verify", "--check", "nothing"}).code == 1);
}

TEST_CASE("verify output does not depend on threads") {
    Run a = run({"verify", "--check", "laplace", "--paths", "1000", "--threads", "1"});
    Run b = run({"verify", "--check", "laplace", "--paths", "1000", "--threads", "3"});
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
}

TEST_CASE("density check writes per-bin counts") {
    const fs::path dir = scratch("verify_bins");
    Run r = run({"verify", "--check", "eigen_density", "--paths", "2000", "--out", dir.string()});
    CHECK((r.code == 0 || r.code == 3));
    CHECK(slurp(dir / "eigen_density_bins.csv").rfind("group,", 0) == 0);
}
