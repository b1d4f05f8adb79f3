#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace infdiff;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int status = cli::run_cli(args, out, err);
    return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("infdiff_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path)
{
    std::istringstream in(slurp(path));
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

} // namespace

TEST_CASE("bench passes for heat and writes its report", "[cli]")
{
    const auto dir = scratch("bench_heat");
    const Run r = run({"bench", "--problem", "heat", "--order", "10", "--points", "50", "--seed", "7", "--out",
                       dir.string()});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("heat deriv"));
    const auto rows = read_csv(dir / "bench_heat.csv");
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == std::vector<std::string>{"metric", "key", "value"});
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k][0] == "derivative_nrmse" && rows[k][1] != "0") {
            CHECK(std::stod(rows[k][2]) <= 1e-14);
        }
    }
}

TEST_CASE("bench wave has exactly zero odd rows", "[cli]")
{
    const auto dir = scratch("bench_wave");
    REQUIRE(run({"bench", "--problem", "wave", "--order", "10", "--out", dir.string()}).status == 0);
    for (const auto& row : read_csv(dir / "bench_wave.csv")) {
        if (row[0] == "derivative_nrmse" && std::stoi(row[1]) % 2 == 1) {
            CHECK(std::stod(row[2]) == 0.0);
        }
    }
}

TEST_CASE("bench rejects problems without closed forms and unknown names", "[cli]")
{
    const Run burgers = run({"bench", "--problem", "burgers"});
    CHECK(burgers.status == 2);
    CHECK_THAT(burgers.err, ContainsSubstring("no exact oracle; use derive/taylor"));
    const Run unknown = run({"bench", "--problem", "kdv"});
    CHECK(unknown.status == 2);
    CHECK_THAT(unknown.err, ContainsSubstring("heat"));
}

TEST_CASE("bench exits 1 when a threshold fails", "[cli]")
{
    const auto dir = scratch("bench_fail");
    const Run r = run({"bench", "--problem", "heat", "--order", "10", "--points", "50", "--param", "alpha=40",
                       "--out", dir.string()});
    CHECK(r.status == 1);
    CHECK_THAT(r.err, ContainsSubstring("FAIL heat"));
}

TEST_CASE("derive writes one row per component, order and point", "[cli]")
{
    const auto dir = scratch("derive");
    REQUIRE(run({"derive", "--problem", "heat", "--order", "2", "--x", "0.5", "--out", dir.string()}).status == 0);
    const auto rows = read_csv(dir / "derivatives_heat.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"component", "order", "x", "value"});
    const double kappa = 0.4 * pi * pi;
    const std::vector<double> expected{1.0, -kappa, kappa * kappa};
    for (int i = 0; i <= 2; ++i) {
        CHECK(rows[i + 1][0] == "0");
        CHECK(std::stoi(rows[i + 1][1]) == i);
        CHECK(std::stod(rows[i + 1][2]) == 0.5);
        CHECK_THAT(std::stod(rows[i + 1][3]), WithinRel(expected[i], 1e-13));
    }
    CHECK_THAT(std::stod(rows[2][3]), WithinAbs(-3.947842, 1e-6));

    REQUIRE(run({"derive", "--problem", "schrodinger", "--order", "1", "--points", "3", "--out", dir.string()})
                .status == 0);
    const auto nls = read_csv(dir / "derivatives_schrodinger.csv");
    CHECK(nls.size() == 1 + 2 * 2 * 3);
    CHECK(nls.back()[0] == "1");

    REQUIRE(run({"derive", "--problem", "allen_cahn", "--order", "7", "--points", "100", "--out", dir.string()})
                .status == 0);
    const auto ac = read_csv(dir / "derivatives_allen_cahn.csv");
    CHECK(ac.size() == 1 + 800);
}

TEST_CASE("taylor export for burgers has 500 finite deterministic rows", "[cli]")
{
    const auto a = scratch("taylor_a");
    const auto b = scratch("taylor_b");
    const std::vector<std::string> base{"taylor", "--problem", "burgers", "--points", "100", "--t1",
                                        "0.01,0.02,0.03,0.04,0.05", "--seed", "7"};
    auto args_a = base;
    args_a.insert(args_a.end(), {"--out", a.string()});
    auto args_b = base;
    args_b.insert(args_b.end(), {"--out", b.string()});
    REQUIRE(run(args_a).status == 0);
    REQUIRE(run(args_b).status == 0);
    const auto rows = read_csv(a / "taylor_points_burgers.csv");
    REQUIRE(rows.size() == 501);
    CHECK(rows[0] == std::vector<std::string>{"component", "t", "x", "value"});
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(std::isfinite(std::stod(rows[k][3])));
    }
    CHECK(slurp(a / "taylor_points_burgers.csv") == slurp(b / "taylor_points_burgers.csv"));
}

TEST_CASE("taylor accepts repeated t1 flags and t1 = 0 reproduces g", "[cli]")
{
    const auto dir = scratch("taylor_zero");
    REQUIRE(run({"taylor", "--problem", "allen_cahn", "--points", "20", "--t1", "0", "--out", dir.string()}).status
            == 0);
    const auto rows = read_csv(dir / "taylor_points_allen_cahn.csv");
    REQUIRE(rows.size() == 21);
    const PdeProblem p = registry_get("allen_cahn");
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(std::stod(rows[k][3]) == p.initial_value(std::stod(rows[k][2]))[0]);
    }

    REQUIRE(run({"taylor", "--problem", "wave", "--points", "10", "--t1", "0.01", "--t1", "0.02", "--out",
                 dir.string()})
                .status == 0);
    CHECK(read_csv(dir / "taylor_points_wave.csv").size() == 1 + 10 * 2 * 2);
}

TEST_CASE("taylor writes json records on request", "[cli]")
{
    const auto dir = scratch("taylor_json");
    REQUIRE(run({"taylor", "--problem", "schrodinger", "--points", "5", "--t1", "0.01", "--format", "json", "--out",
                 dir.string()})
                .status == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "taylor_points_schrodinger.json"));
    REQUIRE(doc.is_array());
    CHECK(doc.size() == 10);
    for (const auto& rec : doc) {
        CHECK(rec.contains("component"));
        CHECK(rec.at("t").get<double>() == 0.01);
        CHECK(rec.contains("x"));
        CHECK(std::isfinite(rec.at("value").get<double>()));
    }
}

TEST_CASE("plotdata curves match the closed forms", "[cli]")
{
    const auto dir = scratch("plotdata");
    REQUIRE(run({"plotdata", "--problem", "diffusion", "--t1", "0.1", "--out", dir.string()}).status == 0);
    auto rows = read_csv(dir / "plotdata_diffusion.csv");
    REQUIRE(rows.size() == 501);
    CHECK(rows[0] == std::vector<std::string>{"t", "x", "exact", "taylor"});
    double worst = 0.0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        worst = std::max(worst, std::abs(std::stod(rows[k][2]) - std::stod(rows[k][3])));
    }
    CHECK(worst <= 1e-13);

    REQUIRE(run({"plotdata", "--problem", "heat", "--t1", "0.1", "--out", dir.string()}).status == 0);
    rows = read_csv(dir / "plotdata_heat.csv");
    REQUIRE(rows.size() == 501);
    worst = 0.0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double x = std::stod(rows[k][1]);
        worst = std::max(worst, std::abs(std::stod(rows[k][3]) - std::exp(-0.4 * pi * pi * 0.1) * std::sin(pi * x)));
    }
    CHECK(worst <= 1e-12);

    REQUIRE(run({"plotdata", "--problem", "heat", "--t1", "0.01", "--out", dir.string()}).status == 0);
    rows = read_csv(dir / "plotdata_heat.csv");
    std::vector<double> exact;
    std::vector<double> taylor;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        exact.push_back(std::stod(rows[k][2]));
        taylor.push_back(std::stod(rows[k][3]));
    }
    CHECK(nrmse(exact, taylor) <= 1e-15);

    REQUIRE(run({"plotdata", "--problem", "wave", "--t1", "0.1", "--out", dir.string()}).status == 0);
    CHECK(read_csv(dir / "plotdata_wave.csv").size() == 501);
    CHECK(run({"plotdata", "--problem", "burgers", "--out", dir.string()}).status == 2);
}

TEST_CASE("config files supply defaults that flags override", "[cli]")
{
    const auto dir = scratch("config");
    const fs::path cfg = dir / "run.cfg";
    {
        std::ofstream os(cfg);
        os << "# derivative table\nproblem = heat\norder = 3\npoints = 4\nseed = 9\nout = " << dir.string()
           << "\nparam.alpha = 1.0\n";
    }
    REQUIRE(run({"derive", "--config", cfg.string()}).status == 0);
    auto rows = read_csv(dir / "derivatives_heat.csv");
    CHECK(rows.size() == 1 + 4 * 4);
    REQUIRE(run({"derive", "--config", cfg.string(), "--order", "1"}).status == 0);
    rows = read_csv(dir / "derivatives_heat.csv");
    CHECK(rows.size() == 1 + 2 * 4);
    const double x = std::stod(rows[5][2]);
    CHECK_THAT(std::stod(rows[5][3]), WithinRel(-pi * pi * std::sin(pi * x), 1e-13));

    {
        std::ofstream os(cfg);
        os << "problem = heat\ncolour = blue\n";
    }
    CHECK(run({"derive", "--config", cfg.string()}).status == 2);
    CHECK(run({"derive", "--config", (dir / "missing.cfg").string()}).status == 2);
}

TEST_CASE("usage errors exit with status 2", "[cli]")
{
    CHECK(run({}).status == 2);
    CHECK(run({"derive", "--problem", "heat", "--order", "21"}).status == 2);
    CHECK(run({"derive", "--problem", "heat", "--order", "0"}).status == 2);
    CHECK(run({"derive", "--problem", "heat", "--points", "0"}).status == 2);
    CHECK(run({"taylor", "--problem", "heat", "--t1", "2.0"}).status == 2);
    CHECK(run({"taylor", "--problem", "heat", "--t1", "-0.1"}).status == 2);
    CHECK(run({"taylor", "--problem", "heat", "--format", "xml"}).status == 2);
    CHECK(run({"derive", "--problem", "heat", "--param", "beta=2"}).status == 2);
    CHECK(run({"derive", "--problem", "heat", "--param", "alpha"}).status == 2);
    CHECK(run({"derive", "--problem", "heat", "--x", "1.5"}).status == 2);
    CHECK(run({"derive"}).status == 2);
    CHECK(run({"frobnicate"}).status == 2);
    CHECK(run({"--help"}).status == 0);
}

TEST_CASE("driver failures exit with status 1", "[cli]")
{
    const auto dir = scratch("failure");
    const Run r = run({"derive", "--problem", "heat", "--points", "10", "--tau", "0.99999999", "--out", dir.string()});
    CHECK(r.status == 1);
    CHECK_THAT(r.err, ContainsSubstring("error"));
}
