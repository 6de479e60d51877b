// Integration tests driving the wfq binary end to end.  The binary path
// arrives in the WFQ_CLI environment variable (set by ctest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "wfq/io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "wfq-cli-tests";
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("WFQ_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "WFQ_CLI must point at the wfq binary");
    const fs::path out = scratch_dir() / "stdout.txt";
    const std::string cmd =
        std::string(bin) + " " + args + " > " + out.string() + " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WEXITSTATUS(status);
    res.stdout_text = wfq::read_file(out);
    return res;
}

}  // namespace

TEST_CASE("fixed-points on the worked example") {
    auto res = run_cli("fixed-points --fitness 5,2,4 --a 1.0");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.stdout_text);
    CHECK(doc["index_set"] == json::array({0, 2, 3}));
    REQUIRE(doc["fixed_points"].size() == 3);
    CHECK(doc["fixed_points"][0]["b"] == 0);
    CHECK(doc["fixed_points"][2]["b"] == 3);
    for (const auto& fp : doc["fixed_points"])
        CHECK(fp["residual"].get<double>() <= 1e-10);
}

TEST_CASE("fixed-points beyond the error threshold") {
    auto res = run_cli("fixed-points --fitness 10 --a 3");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.stdout_text);
    REQUIRE(doc["fixed_points"].size() == 1);
    CHECK(doc["fixed_points"][0]["b"] == 1);
    CHECK(doc["fixed_points"][0]["rho"] == json::array({0.0}));
}

TEST_CASE("usage and config errors exit with code 2") {
    CHECK(run_cli("fixed-points --fitness 5,2,5 --a 1").exit_code == 2);
    CHECK(run_cli("fixed-points --a 1").exit_code == 2);
    CHECK(run_cli("quasipotential --fitness 4 --a 1.49 --resolution 50").exit_code == 2);
    CHECK(run_cli("definitely-not-a-command").exit_code == 2);
}

TEST_CASE("guard violations exit with code 3") {
    CHECK(run_cli("lumping-check --ell 12 --kappa 2 --q 0.1").exit_code == 3);
    CHECK(run_cli("quasipotential --fitness 9,5,4,3,2.5,2 --a 0.1 --resolution 4").exit_code ==
          3);
}

TEST_CASE("iterate reaches the sharp-peak fixed point") {
    auto res = run_cli("iterate --fitness 4 --a 0.693 --r0 0.9");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.stdout_text);
    CHECK(doc["converged"] == true);
    CHECK(doc["limit"][0].get<double>() ==
          doctest::Approx((4 * std::exp(-0.693) - 1) / 3).epsilon(1e-6));
}

TEST_CASE("lumping-check and matrix export") {
    const fs::path csv = scratch_dir() / "matrix.csv";
    auto res = run_cli("lumping-check --ell 5 --kappa 3 --q 0.2 --csv " + csv.string());
    REQUIRE(res.exit_code == 0);
    CHECK(res.stdout_text.find("max abs diff") != std::string::npos);
    CHECK(res.stdout_text.find("< 1e-10") != std::string::npos);
    const std::string body = wfq::read_file(csv);
    CHECK(body.rfind("k,l,prob\n", 0) == 0);
    // header + 36 entries
    CHECK(std::count(body.begin(), body.end(), '\n') == 37);
}

TEST_CASE("quasipotential JSON fields") {
    auto res = run_cli("quasipotential --fitness 4 --a 0.693 --resolution 300 --no-path");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.stdout_text);
    CHECK(doc["value"].get<double>() > 0.0);
    CHECK(doc["value"].get<double>() <= 0.405466);
    CHECK(doc["resolution"] == 300);
    CHECK(doc.contains("error_estimate"));
}

TEST_CASE("phase-diagram CSV layout") {
    auto res = run_cli(
        "phase-diagram --fitness 4 --a-range 0.4:0.8:0.2 --alpha-range 1:41:20 --kappa 2 "
        "--resolution 200");
    REQUIRE(res.exit_code == 0);
    CHECK(res.stdout_text.rfind("a,alpha,psi,ln_kappa_over_alpha,phase\n", 0) == 0);
    // 3 a-values x 3 alpha-values + header
    CHECK(std::count(res.stdout_text.begin(), res.stdout_text.end(), '\n') == 10);
    CHECK(res.stdout_text.find("supercritical") != std::string::npos);
    CHECK(res.stdout_text.find("subcritical") != std::string::npos);
}

TEST_CASE("hitting-time runs are deterministic given a seed") {
    const fs::path out1 = scratch_dir() / "times1.csv";
    const fs::path out2 = scratch_dir() / "times2.csv";
    const std::string args =
        "hitting-time --kind tau-star --k 0 --ell 6 --kappa 2 --a 1 --m 6 "
        "--replicas 30 --cap 100000 --seed 777 --out ";
    REQUIRE(run_cli(args + out1.string()).exit_code == 0);
    REQUIRE(run_cli(args + out2.string()).exit_code == 0);
    const std::string body1 = wfq::read_file(out1);
    CHECK(body1 == wfq::read_file(out2));
    CHECK(body1.rfind("replica,seed,value,censored\n", 0) == 0);
    CHECK(std::count(body1.begin(), body1.end(), '\n') == 31);
}

TEST_CASE("simulate consumes a TOML config deterministically") {
    const fs::path cfg = scratch_dir() / "run.toml";
    {
        std::ofstream out(cfg);
        out << "ell = 20\nkappa = 2\nq = 0.02\nm = 50\nfitness = [6.0]\n"
            << "seed = 99\nhorizon = 300\nburn_in = 50\nreplicas = 2\nstart = \"master\"\n";
    }
    const fs::path out1 = scratch_dir() / "stats1.json";
    const fs::path out2 = scratch_dir() / "stats2.json";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + out1.string()).exit_code ==
            0);
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + out2.string()).exit_code ==
            0);
    CHECK(wfq::read_file(out1) == wfq::read_file(out2));
    const json doc = json::parse(wfq::read_file(out1));
    CHECK(doc["replicas"].size() == 2);
    CHECK(doc["config"]["seed"] == 99);
    CHECK(doc["mean_over_replicas"].size() == 1);
    const double mean0 = doc["mean_over_replicas"][0].get<double>();
    CHECK(mean0 > 0.0);
    CHECK(mean0 <= 1.0);
}

TEST_CASE("missing config file is a config error") {
    CHECK(run_cli("simulate --config /nonexistent/run.toml").exit_code == 2);
}
