#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "movplane/io.hpp"

using movplane::Json;

namespace {

struct Run {
    int code;
    std::string out;
};

/// Runs the CLI with the given arguments; stderr is merged into out.
Run cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(LAMBDA1_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("lambda1_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("support examples") {
    const Run a = cli("support --shape disk --R 1 --nu 0.6,0.8");
    CHECK(a.code == 0);
    CHECK(a.out == "-1.0\n");
    const Run b = cli("support --shape ellipse --a 2 --b 1 --nu 1,0");
    CHECK(b.code == 0);
    CHECK(b.out == "-2.0\n");
}

TEST_CASE("zero direction is a domain error") {
    const Run r = cli("support --shape disk --R 1 --nu 0,0");
    CHECK(r.code == 2);
    CHECK(r.out.find("direction must be nonzero") != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
    CHECK(cli("support --shape hexagon --nu 1,0").code == 2);
    CHECK(cli("support --shape ellipse --a -2 --b 1 --nu 1,0").code == 2);
    CHECK(cli("support --shape disk --nu 1,x").code == 2);
    CHECK(cli("support --no-such-flag").code == 2);
    CHECK(cli("").code == 2);
}

TEST_CASE("numeric errors exit with 3") {
    // a single Newton step cannot converge at p = 1.2
    const Run r = cli("solve --shape stadium --h 0.0625 --p 1.2 --max-iters 1 --out " + tmp("grid.csv"));
    CHECK(r.code == 3);
}

TEST_CASE("lambda1 examples") {
    const auto value = [](const std::string& args) {
        const Run r = cli("lambda1 " + args);
        REQUIRE(r.code == 0);
        return Json::parse(r.out)["lambda1"].get<double>();
    };
    CHECK(value("--shape stadium --L 2 --r 1 --nu 1,0") == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(std::abs(value("--shape disk --R 1 --nu 0,1")) <= 1e-7);
    CHECK(std::abs(value("--shape ellipse --a 2 --b 1 --nu 1,0")) <= 1e-7);
    CHECK(std::abs(value("--shape disk --theta 0.5")) <= 1e-7);
}

TEST_CASE("shape file input") {
    const std::string path = tmp("shape.json");
    std::ofstream(path) << R"({"shape": "stadium", "L": 2.0, "r": 1.0})";
    const Run r = cli("lambda1 --shape-file " + path + " --nu 1,0");
    CHECK(r.code == 0);
    CHECK(r.out == cli("lambda1 --shape stadium --L 2 --r 1 --nu 1,0").out);
}

TEST_CASE("classify the ellipse") {
    const Run r = cli("classify --shape ellipse --a 2 --b 1 --M0 90");
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["classification"] == "continuous");
}

TEST_CASE("verify on the stadium") {
    const Run r = cli("verify --shape stadium --L 2 --r 1 --p 1.5 --nu 1,0");
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["max_violation"].get<double>() <= 0.005);
}

TEST_CASE("counterexample exit code follows the claim") {
    const std::string path = tmp("report.json");
    const Run r = cli("counterexample --L 2 --r 1 --out " + path);
    const Json j = Json::parse(slurp(path));
    CHECK(j["lambda1_at_axis"].get<double>() == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(r.code == (j["claim_holds"].get<bool>() ? 0 : 1));
}

TEST_CASE("scan writes CSV and an optional SVG") {
    const std::string svg = tmp("scan.svg");
    std::filesystem::remove(svg);
    const Run r = cli("scan --shape disk --M 8");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("theta,a,lambda1,event_kind\n", 0) == 0);
    CHECK_FALSE(std::filesystem::exists(svg));
    CHECK(cli("scan --shape disk --M 8 --svg " + svg).code == 0);
    CHECK(slurp(svg).rfind("<svg", 0) == 0);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
    const std::string args = "scan --shape stadium --L 2 --r 1 --M 32";
    const Run a = cli(args + " --threads 1");
    const Run b = cli(args + " --threads 3");
    const Run c = cli(args, "LAMBDA1_THREADS=2");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
}

TEST_CASE("emitted configs re-run to identical results") {
    for (const std::string args :
         {"lambda1 --shape ellipse --a 2 --b 1 --nu 0.3,0.7 --tol-lambda 1e-7",
          "support --shape superellipse --a 1 --b 1 --m 4 --nu 1,1",
          "scan --shape stadium --M 16 --resolution 0.02",
          "solve --shape disk --h 0.125 --p 1.5"}) {
        CAPTURE(args);
        const Run direct = cli(args);
        REQUIRE(direct.code == 0);
        const Run cfg = cli(args + " --emit-config");
        REQUIRE(cfg.code == 0);
        const std::string path = tmp("config.json");
        std::ofstream(path) << cfg.out;
        const Run rerun = cli("--config " + path);
        CHECK(rerun.code == 0);
        CHECK(rerun.out == direct.out);
        // emitting again from the config is a fixed point
        CHECK(cli("--config " + path + " --emit-config").out == cfg.out);
    }
}

}  // TEST_SUITE
