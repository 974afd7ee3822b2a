#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kfp/io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int code = -1;
    std::string out;
    std::string err;
};

const fs::path& work_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "kfp_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

void put(const std::string& name, const std::string& content) {
    std::ofstream f(work_dir() / name);
    f << content;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

CmdResult run(const std::string& args) {
    fs::path out = work_dir() / "stdout.txt";
    fs::path err = work_dir() / "stderr.txt";
    std::string cmd = "cd " + work_dir().string() + " && " + KFP_BIN_PATH + " " + args +
                      " > " + out.string() + " 2> " + err.string();
    int status = std::system(cmd.c_str());
    CmdResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

void write_fixture_files() {
    put("ex1_space.json", R"({
        "labels": ["x", "y", "z"],
        "dist": [[0, 1, 4], [1, 0, 4], [4, 4, 0]]
    })");
    put("ex1_map.json", R"({"table": {"x": "x", "y": "y", "z": "x"}})");
    put("ex2_map.json", R"({"table": {"x": "y", "y": "x", "z": "x"}})");
    put("identity_map.json", R"({"table": {"x": "x", "y": "y", "z": "z"}})");
    put("rotation_map.json", R"({"table": {"x": "y", "y": "z", "z": "x"}})");
    put("ex3_map.json", R"({"piecewise": {
        "domain": ["0", "1"],
        "segments": [{"upto": "1", "slope": "1/5", "intercept": "0"}]
    }})");
    put("two_point_space.json", R"({"labels": ["a", "b"], "dist": [[0, 1], [1, 0]]})");
    put("two_point_map.json", R"({"table": {"a": "a", "b": "a"}})");
    put("bad_space.json", R"({
        "labels": ["a", "b", "c"],
        "dist": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    })");
    put("broken.json", "{\"labels\": [");
}

struct Fixture {
    Fixture() { write_fixture_files(); }
};
[[maybe_unused]] const Fixture fixture_files;

}  // namespace

TEST_CASE("validate exit codes partition the outcomes") {
    CHECK(run("validate ex1_space.json").code == 0);

    CmdResult bad = run("validate bad_space.json");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("triangle") != std::string::npos);

    CHECK(run("validate broken.json").code == 2);
    CHECK(run("validate no_such_file.json").code == 2);
}

TEST_CASE("classify reports the fixture values") {
    CmdResult r = run("--format structured classify ex1_space.json ex1_map.json");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["lambda_gkannan"] == "1/2");
    CHECK(j["lambda_kannan"] == "inf");
    CHECK(j["is_kannan"] == false);
    CHECK(j["is_gkannan"] == true);

    CmdResult r2 = run("--format structured classify ex1_space.json ex2_map.json");
    REQUIRE(r2.code == 0);
    CHECK(json::parse(r2.out)["lambda_gkannan"] == "1/3");
}

TEST_CASE("classify refuses spaces below three points") {
    CmdResult r = run("classify two_point_space.json two_point_map.json");
    CHECK(r.code == 1);
    CHECK(r.err.find("|X| >= 3") != std::string::npos);
}

TEST_CASE("piecewise maps classify against a sample grid") {
    CmdResult r = run("--format structured classify ex3_map.json --grid 257");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["lambda_gkannan"] == "128/257");
    CHECK(j["gkannan_ceiling"] == "1/2");
    CHECK(j["is_gkannan"] == true);
    CHECK(j["grid_n"] == 257);

    // a table map alone, or a piecewise map with a space, is an input error
    CHECK(run("classify ex1_map.json").code == 2);
    CHECK(run("classify ex1_space.json ex3_map.json").code == 2);
}

TEST_CASE("solve exit codes follow the orbit outcome") {
    CmdResult ok = run("solve ex1_space.json ex1_map.json --start z");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("fixed point x") != std::string::npos);

    CHECK(run("solve ex1_space.json identity_map.json --start y").code == 0);

    CmdResult cyc = run("solve ex1_space.json ex2_map.json --start z");
    CHECK(cyc.code == 3);
    CHECK(cyc.err.find("condition (i)") != std::string::npos);

    CmdResult rot = run("solve ex1_space.json rotation_map.json --start x");
    CHECK(rot.code == 4);
    CHECK(rot.err.find("budget") != std::string::npos);
}

TEST_CASE("solve scans all starts by default") {
    CmdResult r = run("--format structured solve ex1_space.json ex1_map.json");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["all_reached"] == true);
    CHECK(j["worst_steps"] == 1);

    CHECK(run("solve ex1_space.json ex2_map.json").code == 3);
}

TEST_CASE("reproduce runs the embedded case studies") {
    CmdResult one = run("reproduce 1");
    CHECK(one.code == 0);
    CHECK(one.out.find("pass") != std::string::npos);

    CmdResult all = run("reproduce all");
    CHECK(all.code == 0);
    CHECK(all.out.find("all passed") != std::string::npos);
    CHECK(run("reproduce 9").code == 2);
}

TEST_CASE("hunt is deterministic and falsification comes back empty") {
    std::string flags = "hunt --seed 5 --size 4 --budget 60 --dir wits_a";
    CmdResult a = run(flags);
    REQUIRE(a.code == 0);
    CmdResult b = run("hunt --seed 5 --size 4 --budget 60 --dir wits_b");
    REQUIRE(b.code == 0);
    CHECK(a.out.substr(0, a.out.find("wrote")) == b.out.substr(0, b.out.find("wrote")));
    CHECK(fs::exists(work_dir() / "wits_a"));

    CmdResult f = run("hunt --kind falsify-theorem1 --seed 5 --size 4 --budget 60");
    CHECK(f.code == 0);
    CHECK(f.out.find("counterexamples none") != std::string::npos);
}

TEST_CASE("hunt filters by kind") {
    CmdResult r = run("hunt --seed 5 --size 4 --budget 20 --kind gkannan-not-kannan --dir wits_k");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("kannan-not-gkannan 0") != std::string::npos);
    for (const auto& entry : fs::directory_iterator(work_dir() / "wits_k")) {
        std::string name = entry.path().filename().string();
        CHECK(name.rfind("gkannan-not-kannan_", 0) == 0);
    }
}

TEST_CASE("outputs written with --out carry a faithful manifest") {
    CmdResult r = run("--format structured --out report.json classify ex1_space.json ex1_map.json");
    REQUIRE(r.code == 0);
    std::string report = slurp(work_dir() / "report.json");
    CHECK(report == r.out);

    json man = json::parse(slurp(work_dir() / "report.json.manifest.json"));
    CHECK(man["command"] == "classify");
    CHECK(man["inputs"] == json::array({"ex1_space.json", "ex1_map.json"}));
    CHECK(man["tool_version"] == kfp::io::tool_version);
    CHECK(man["output_digest"] == kfp::io::digest_string(report));
}

TEST_CASE("bad invocations exit with the input-failure code") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("classify").code == 2);
    CHECK(run("validate ex1_space.json --nope").code == 2);
}
