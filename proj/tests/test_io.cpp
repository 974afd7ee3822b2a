#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kfp/fixtures.hpp"
#include "kfp/io.hpp"
#include "kfp/solver.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>

using namespace kfp;
using nlohmann::json;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("space documents parse exactly") {
    SUBCASE("rational strings, integers, and decimal strings") {
        auto s = io::parse_space(R"({
            "labels": ["x", "y", "z"],
            "dist": [[0, "1", "4"], ["1", 0, 4], [4, "4", "0"]]
        })");
        CHECK(s->size() == 3);
        CHECK(s->d(0, 1) == Rat(1));
        CHECK(s->d(0, 2) == Rat(4));
        CHECK(s->provenance() == Provenance::Explicit);
    }
    SUBCASE("quoted decimals stay exact") {
        auto raw = io::parse_space_raw(R"({"labels": ["a", "b"], "dist": [[0, "0.25"], ["0.25", 0]]})");
        CHECK(raw.dist[0][1] == Rat(1, 4));
    }
    SUBCASE("bare floating literals are rejected") {
        CHECK_THROWS_AS(
            io::parse_space_raw(R"({"labels": ["a", "b"], "dist": [[0, 0.25], [0.25, 0]]})"),
            io::ParseError);
    }
    SUBCASE("provenance round-trips") {
        auto raw = io::parse_space_raw(
            R"({"labels": ["a", "b"], "dist": [[0, 1], [1, 0]], "provenance": "repaired"})");
        CHECK(raw.provenance == Provenance::Repaired);
        CHECK_THROWS_AS(io::parse_space_raw(
                            R"({"labels": ["a"], "dist": [[0]], "provenance": "nope"})"),
                        io::ParseError);
    }
    SUBCASE("malformed documents") {
        CHECK_THROWS_AS(io::parse_space_raw("{"), io::ParseError);
        CHECK_THROWS_AS(io::parse_space_raw("[1, 2]"), io::ParseError);
        CHECK_THROWS_AS(io::parse_space_raw(R"({"labels": ["a"]})"), io::ParseError);
        CHECK_THROWS_AS(io::parse_space_raw(R"({"dist": [[0]]})"), io::ParseError);
        CHECK_THROWS_AS(io::parse_space_raw(R"({"labels": [1], "dist": [[0]]})"), io::ParseError);
        CHECK_THROWS_AS(
            io::parse_space_raw(R"({"labels": ["a", "b"], "dist": [[0, "x"], ["x", 0]]})"),
            io::ParseError);
    }
    SUBCASE("a violating matrix surfaces as a metric error with its report") {
        CHECK_THROWS_AS(io::parse_space(R"({
            "labels": ["a", "b", "c"],
            "dist": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
        })"),
                        MetricError);
    }
}

TEST_CASE("space rendering round-trips") {
    SpacePtr s = fixtures::three_point_space();
    std::string text = io::space_to_text(*s);
    auto back = io::parse_space(text);
    CHECK(back->labels() == s->labels());
    CHECK(back->matrix() == s->matrix());
    CHECK(back->provenance() == s->provenance());
}

TEST_CASE("map documents") {
    SpacePtr s = fixtures::three_point_space();
    SUBCASE("table parse and bind") {
        auto m = io::parse_map(R"({"table": {"x": "x", "y": "y", "z": "x"}})");
        REQUIRE(m.is_table);
        TableMap t = io::bind_table(m, s);
        CHECK(t.image() == std::vector<int>{0, 1, 0});
    }
    SUBCASE("binding rejects unknown, missing, and duplicate labels") {
        auto unknown = io::parse_map(R"({"table": {"x": "w", "y": "y", "z": "x"}})");
        CHECK_THROWS_AS(io::bind_table(unknown, s), io::ParseError);
        auto missing = io::parse_map(R"({"table": {"x": "x", "y": "y"}})");
        CHECK_THROWS_AS(io::bind_table(missing, s), io::ParseError);
        auto foreign = io::parse_map(R"({"table": {"x": "x", "y": "y", "z": "x", "w": "x"}})");
        CHECK_THROWS_AS(io::bind_table(foreign, s), io::ParseError);
    }
    SUBCASE("piecewise parse") {
        auto m = io::parse_map(R"({"piecewise": {
            "domain": ["0", "1"],
            "segments": [{"upto": "1/2", "slope": "1/20", "intercept": "0"},
                         {"upto": "1", "slope": "1/10", "intercept": "0"}]
        }})");
        REQUIRE(!m.is_table);
        REQUIRE(m.piecewise);
        CHECK(m.piecewise->evaluate(Rat(1, 2)) == Rat(1, 40));
    }
    SUBCASE("piecewise structural problems become parse errors") {
        CHECK_THROWS_AS(io::parse_map(R"({"piecewise": {
            "domain": ["1", "0"],
            "segments": [{"upto": "1", "slope": "1", "intercept": "0"}]
        }})"),
                        io::ParseError);
        CHECK_THROWS_AS(io::parse_map(R"({"piecewise": {"domain": ["0", "1"]}})"),
                        io::ParseError);
        CHECK_THROWS_AS(io::parse_map(R"({"neither": 1})"), io::ParseError);
    }
    SUBCASE("table and piecewise rendering round-trip") {
        TableMap t = fixtures::two_fixed_map();
        auto m = io::parse_map(io::table_to_text(t));
        CHECK(io::bind_table(m, s).image() == t.image());

        PiecewiseLinearMap p = fixtures::two_branch_family(Rat(20), Rat(10));
        auto back = io::parse_map(io::piecewise_to_text(p));
        REQUIRE(back.piecewise);
        CHECK(back.piecewise->lo() == p.lo());
        CHECK(back.piecewise->hi() == p.hi());
        CHECK(back.piecewise->segments().size() == p.segments().size());
        CHECK(back.piecewise->evaluate(Rat(3, 4)) == Rat(3, 40));
    }
}

TEST_CASE("file io errors") {
    CHECK_THROWS_AS(io::read_file("/nonexistent/path/space.json"), io::ParseError);
}

TEST_CASE("structured validation report") {
    RatMatrix d = {{Rat(0), Rat(1), Rat(5)}, {Rat(1), Rat(0), Rat(1)}, {Rat(5), Rat(1), Rat(0)}};
    ValidationReport r = validate_metric(d);
    json j = json::parse(io::validation_to_text(r, {"a", "b", "c"}, true));
    CHECK(j["ok"] == false);
    REQUIRE(j["violations"].size() == 1);
    CHECK(j["violations"][0]["axiom"] == "triangle");
    CHECK(j["violations"][0]["points"] == json::array({"a", "b", "c"}));
    CHECK(j["violations"][0]["lhs"] == "5");
    CHECK(j["violations"][0]["rhs"] == "2");
}

TEST_CASE("structured contraction report uses labels") {
    TableMap m = fixtures::two_fixed_map();
    json j = json::parse(io::report_to_text(classify(m), m.space(), true));
    CHECK(j["lambda_kannan"] == "inf");
    CHECK(j["lambda_gkannan"] == "1/2");
    CHECK(j["is_kannan"] == false);
    CHECK(j["is_gkannan"] == true);
    CHECK(j["witness_pair"] == json::array({"x", "y"}));
    CHECK(j["witness_triple"] == json::array({"x", "y", "z"}));
}

TEST_CASE("structured solve rendering") {
    TableMap m = fixtures::two_fixed_map();
    SolveResult r = picard_solve(m, 2, 8, Rat(1, 2));
    json j = json::parse(io::solve_to_text(r, m.space(), true));
    CHECK(j["outcome"] == "reached-fixed-point");
    CHECK(j["points"] == json::array({"z", "x"}));
    CHECK(j["step_distances"] == json::array({"4"}));
    CHECK(j["fixed_point"] == "x");
    CHECK(j["certificate"]["lambda"] == "1/2");
    CHECK(j["certificate"]["alpha"] == "2/3");
    CHECK(j["certificate"]["a"] == "4");
    CHECK(j["rate_check"]["pass"] == true);
    REQUIRE(j["tail_bounds"].size() == 1);
    CHECK(j["r_diagnostics"]["values"][0]["value"] == "1/2");

    AllStartsResult all = picard_solve_all(m, 3, Rat(1, 2));
    json ja = json::parse(io::all_starts_to_text(all, m.space(), true));
    CHECK(ja["all_reached"] == true);
    CHECK(ja["worst_steps"] == 1);
    REQUIRE(ja["starts"].size() == 3);
    CHECK(ja["starts"][2]["fixed_point"] == "x");
}

TEST_CASE("witness records round-trip byte-exactly through parse") {
    GeneratorConfig cfg;
    HuntResult h = hunt_independence(cfg, 0);  // fixture records only
    REQUIRE(h.records.size() == 6);
    for (const WitnessRecord& rec : h.records) {
        CAPTURE(to_string(rec.kind));
        std::string text = io::witness_to_text(rec);
        WitnessRecord back = io::parse_witness(text);
        CHECK(back.kind == rec.kind);
        CHECK(back.seed == rec.seed);
        CHECK(back.source == rec.source);
        CHECK(back.report.lambda_kannan == rec.report.lambda_kannan);
        CHECK(back.report.lambda_gkannan == rec.report.lambda_gkannan);
        CHECK(back.report.witness_pair == rec.report.witness_pair);
        CHECK(back.report.witness_triple == rec.report.witness_triple);
        if (rec.table) {
            REQUIRE(back.table);
            CHECK(back.table->image() == rec.table->image());
            CHECK(back.table->space().matrix() == rec.table->space().matrix());
        } else {
            REQUIRE(back.piecewise);
            CHECK(back.grid_n == rec.grid_n);
        }
        CHECK(io::witness_to_text(back) == text);
    }
}

TEST_CASE("the witness store appends instead of clobbering") {
    auto dir = fresh_dir("kfp_io_store_test");
    GeneratorConfig cfg;
    HuntResult h = hunt_independence(cfg, 0);

    const WitnessRecord* a = nullptr;
    const WitnessRecord* b = nullptr;
    for (const WitnessRecord& rec : h.records) {
        if (rec.kind != WitnessKind::KannanNotGkannan) continue;
        if (!a)
            a = &rec;
        else
            b = &rec;
    }
    REQUIRE(a);
    REQUIRE(b);  // two distinct fixtures of the same kind and seed

    std::string p1 = io::write_witness(*a, dir.string());
    CHECK(p1 == (dir / "kannan-not-gkannan_0.json").string());
    CHECK(io::write_witness(*a, dir.string()) == p1);  // identical content: reuse
    std::string p2 = io::write_witness(*b, dir.string());
    CHECK(p2 == (dir / "kannan-not-gkannan_0_1.json").string());
    CHECK(io::parse_witness(io::read_file(p2)).kind == WitnessKind::KannanNotGkannan);
    std::filesystem::remove_all(dir);
}

TEST_CASE("digests follow the declared hash") {
    // independent evaluation of the fnv1a-64 definition
    auto oracle = [](std::string_view s) {
        std::uint64_t h = 14695981039346656037ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    };
    CHECK(io::fnv1a("") == 14695981039346656037ULL);
    CHECK(io::fnv1a("abc") == oracle("abc"));
    CHECK(io::fnv1a("abc") == 0xe71fa2190541574bULL);
    CHECK(io::digest_string("abc") == "fnv1a64:e71fa2190541574b");
    CHECK(io::digest_string("") == "fnv1a64:cbf29ce484222325");
}

TEST_CASE("manifests carry everything needed for a rerun") {
    io::RunManifest m;
    m.command = "classify";
    m.inputs = {"space.json", "map.json"};
    m.parameters = {{"grid", "257"}};
    m.seed = 9;
    m.output_digest = io::digest_string("hello");
    json j = json::parse(io::manifest_to_text(m));
    CHECK(j["command"] == "classify");
    CHECK(j["inputs"] == json::array({"space.json", "map.json"}));
    CHECK(j["parameters"]["grid"] == "257");
    CHECK(j["seed"] == 9);
    CHECK(j["tool_version"] == io::tool_version);
    CHECK(j["output_digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
}
