#include "kfp/io.hpp"
#include "kfp/repro.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>
#include <vector>

using namespace kfp;
using nlohmann::json;

namespace {

void deliver(const std::string& text, const std::string& out_path,
             io::RunManifest manifest) {
    std::cout << text;
    if (out_path.empty()) return;
    io::write_file(out_path, text);
    manifest.output_digest = io::digest_string(text);
    io::write_file(out_path + ".manifest.json", io::manifest_to_text(manifest));
}

void add_param(io::RunManifest& m, std::string key, std::string value) {
    m.parameters.emplace_back(std::move(key), std::move(value));
}

void require_three(const TableMap& map) {
    if (map.size() < 3)
        throw StructureError("contraction analysis needs |X| >= 3 points; this space has " +
                             std::to_string(map.size()));
}

SpacePtr grid_space(const PiecewiseLinearMap& map, int grid) {
    return std::make_shared<const FiniteMetricSpace>(
        FiniteMetricSpace::sample_interval(map.lo(), map.hi(), grid));
}

int run_validate(const std::string& path, bool structured, const std::string& out_path) {
    io::ParsedSpace raw = io::parse_space_raw(io::read_file(path));
    if (raw.labels.size() != raw.dist.size())
        throw io::ParseError("label count does not match the matrix size");
    ValidationReport rep = validate_metric(raw.dist);

    io::RunManifest man;
    man.command = "validate";
    man.inputs = {path};
    deliver(io::validation_to_text(rep, raw.labels, structured), out_path, man);
    return rep.ok ? 0 : 1;
}

int run_classify(const std::string& file1, const std::string& file2, int grid,
                 bool structured, const std::string& out_path) {
    io::RunManifest man;
    man.command = "classify";
    std::string text;

    if (!file2.empty()) {
        man.inputs = {file1, file2};
        SpacePtr space = io::load_space(file1);
        io::ParsedMap pm = io::load_map(file2);
        if (!pm.is_table)
            throw io::ParseError(
                "piecewise maps classify on a sampled grid; pass the map file alone "
                "with --grid");
        TableMap map = io::bind_table(pm, space);
        require_three(map);
        text = io::report_to_text(classify(map), *space, structured);
    } else {
        man.inputs = {file1};
        io::ParsedMap pm = io::load_map(file1);
        if (pm.is_table)
            throw io::ParseError("a table map needs a space file: kfp classify <space> <map>");
        add_param(man, "grid", std::to_string(grid));
        SampledReport sr = sampled_classify(*pm.piecewise, grid);
        text = io::sampled_to_text(sr, *pm.piecewise, structured);
    }
    deliver(text, out_path, man);
    return 0;
}

int solve_exit(OrbitOutcome o) {
    switch (o) {
        case OrbitOutcome::ReachedFixedPoint: return 0;
        case OrbitOutcome::TwoCycleDetected: return 3;
        case OrbitOutcome::BudgetExhausted: return 4;
    }
    return 4;
}

int run_solve(const std::string& file1, const std::string& file2, int grid,
              const std::string& start, int budget, bool structured,
              const std::string& out_path) {
    io::RunManifest man;
    man.command = "solve";

    SpacePtr space;
    std::optional<TableMap> map;
    if (!file2.empty()) {
        man.inputs = {file1, file2};
        space = io::load_space(file1);
        io::ParsedMap pm = io::load_map(file2);
        if (!pm.is_table)
            throw io::ParseError(
                "piecewise maps solve on a sampled grid; pass the map file alone with "
                "--grid");
        map.emplace(io::bind_table(pm, space));
    } else {
        man.inputs = {file1};
        io::ParsedMap pm = io::load_map(file1);
        if (pm.is_table)
            throw io::ParseError("a table map needs a space file: kfp solve <space> <map>");
        add_param(man, "grid", std::to_string(grid));
        space = grid_space(*pm.piecewise, grid);
        map.emplace(discretize(*pm.piecewise, space));
    }
    require_three(*map);

    ContractionReport rep = classify(*map);
    std::optional<Rat> lambda;
    if (rep.is_gkannan) lambda = rep.lambda_gkannan.value();

    int steps = budget > 0 ? budget : map->size();
    add_param(man, "budget", std::to_string(steps));

    std::string text;
    int rc = 0;
    if (!start.empty()) {
        add_param(man, "start", start);
        auto idx = space->index_of(start);
        if (!idx) throw io::ParseError("unknown start label: " + start);
        SolveResult res = picard_solve(*map, *idx, steps, lambda);
        text = io::solve_to_text(res, *space, structured);
        rc = solve_exit(res.trace.outcome);
    } else {
        AllStartsResult res = picard_solve_all(*map, steps, lambda);
        text = io::all_starts_to_text(res, *space, structured);
        if (!res.all_reached) {
            rc = 4;
            for (const SolveResult& r : res.results)
                if (r.trace.outcome == OrbitOutcome::TwoCycleDetected) rc = 3;
        }
    }
    deliver(text, out_path, man);
    if (rc == 3)
        std::cerr << "error: condition (i) violated: an orbit returned to its start "
                     "after two steps\n";
    else if (rc == 4)
        std::cerr << "error: iteration budget exhausted before reaching a fixed point\n";
    return rc;
}

int run_reproduce(const std::string& id, bool structured, const std::string& out_path) {
    std::vector<int> ids;
    if (id == "all")
        ids = {1, 2, 3, 4};
    else
        ids = {std::stoi(id)};
    auto results = repro::run_cases(ids);

    io::RunManifest man;
    man.command = "reproduce";
    add_param(man, "case", id);
    deliver(repro::render(results, structured), out_path, man);
    return repro::all_pass(results) ? 0 : 1;
}

int run_hunt(const GeneratorConfig& cfg, int budget, const std::string& kind,
             const std::string& dir, bool structured, const std::string& out_path) {
    io::RunManifest man;
    man.command = "hunt";
    man.seed = cfg.seed;
    add_param(man, "seed", std::to_string(cfg.seed));
    add_param(man, "size", std::to_string(cfg.size));
    add_param(man, "budget", std::to_string(budget));
    add_param(man, "method", to_string(cfg.method));
    add_param(man, "policy", to_string(cfg.policy));
    if (!kind.empty()) add_param(man, "kind", kind);

    if (kind == "falsify-theorem1") {
        FalsifyResult f = falsify_theorem1(cfg, budget);
        std::string text;
        if (structured) {
            json root = {{"attempts", f.attempts},
                         {"candidates", f.candidates},
                         {"counterexample", nullptr}};
            if (f.counterexample) root["counterexample"] = f.counterexample_seed;
            text = root.dump(2) + "\n";
        } else {
            text = "attempts " + std::to_string(f.attempts) + "\ncandidates " +
                   std::to_string(f.candidates) + "\ncounterexamples " +
                   (f.counterexample ? "1 (seed " + std::to_string(f.counterexample_seed) + ")"
                                     : "none") +
                   "\n";
        }
        if (f.counterexample) {
            io::write_file(dir + "/falsify_" + std::to_string(f.counterexample_seed) + ".space.json",
                           io::space_to_text(f.counterexample->space()));
            io::write_file(dir + "/falsify_" + std::to_string(f.counterexample_seed) + ".map.json",
                           io::table_to_text(*f.counterexample));
        }
        deliver(text, out_path, man);
        return f.counterexample ? 1 : 0;
    }

    std::optional<WitnessKind> filter;
    if (!kind.empty()) {
        filter = witness_kind_from_string(kind);
        if (!filter) throw io::ParseError("unknown witness kind: " + kind);
    }
    HuntResult h = hunt_independence(cfg, budget);
    std::vector<std::string> written;
    std::array<int, witness_kind_count> kept{};
    for (const WitnessRecord& rec : h.records) {
        if (filter && rec.kind != *filter) continue;
        ++kept[static_cast<size_t>(rec.kind)];
        written.push_back(io::write_witness(rec, dir));
    }

    std::string text;
    if (structured) {
        json counts = json::object();
        for (int k = 0; k < witness_kind_count; ++k)
            counts[to_string(static_cast<WitnessKind>(k))] = kept[static_cast<size_t>(k)];
        json root = {{"attempts", h.attempts}, {"counts", counts}, {"written", written}};
        text = root.dump(2) + "\n";
    } else {
        std::string lines = "attempts " + std::to_string(h.attempts) + "\n";
        for (int k = 0; k < witness_kind_count; ++k)
            lines += to_string(static_cast<WitnessKind>(k)) + " " +
                     std::to_string(kept[static_cast<size_t>(k)]) + "\n";
        lines += "wrote " + std::to_string(written.size()) + " record(s) to " + dir + "\n";
        text = lines;
    }
    deliver(text, out_path, man);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact contraction coefficients and certified fixed-point iteration "
                 "on finite metric spaces"};
    app.require_subcommand(1);

    std::string format = "human";
    std::string out_path;
    app.add_option("--format", format, "human or structured")
        ->check(CLI::IsMember({"human", "structured"}));
    app.add_option("--out", out_path,
                   "write the report here plus a .manifest.json beside it");

    auto* validate = app.add_subcommand("validate", "check the metric axioms of a space file");
    std::string v_file;
    validate->add_option("space", v_file, "space file")->required();
    validate->fallthrough();

    auto* cls = app.add_subcommand("classify", "contraction coefficients and class flags");
    std::string c_file1, c_file2;
    int c_grid = 257;
    cls->add_option("space", c_file1, "space file, or the map file for piecewise maps")
        ->required();
    cls->add_option("map", c_file2, "map file (omit for piecewise maps)");
    cls->add_option("--grid", c_grid, "sample resolution for piecewise maps")
        ->check(CLI::Range(3, 100000));
    cls->fallthrough();

    auto* solve = app.add_subcommand("solve", "iterate to a fixed point with a rate certificate");
    std::string s_file1, s_file2, s_start;
    int s_grid = 257, s_budget = 0;
    solve->add_option("space", s_file1, "space file, or the map file for piecewise maps")
        ->required();
    solve->add_option("map", s_file2, "map file (omit for piecewise maps)");
    solve->add_option("--grid", s_grid, "sample resolution for piecewise maps")
        ->check(CLI::Range(3, 100000));
    solve->add_option("--start", s_start, "start label; default scans every start");
    solve->add_option("--budget", s_budget, "max iteration steps; default |X|")
        ->check(CLI::Range(1, 1 << 20));
    solve->fallthrough();

    auto* repro_cmd = app.add_subcommand("reproduce", "run the embedded case studies");
    std::string r_id;
    repro_cmd->add_option("case", r_id, "1, 2, 3, 4, or all")
        ->required()
        ->check(CLI::IsMember({"1", "2", "3", "4", "all"}));
    repro_cmd->fallthrough();

    auto* hunt = app.add_subcommand("hunt", "search seeded random instances for witnesses");
    GeneratorConfig h_cfg;
    int h_budget = 1000;
    std::string h_kind, h_dir = "witnesses";
    std::string h_method = "euclidean-embedding", h_policy = "uniform-random";
    hunt->add_option("--seed", h_cfg.seed, "base seed");
    hunt->add_option("--size", h_cfg.size, "points per space")->check(CLI::Range(3, 64));
    hunt->add_option("--budget", h_budget, "instances to try")->check(CLI::Range(1, 10000000));
    hunt->add_option("--kind", h_kind,
                     "restrict to one witness kind, or falsify-theorem1")
        ->check(CLI::IsMember({"kannan-not-gkannan", "gkannan-not-kannan",
                               "no-fixed-point-condition-i-violated", "two-fixed-points",
                               "falsify-theorem1"}));
    hunt->add_option("--dir", h_dir, "witness record directory");
    hunt->add_option("--method", h_method, "space generator")
        ->check(CLI::IsMember({"euclidean-embedding", "repaired-random-matrix"}));
    hunt->add_option("--policy", h_policy, "map generator")
        ->check(CLI::IsMember({"uniform-random", "fixed-point-biased"}));
    hunt->add_option("--pinned", h_cfg.pinned, "fixed points pinned under fixed-point-biased")
        ->check(CLI::Range(0, 64));
    hunt->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    bool structured = format == "structured";
    try {
        if (app.got_subcommand(validate))
            return run_validate(v_file, structured, out_path);
        if (app.got_subcommand(cls))
            return run_classify(c_file1, c_file2, c_grid, structured, out_path);
        if (app.got_subcommand(solve))
            return run_solve(s_file1, s_file2, s_grid, s_start, s_budget, structured, out_path);
        if (app.got_subcommand(repro_cmd))
            return run_reproduce(r_id, structured, out_path);
        if (app.got_subcommand(hunt)) {
            h_cfg.method = *space_method_from_string(h_method);
            h_cfg.policy = *map_policy_from_string(h_policy);
            return run_hunt(h_cfg, h_budget, h_kind, h_dir, structured, out_path);
        }
    } catch (const io::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MetricError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const StructureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
