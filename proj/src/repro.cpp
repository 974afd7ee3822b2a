#include "kfp/repro.hpp"

#include "kfp/fixtures.hpp"
#include "kfp/search.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace kfp::repro {

namespace {

using nlohmann::json;

void add(CaseResult& cr, std::string name, std::string expected,
         std::string computed, bool pass) {
    cr.pass = cr.pass && pass;
    cr.checks.push_back(
        Check{std::move(name), std::move(expected), std::move(computed), pass});
}

std::string class_string(const ContractionReport& r) {
    if (r.is_kannan && r.is_gkannan) return "kannan and gkannan";
    if (r.is_kannan) return "kannan only";
    if (r.is_gkannan) return "gkannan only";
    return "neither";
}

std::string label_list(const FiniteMetricSpace& space, const std::vector<int>& idx) {
    if (idx.empty()) return "none";
    std::string out;
    for (int i : idx) {
        if (!out.empty()) out += " ";
        out += space.label(i);
    }
    return out;
}

std::string orbit_string(const FiniteMetricSpace& space, const OrbitTrace& trace) {
    std::string out;
    for (int p : trace.points) {
        if (!out.empty()) out += " -> ";
        out += space.label(p);
    }
    return out + ", " + to_string(trace.outcome);
}

bool within_one_percent(const ExtRat& v, const Rat& target) {
    if (v.is_inf()) return false;
    Rat diff = v.value() - target;
    if (diff < 0) diff = -diff;
    return diff * 100 <= target;
}

}  // namespace

CaseResult case_one() {
    CaseResult cr;
    cr.id = 1;
    cr.title = "two fixed points on three points";
    TableMap map = fixtures::two_fixed_map();
    const FiniteMetricSpace& space = map.space();

    ContractionReport rep = classify(map);
    add(cr, "gkannan coefficient", "1/2", to_string(rep.lambda_gkannan),
        rep.lambda_gkannan == ExtRat::finite(Rat(1, 2)));
    add(cr, "kannan coefficient", "inf", to_string(rep.lambda_kannan),
        rep.lambda_kannan.is_inf());
    add(cr, "classification", "gkannan only", class_string(rep),
        rep.is_gkannan && !rep.is_kannan);

    std::vector<int> fixed = fixed_points(map);
    add(cr, "fixed points", "x y", label_list(space, fixed),
        fixed == std::vector<int>{0, 1});

    TwoCycleCheck tc = two_cycle_free(map);
    add(cr, "two-cycle check", "none",
        tc.pass ? "none" : "witness " + space.label(*tc.witness), tc.pass);

    SolveResult solve = picard_solve(map, *space.index_of("z"), 8, Rat(1, 2));
    bool reached = solve.trace.outcome == OrbitOutcome::ReachedFixedPoint &&
                   solve.fixed_point && *solve.fixed_point == 0 &&
                   solve.trace.steps() == 1;
    add(cr, "picard from z", "z -> x, reached-fixed-point",
        orbit_string(space, solve.trace), reached);

    bool r_ok = solve.r_diagnostics && solve.r_diagnostics->values.size() == 1 &&
                solve.r_diagnostics->values[0].n == 1 &&
                solve.r_diagnostics->values[0].value == Rat(1, 2);
    std::string r_str = "absent";
    if (solve.r_diagnostics && !solve.r_diagnostics->values.empty())
        r_str = to_string(solve.r_diagnostics->values[0].value);
    add(cr, "uniqueness ratio R_1", "1/2", r_str, r_ok);
    return cr;
}

CaseResult case_two() {
    CaseResult cr;
    cr.id = 2;
    cr.title = "a two-cycle with no fixed point";
    TableMap map = fixtures::period_two_map();
    const FiniteMetricSpace& space = map.space();

    ContractionReport rep = classify(map);
    add(cr, "gkannan coefficient", "1/3", to_string(rep.lambda_gkannan),
        rep.lambda_gkannan == ExtRat::finite(Rat(1, 3)));
    add(cr, "kannan coefficient", "1/2", to_string(rep.lambda_kannan),
        rep.lambda_kannan == ExtRat::finite(Rat(1, 2)));
    add(cr, "lipschitz coefficient", "1", to_string(rep.lipschitz),
        rep.lipschitz == ExtRat::finite(Rat(1)));
    add(cr, "classification", "gkannan only", class_string(rep),
        rep.is_gkannan && !rep.is_kannan);

    std::vector<int> fixed = fixed_points(map);
    add(cr, "fixed points", "none", label_list(space, fixed), fixed.empty());

    TwoCycleCheck tc = two_cycle_free(map);
    add(cr, "two-cycle check", "witness x",
        tc.pass ? "none" : "witness " + space.label(*tc.witness),
        !tc.pass && tc.witness && *tc.witness == 0);

    SolveResult solve = picard_solve(map, *space.index_of("z"), 16);
    bool cycled = solve.trace.outcome == OrbitOutcome::TwoCycleDetected &&
                  solve.trace.points == std::vector<int>{2, 0, 1, 0};
    add(cr, "picard from z", "z -> x -> y -> x, two-cycle-detected",
        orbit_string(space, solve.trace), cycled);
    return cr;
}

CaseResult case_three() {
    CaseResult cr;
    cr.id = 3;
    cr.title = "linear family on the default grid";
    struct Row {
        Rat a;
        std::string name;
        bool gk;
    };
    const std::vector<Row> rows = {{Rat(7, 2), "a=7/2", false},
                                   {Rat(4), "a=4", false},
                                   {Rat(9, 2), "a=9/2", true},
                                   {Rat(5), "a=5", true}};
    for (const Row& row : rows) {
        PiecewiseLinearMap map = fixtures::linear_family(row.a);
        SampledReport sr = sampled_classify(map, 257);
        Rat kt = Rat(1) / (row.a - 1);
        Rat gt = Rat(2) / (row.a - 1);
        add(cr, row.name + " kannan coefficient", to_string(kt) + " within 1%",
            to_string(sr.report.lambda_kannan),
            within_one_percent(sr.report.lambda_kannan, kt));
        add(cr, row.name + " gkannan coefficient", to_string(gt) + " within 1%",
            to_string(sr.report.lambda_gkannan),
            within_one_percent(sr.report.lambda_gkannan, gt));
        add(cr, row.name + " classification",
            row.gk ? "kannan and gkannan" : "kannan only", class_string(sr.report),
            sr.report.is_kannan && sr.report.is_gkannan == row.gk);
    }
    return cr;
}

CaseResult case_four() {
    CaseResult cr;
    cr.id = 4;
    cr.title = "two-branch map from the parameter search";
    const Rat lambda(1, 2);
    ParamSearchResult ps = find_two_branch_params(lambda);

    std::string pair_str = ps.found
                               ? "a=" + to_string(ps.a) + ", b=" + to_string(ps.b)
                               : "none: " + ps.tightest_failing;
    add(cr, "parameter search", "a > b with both slope bounds", pair_str,
        ps.found && ps.a > ps.b && ps.audit.lower_bound_a && ps.audit.lower_bound_b);
    add(cr, "seam case audits", "both mixed cases clean",
        "checked " + std::to_string(ps.audit.checked_triples) + " triples",
        ps.audit.mixed_case_two_low && ps.audit.mixed_case_one_low &&
            ps.audit.checked_triples > 0);
    if (!ps.found) return cr;

    PiecewiseLinearMap family = fixtures::two_branch_family(ps.a, ps.b);
    TableMap disc = discretize(family, fixtures::unit_grid(257));
    TripleResult gk = gkannan_coefficient(disc);
    add(cr, "quantized map keeps the bound", "gkannan coefficient < 2/3",
        to_string(gk.value), gk.value.less_than(Rat(2, 3)));

    const FiniteMetricSpace& space = disc.space();
    int seam = -1;
    for (int i = 0; i < space.size(); ++i)
        if (space.grid_point(i) == Rat(1, 2)) seam = i;
    bool jump_ok = seam >= 0 && seam + 1 < space.size();
    int seam_gap = 0;
    for (int i = 0; jump_ok && i + 1 < space.size(); ++i) {
        int gap = std::abs(disc.apply(i + 1) - disc.apply(i));
        if (i == seam)
            seam_gap = gap;
        else if (gap > 1)
            jump_ok = false;
    }
    jump_ok = jump_ok && seam_gap >= 2;
    add(cr, "discontinuity sits at the seam",
        "image jump of at least 2 grid steps only there",
        seam >= 0 ? "jump of " + std::to_string(seam_gap) + " steps at index " +
                        std::to_string(seam)
                  : "no grid point owns 1/2",
        jump_ok);
    return cr;
}

std::vector<CaseResult> run_cases(const std::vector<int>& ids) {
    std::vector<CaseResult> out;
    for (int id : ids) {
        switch (id) {
            case 1: out.push_back(case_one()); break;
            case 2: out.push_back(case_two()); break;
            case 3: out.push_back(case_three()); break;
            case 4: out.push_back(case_four()); break;
            default:
                throw StructureError("unknown case id " + std::to_string(id));
        }
    }
    return out;
}

bool all_pass(const std::vector<CaseResult>& results) {
    for (const CaseResult& cr : results)
        if (!cr.pass) return false;
    return true;
}

std::string render(const std::vector<CaseResult>& results, bool structured) {
    if (structured) {
        json cases = json::array();
        for (const CaseResult& cr : results) {
            json checks = json::array();
            for (const Check& c : cr.checks)
                checks.push_back({{"name", c.name},
                                  {"expected", c.expected},
                                  {"computed", c.computed},
                                  {"pass", c.pass}});
            cases.push_back({{"id", cr.id},
                             {"title", cr.title},
                             {"pass", cr.pass},
                             {"checks", checks}});
        }
        json root = {{"cases", cases}, {"pass", all_pass(results)}};
        return root.dump(2) + "\n";
    }

    std::ostringstream out;
    int total = 0, failed = 0;
    for (const CaseResult& cr : results) {
        out << "case " << cr.id << ": " << cr.title << "\n";
        for (const Check& c : cr.checks) {
            ++total;
            if (!c.pass) ++failed;
            out << "  " << (c.pass ? "pass" : "FAIL") << "  " << std::left
                << std::setw(34) << c.name << " expected " << std::setw(30)
                << c.expected << " computed " << c.computed << "\n";
        }
    }
    out << "summary: " << total << " checks, ";
    if (failed == 0)
        out << "all passed\n";
    else
        out << failed << " failed\n";
    return out.str();
}

}  // namespace kfp::repro
