#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kfp/fixtures.hpp"
#include "kfp/search.hpp"
#include "kfp/solver.hpp"

using namespace kfp;
using namespace kfp::fixtures;

TEST_CASE("certificate construction") {
    OrbitTrace t = orbit(two_fixed_map(), 2, 8);
    SUBCASE("fields for the two-fixed-point fixture") {
        ConvergenceCertificate c = make_certificate(Rat(1, 2), t);
        CHECK(c.lambda == Rat(1, 2));
        CHECK(c.alpha == Rat(2, 3));
        CHECK(c.a == Rat(4));
    }
    SUBCASE("lambda must lie in [0, 2/3)") {
        CHECK_THROWS_AS(make_certificate(Rat(2, 3), t), StructureError);
        CHECK_THROWS_AS(make_certificate(Rat(-1, 10), t), StructureError);
        CHECK_NOTHROW(make_certificate(Rat(0), t));
    }
    SUBCASE("a trace without steps has nothing to certify") {
        OrbitTrace fixed_start = orbit(two_fixed_map(), 0, 8);
        CHECK(fixed_start.steps() == 0);
        CHECK_THROWS_AS(make_certificate(Rat(1, 2), fixed_start), StructureError);
    }
    SUBCASE("a is the larger of the first two step distances") {
        OrbitTrace t2 = orbit(period_two_map(), 2, 3);  // steps 4, 1, 1
        ConvergenceCertificate c = make_certificate(Rat(1, 3), t2);
        CHECK(c.a == Rat(4));
        CHECK(c.alpha == Rat(2, 5));
    }
}

TEST_CASE("tail bounds") {
    OrbitTrace t = orbit(two_fixed_map(), 2, 8);
    ConvergenceCertificate c = make_certificate(Rat(1, 2), t);
    SUBCASE("positive, decreasing, and defined from step one") {
        CHECK_THROWS_AS(c.tail_bound(0), StructureError);
        double prev = c.tail_bound(1);
        CHECK(prev > 0);
        for (int n = 2; n <= 12; ++n) {
            double cur = c.tail_bound(n);
            CHECK(cur < prev);
            prev = cur;
        }
    }
    SUBCASE("a zero rate gives an exactly zero tail") {
        ConvergenceCertificate z = make_certificate(Rat(0), t);
        CHECK(z.alpha == Rat(0));
        CHECK(z.tail_bound(1) == 4.0);  // a * alpha^0 / (1 - 0)
        CHECK(z.tail_bound(2) == 0.0);
        CHECK(z.tail_bound(3) == 0.0);
    }
    SUBCASE("the bound dominates the first neglected series term") {
        // tail after step 3 covers at least a * sqrt(alpha)^2 = a * alpha
        CHECK(rat_from_double(c.tail_bound(3)) >= c.a * c.alpha);
    }
}

TEST_CASE("rate verification") {
    SUBCASE("fixture traces satisfy both inequalities") {
        OrbitTrace t = orbit(period_two_map(), 2, 3);
        ConvergenceCertificate c = make_certificate(Rat(1, 3), t);
        RateCheck rc = verify_rate(t, c);
        CHECK(rc.pass);
        CHECK(!rc.failing_n);
    }
    SUBCASE("a tampered trace fails the per-step bound with its index") {
        OrbitTrace t;
        t.points = {0, 1, 2, 0};
        t.step_distances = {Rat(1), Rat(1), Rat(1)};
        ConvergenceCertificate c{Rat(1, 3), Rat(2, 5), Rat(1)};
        RateCheck rc = verify_rate(t, c);
        REQUIRE(!rc.pass);
        CHECK(*rc.failing_n == 3);
        CHECK(rc.failed_bound == "per-step");
    }
    SUBCASE("short traces pass vacuously") {
        OrbitTrace t = orbit(two_fixed_map(), 2, 8);
        ConvergenceCertificate c = make_certificate(Rat(1, 2), t);
        CHECK(verify_rate(t, c).pass);
    }
}

TEST_CASE("uniqueness ratio diagnostic") {
    TableMap m = two_fixed_map();
    OrbitTrace t = orbit(m, 2, 8);
    SUBCASE("value on the fixture") {
        RatioSequence rs = uniqueness_ratio(m, 0, 1, t);
        REQUIRE(rs.values.size() == 1);
        CHECK(rs.values[0].n == 1);
        CHECK(rs.values[0].value == Rat(1, 2));
        CHECK(rs.skipped.empty());
    }
    SUBCASE("both anchors must be fixed points") {
        CHECK_THROWS_AS(uniqueness_ratio(m, 0, 2, t), StructureError);
        CHECK_THROWS_AS(uniqueness_ratio(m, 2, 1, t), StructureError);
    }
}

TEST_CASE("picard solve on the fixtures") {
    SUBCASE("reaches the nearer fixed point with a full certificate") {
        SolveResult r = picard_solve(two_fixed_map(), 2, 8, Rat(1, 2));
        CHECK(r.trace.outcome == OrbitOutcome::ReachedFixedPoint);
        CHECK(*r.fixed_point == 0);
        REQUIRE(r.certificate);
        CHECK(r.certificate->lambda == Rat(1, 2));
        CHECK(r.certificate->alpha == Rat(2, 3));
        CHECK(r.certificate->a == Rat(4));
        CHECK(r.rate_check.pass);
        REQUIRE(r.r_diagnostics);
        REQUIRE(r.r_diagnostics->values.size() == 1);
        CHECK(r.r_diagnostics->values[0].value == Rat(1, 2));
    }
    SUBCASE("a start that is already fixed needs no certificate") {
        SolveResult r = picard_solve(two_fixed_map(), 1, 8, Rat(1, 2));
        CHECK(*r.fixed_point == 1);
        CHECK(r.trace.steps() == 0);
        CHECK(!r.certificate);
        CHECK(!r.r_diagnostics);
    }
    SUBCASE("the swap fixture ends in a two-cycle with no fixed point") {
        SolveResult r = picard_solve(period_two_map(), 2, 8, Rat(1, 3));
        CHECK(r.trace.outcome == OrbitOutcome::TwoCycleDetected);
        CHECK(!r.fixed_point);
        CHECK(r.certificate);  // the rate inequality still holds on the prefix
        CHECK(r.rate_check.pass);
    }
    SUBCASE("a three-cycle exhausts its budget") {
        SpacePtr s = three_point_space();
        TableMap rot(s, {1, 2, 0});
        SolveResult r = picard_solve(rot, 0, 5);
        CHECK(r.trace.outcome == OrbitOutcome::BudgetExhausted);
        CHECK(!r.fixed_point);
    }
    SUBCASE("lambda at or above the rate threshold yields no certificate") {
        SolveResult r = picard_solve(seven_point_witness(), 0, 8, Rat(7, 10));
        CHECK(r.trace.outcome == OrbitOutcome::ReachedFixedPoint);
        CHECK(!r.certificate);
    }
}

TEST_CASE("all-starts solve") {
    SUBCASE("two-fixed fixture converges from everywhere in one step") {
        AllStartsResult all = picard_solve_all(two_fixed_map(), 3, Rat(1, 2));
        CHECK(all.all_reached);
        CHECK(all.worst_steps == 1);
        CHECK(!all.first_failed_start);
        REQUIRE(all.results.size() == 3);
        CHECK(*all.results[2].fixed_point == 0);
    }
    SUBCASE("the swap fixture fails from its first start") {
        AllStartsResult all = picard_solve_all(period_two_map(), 3);
        CHECK(!all.all_reached);
        CHECK(*all.first_failed_start == 0);
    }
}

TEST_CASE("a seeded random contraction behaves like the theory says") {
    GeneratorConfig cfg;
    cfg.seed = 401013;
    cfg.size = 4;
    cfg.method = SpaceMethod::RepairedRandomMatrix;
    SpacePtr s = random_space(cfg);
    TableMap m = random_map(s, cfg);

    ContractionReport rep = classify(m);
    REQUIRE(rep.is_gkannan);
    REQUIRE(two_cycle_free(m).pass);
    std::vector<int> fixed = fixed_points(m);
    REQUIRE(fixed.size() == 1);

    AllStartsResult all = picard_solve_all(m, m.size(), rep.lambda_gkannan.value());
    CHECK(all.all_reached);
    CHECK(all.worst_steps == 3);
    for (const SolveResult& r : all.results) {
        CHECK(r.rate_check.pass);
        if (!r.certificate) continue;
        // the rounded tail must dominate the true remaining distance
        int end = r.trace.points.back();
        for (int n = 1; n <= r.trace.steps(); ++n) {
            Rat remaining = s->d(r.trace.points[static_cast<size_t>(n)], end);
            CHECK(remaining <= rat_from_double(r.certificate->tail_bound(n)));
        }
    }
}

TEST_CASE("a random instance with two fixed points reports the ratio diagnostic") {
    GeneratorConfig cfg;
    cfg.seed = 300002;
    cfg.size = 3;
    SpacePtr s = random_space(cfg);
    TableMap m = random_map(s, cfg);
    REQUIRE(fixed_points(m).size() == 2);
    REQUIRE(classify(m).is_gkannan);
    for (int start = 0; start < m.size(); ++start) {
        SolveResult r = picard_solve(m, start, m.size(), classify(m).lambda_gkannan.value());
        CHECK(r.trace.outcome == OrbitOutcome::ReachedFixedPoint);
        if (r.trace.steps() >= 1) CHECK(r.r_diagnostics);
    }
}
