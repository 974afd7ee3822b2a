#include "kfp/search.hpp"

#include "kfp/fixtures.hpp"
#include "kfp/solver.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace kfp {
namespace {

constexpr std::uint64_t space_salt = 0x73706163;
constexpr std::uint64_t map_salt = 0x6d617070;
constexpr int coord_bits = 16;

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Rejection-sampled uniform draw; written out so the stream does not depend
// on the standard library's distribution internals.
std::uint64_t bounded(std::mt19937_64& g, std::uint64_t n) {
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max();
    limit -= limit % n;
    std::uint64_t v;
    do {
        v = g();
    } while (v >= limit);
    return v % n;
}

std::vector<std::string> point_labels(int n) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    return labels;
}

SpacePtr embedded_space(const GeneratorConfig& config) {
    std::mt19937_64 g(mix(config.seed, space_salt));
    const int n = config.size;
    const int dim = std::max(1, config.dim);
    const std::uint64_t side = (std::uint64_t(1) << coord_bits) + 1;

    std::vector<std::vector<std::int64_t>> pts;
    while (static_cast<int>(pts.size()) < n) {
        std::vector<std::int64_t> p(static_cast<size_t>(dim));
        for (auto& c : p) c = static_cast<std::int64_t>(bounded(g, side));
        if (std::find(pts.begin(), pts.end(), p) != pts.end()) continue;
        pts.push_back(std::move(p));
    }

    // Exact squared distance s / 2^32, then the distance rounded down to a
    // multiple of 2^-24: floor(2^8 sqrt(s)) / 2^24. Rounding can dent the
    // triangle inequality, so close under shortest paths afterwards.
    RatMatrix m(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
    const Rat scale = Rat(Int(1)) / Rat(Int(1) << 24);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Int s = 0;
            for (int k = 0; k < dim; ++k) {
                Int diff = pts[static_cast<size_t>(i)][static_cast<size_t>(k)] -
                           pts[static_cast<size_t>(j)][static_cast<size_t>(k)];
                s += diff * diff;
            }
            Int shifted = s << coord_bits;
            Rat d = Rat(sqrt(shifted)) * scale;
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] = d;
            m[static_cast<size_t>(j)][static_cast<size_t>(i)] = d;
        }
    }
    auto closed = shortest_path_closure(std::move(m));
    return std::make_shared<const FiniteMetricSpace>(
        FiniteMetricSpace::build(point_labels(n), std::move(closed), Provenance::RandomEmbedding));
}

SpacePtr repaired_space(const GeneratorConfig& config) {
    std::mt19937_64 g(mix(config.seed, space_salt));
    const int n = config.size;
    const Rat denom = Rat(Int(1) << coord_bits);
    RatMatrix m(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Rat v = Rat(Int(1 + bounded(g, std::uint64_t(1) << coord_bits))) / denom;
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
            m[static_cast<size_t>(j)][static_cast<size_t>(i)] = v;
        }
    }
    return std::make_shared<const FiniteMetricSpace>(
        FiniteMetricSpace::repair(point_labels(n), std::move(m)));
}

}  // namespace

std::string to_string(SpaceMethod m) {
    return m == SpaceMethod::EuclideanEmbedding ? "euclidean-embedding" : "repaired-random-matrix";
}
std::string to_string(MapPolicy p) {
    return p == MapPolicy::UniformRandom ? "uniform-random" : "fixed-point-biased";
}
std::optional<SpaceMethod> space_method_from_string(std::string_view s) {
    if (s == "euclidean-embedding") return SpaceMethod::EuclideanEmbedding;
    if (s == "repaired-random-matrix") return SpaceMethod::RepairedRandomMatrix;
    return std::nullopt;
}
std::optional<MapPolicy> map_policy_from_string(std::string_view s) {
    if (s == "uniform-random") return MapPolicy::UniformRandom;
    if (s == "fixed-point-biased") return MapPolicy::FixedPointBiased;
    return std::nullopt;
}

SpacePtr random_space(const GeneratorConfig& config) {
    if (config.size < 3) throw StructureError("generator size must be at least 3");
    return config.method == SpaceMethod::EuclideanEmbedding ? embedded_space(config)
                                                            : repaired_space(config);
}

TableMap random_map(SpacePtr space, const GeneratorConfig& config) {
    std::mt19937_64 g(mix(config.seed, map_salt));
    const int n = space->size();
    std::vector<int> image(static_cast<size_t>(n));
    for (auto& v : image) v = static_cast<int>(bounded(g, static_cast<std::uint64_t>(n)));
    if (config.policy == MapPolicy::FixedPointBiased) {
        int k = std::clamp(config.pinned, 0, n);
        std::vector<int> idx(static_cast<size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        for (int t = 0; t < k; ++t) {
            int r = t + static_cast<int>(bounded(g, static_cast<std::uint64_t>(n - t)));
            std::swap(idx[static_cast<size_t>(t)], idx[static_cast<size_t>(r)]);
            image[static_cast<size_t>(idx[static_cast<size_t>(t)])] = idx[static_cast<size_t>(t)];
        }
    }
    return TableMap(std::move(space), std::move(image));
}

std::string to_string(WitnessKind k) {
    switch (k) {
        case WitnessKind::KannanNotGkannan: return "kannan-not-gkannan";
        case WitnessKind::GkannanNotKannan: return "gkannan-not-kannan";
        case WitnessKind::NoFixedPointConditionIViolated: return "no-fixed-point-condition-i-violated";
        case WitnessKind::TwoFixedPoints: return "two-fixed-points";
    }
    return "kannan-not-gkannan";
}

std::optional<WitnessKind> witness_kind_from_string(std::string_view s) {
    if (s == "kannan-not-gkannan") return WitnessKind::KannanNotGkannan;
    if (s == "gkannan-not-kannan") return WitnessKind::GkannanNotKannan;
    if (s == "no-fixed-point-condition-i-violated") return WitnessKind::NoFixedPointConditionIViolated;
    if (s == "two-fixed-points") return WitnessKind::TwoFixedPoints;
    return std::nullopt;
}

HuntResult hunt_independence(const GeneratorConfig& config, int budget, bool include_fixtures) {
    if (budget < 0) throw StructureError("hunt budget must be nonnegative");
    HuntResult out;

    auto record_kinds = [&](const TableMap& map, std::uint64_t seed, const char* source) {
        auto rep = classify(map);
        auto fixed = fixed_points(map);
        auto tc = two_cycle_free(map);
        auto add = [&](WitnessKind kind) {
            WitnessRecord r;
            r.kind = kind;
            r.seed = seed;
            r.source = source;
            r.table = map;
            r.report = rep;
            out.counts[static_cast<size_t>(kind)]++;
            out.records.push_back(std::move(r));
        };
        if (rep.is_kannan && !rep.is_gkannan) add(WitnessKind::KannanNotGkannan);
        if (rep.is_gkannan && !rep.is_kannan) add(WitnessKind::GkannanNotKannan);
        if (rep.is_gkannan && fixed.empty() && !tc.pass)
            add(WitnessKind::NoFixedPointConditionIViolated);
        if (rep.is_gkannan && fixed.size() == 2) add(WitnessKind::TwoFixedPoints);
    };

    if (include_fixtures) {
        record_kinds(fixtures::two_fixed_map(), 0, "fixture");
        record_kinds(fixtures::period_two_map(), 0, "fixture");
        record_kinds(fixtures::seven_point_witness(), 0, "fixture");
        auto family = fixtures::linear_family(Rat(7, 2));
        auto sampled = sampled_classify(family, 257);
        if (sampled.report.is_kannan && !sampled.report.is_gkannan) {
            WitnessRecord r;
            r.kind = WitnessKind::KannanNotGkannan;
            r.source = "fixture";
            r.piecewise = family;
            r.grid_n = sampled.grid_n;
            r.report = sampled.report;
            out.counts[static_cast<size_t>(r.kind)]++;
            out.records.push_back(std::move(r));
        }
    }

    for (int t = 0; t < budget; ++t) {
        GeneratorConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(t);
        record_kinds(random_map(random_space(c), c), c.seed, "seed-sweep");
        out.attempts++;
    }
    return out;
}

FalsifyResult falsify_theorem1(const GeneratorConfig& config, int budget) {
    FalsifyResult out;
    for (int t = 0; t < budget; ++t) {
        GeneratorConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(t);
        auto map = random_map(random_space(c), c);
        out.attempts++;
        if (!gkannan_coefficient(map).value.less_than(Rat(2, 3))) continue;
        if (!two_cycle_free(map).pass) continue;
        out.candidates++;
        auto fixed = fixed_points(map);
        bool ok = !fixed.empty() && fixed.size() <= 2;
        if (ok) ok = picard_solve_all(map, map.size()).all_reached;
        if (!ok) {
            out.counterexample = map;
            out.counterexample_seed = c.seed;
            return out;
        }
    }
    return out;
}

namespace {

struct CaseCoefficients {
    Int cx, cy, cz;  // numerators over a positive common denominator
};

CaseCoefficients scale_coefficients(const Rat& cx, const Rat& cy, const Rat& cz) {
    Int d = lcm(lcm(Int(denominator(cx)), Int(denominator(cy))), Int(denominator(cz)));
    auto num = [&](const Rat& v) { return Int(numerator(v)) * (d / Int(denominator(v))); };
    return {num(cx), num(cy), num(cz)};
}

}  // namespace

ParamSearchResult find_two_branch_params(const Rat& lambda, const ParamSearchConfig& cfg) {
    if (lambda <= 0 || lambda >= Rat(2, 3))
        throw StructureError("target lambda must lie in (0, 2/3)");
    if (cfg.step <= 0 || cfg.max <= 1 || cfg.grid_n < 3)
        throw StructureError("bad parameter grid");

    const int n = cfg.grid_n;
    const int top = n - 1;
    std::vector<char> low(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) low[static_cast<size_t>(i)] = 2 * i <= top ? 1 : 0;

    auto slope_bound_ok = [&](const Rat& v) { return Rat(2) / (v - 1) <= lambda; };

    // The seam inequalities are linear in the triple, so a scan checks the
    // sign of cx*x + cy*y + cz*z over each case region.
    auto audit_pair = [&](const Rat& a, const Rat& b, ConstraintAudit& audit) {
        Rat cx = lambda * (1 - 1 / b) - 2 / b;
        Rat cz = lambda * (1 - 1 / a) + 2 / a;
        auto two_low = scale_coefficients(cx, lambda * (1 - 1 / a), cz);
        auto one_low = scale_coefficients(cx, lambda * (1 - 1 / b), cz);

        audit.mixed_case_two_low = true;
        audit.mixed_case_one_low = true;
        for (int x = 0; x <= top && (audit.mixed_case_two_low || audit.mixed_case_one_low); ++x) {
            if (low[static_cast<size_t>(x)]) continue;
            for (int y = 0; y < x; ++y) {
                bool ylow = low[static_cast<size_t>(y)] != 0;
                if (ylow ? !audit.mixed_case_two_low : !audit.mixed_case_one_low) continue;
                for (int z = 0; z < y; ++z) {
                    if (ylow) {
                        // y and z both at or below the seam
                        audit.checked_triples++;
                        if (two_low.cx * x + two_low.cy * y + two_low.cz * z < 0) {
                            audit.mixed_case_two_low = false;
                            break;
                        }
                    } else if (low[static_cast<size_t>(z)]) {
                        audit.checked_triples++;
                        if (one_low.cx * x + one_low.cy * y + one_low.cz * z < 0) {
                            audit.mixed_case_one_low = false;
                            break;
                        }
                    }
                }
            }
        }
    };

    for (Rat b = 1 + cfg.step; b <= cfg.max; b += cfg.step) {
        if (!slope_bound_ok(b)) continue;
        for (Rat a = b + cfg.step; a <= cfg.max; a += cfg.step) {
            if (!slope_bound_ok(a)) continue;
            ConstraintAudit audit;
            audit.lower_bound_a = true;
            audit.lower_bound_b = true;
            audit_pair(a, b, audit);
            if (audit.mixed_case_two_low && audit.mixed_case_one_low) {
                ParamSearchResult res;
                res.found = true;
                res.a = a;
                res.b = b;
                res.audit = audit;
                return res;
            }
        }
    }

    ParamSearchResult res;
    Rat needed = 1 + 2 / lambda;
    res.tightest_failing =
        "slope bound 2/(v-1) <= " + to_string(lambda) + " needs values >= " + to_string(needed) +
        "; grid tops out at " + to_string(cfg.max);
    return res;
}

}  // namespace kfp
