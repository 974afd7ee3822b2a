#pragma once

#include "kfp/self_map.hpp"

#include <array>
#include <optional>
#include <vector>

namespace kfp {

struct PairResult {
    ExtRat value;
    std::optional<std::array<int, 2>> witness;  // present when value > 0
};

struct TripleResult {
    ExtRat value;
    std::optional<std::array<int, 3>> witness;
};

struct ContractionReport {
    ExtRat lambda_kannan;
    ExtRat lambda_gkannan;
    ExtRat lipschitz;
    bool is_kannan = false;   // lambda_kannan < 1/2
    bool is_gkannan = false;  // lambda_gkannan < 2/3
    std::optional<std::array<int, 2>> witness_pair;
    std::optional<std::array<int, 3>> witness_triple;
    std::optional<std::array<int, 2>> witness_lipschitz;
};

// Exact suprema over all unordered pairs / triples of distinct points.
// A positive image distance over a zero displacement sum yields inf;
// pairs and triples with both sides zero constrain nothing and are skipped.
// Witnesses are the lexicographically smallest maximizing index tuples.
PairResult kannan_coefficient(const TableMap& map);    // needs >= 2 points
TripleResult gkannan_coefficient(const TableMap& map); // needs >= 3 points
PairResult lipschitz_coefficient(const TableMap& map); // needs >= 2 points
ContractionReport classify(const TableMap& map);       // needs >= 3 points

// Checks d(Tx,Ty) <= lambda * (d(x,Tx) + d(y,Ty)/2) over ordered pairs of
// distinct points and returns every violating pair with its excess.
struct W1Violation {
    int x = -1;
    int y = -1;
    Rat lhs;
    Rat rhs;
    Rat excess;  // lhs - rhs, positive
};
std::vector<W1Violation> audit_w1(const TableMap& map, const Rat& lambda);

// Tolerance attributable to rounding a continuous map onto the grid: each
// image moves by at most delta, shifting the left side by up to 2*delta and
// the right side by up to lambda*(3/2)*delta.
Rat w1_band(const Rat& delta, const Rat& lambda);

// Audits a piecewise-linear interval map by evaluating it exactly at n
// equally spaced sample points and scanning those samples. The reported
// coefficients are suprema over the sample, hence lower bounds for the
// interval map; the ceilings widen them by one grid-step factor (1 + h),
// which covers the off-sample mass for maps linear between samples with
// images spanning the domain scale. Class flags use the ceilings.
struct SampledReport {
    ContractionReport report;
    int grid_n = 0;
    Rat grid_step;
    ExtRat kannan_ceiling;
    ExtRat gkannan_ceiling;
};
SampledReport sampled_classify(const PiecewiseLinearMap& map, int grid_n);

// Serial brute-force re-enumeration in plain rational arithmetic, kept as an
// independent oracle for the parallel scans above.
namespace reference {
PairResult kannan_coefficient(const TableMap& map);
TripleResult gkannan_coefficient(const TableMap& map);
PairResult lipschitz_coefficient(const TableMap& map);
}  // namespace reference

}  // namespace kfp
