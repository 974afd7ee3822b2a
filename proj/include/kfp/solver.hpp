#pragma once

#include "kfp/contractivity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kfp {

// Geometric certificate for a Picard orbit under a generalized contraction
// with coefficient lambda < 2/3. Step distances a_n obey
//   a_n <= alpha^{n/2-1} * a   with alpha = 2*lambda/(2-lambda),
// so the distance from x_n to anything later is at most
//   a * alpha^{(n-1)/2} / (1 - sqrt(alpha)).
struct ConvergenceCertificate {
    Rat lambda;
    Rat alpha;
    Rat a;  // max of the first (up to) two step distances
    // Upward-rounded double evaluation; +inf when the rounded sqrt reaches 1.
    double tail_bound(int n) const;  // n >= 1, steps already taken
};

ConvergenceCertificate make_certificate(const Rat& lambda, const OrbitTrace& trace);

struct RateCheck {
    bool pass = true;
    std::optional<int> failing_n;  // 1-based step index of the violated bound
    std::string failed_bound;      // "per-step" or "interleaved"
};

// Checks a_{n+2} <= alpha*max(a_n, a_{n+1}) exactly in rationals and
// a_n <= alpha^{n/2-1}*a for n >= 3 against the upward-rounded right side.
RateCheck verify_rate(const OrbitTrace& trace, const ConvergenceCertificate& cert);

struct RatioEntry {
    int n = 0;  // 1-based: uses x_n, x_{n+1} with x_1 the orbit start
    Rat value;
};
struct RatioSequence {
    std::vector<RatioEntry> values;
    std::vector<int> skipped;  // steps with d(x_n, x_{n+1}) = 0
};

// Uniqueness diagnostic against two fixed points:
// R_n = (d(x*,x**) + d(x*,x_{n+1}) + d(x**,x_{n+1})) / d(x_n,x_{n+1}).
RatioSequence uniqueness_ratio(const TableMap& map, int xstar, int xstarstar,
                               const OrbitTrace& trace);

struct SolveResult {
    OrbitTrace trace;
    std::optional<int> fixed_point;
    std::optional<ConvergenceCertificate> certificate;
    RateCheck rate_check;
    std::optional<RatioSequence> r_diagnostics;  // when the map has two fixed points
};

SolveResult picard_solve(const TableMap& map, int x0, int budget,
                         const std::optional<Rat>& lambda = std::nullopt);

struct AllStartsResult {
    std::vector<SolveResult> results;  // indexed by start point
    bool all_reached = false;
    int worst_steps = 0;
    std::optional<int> first_failed_start;
};

AllStartsResult picard_solve_all(const TableMap& map, int budget,
                                 const std::optional<Rat>& lambda = std::nullopt);

}  // namespace kfp
