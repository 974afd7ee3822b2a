#include "kfp/solver.hpp"

#include "kfp/directed.hpp"

#include <algorithm>
#include <limits>

namespace kfp {

double ConvergenceCertificate::tail_bound(int n) const {
    if (n < 1) throw StructureError("tail bound is defined for n >= 1");
    namespace dr = directed;
    double a_up = dr::to_double_up(a);
    double s_up = dr::sqrt_up(dr::to_double_up(alpha));
    double denom = dr::sub_down(1.0, s_up);
    if (denom <= 0) return std::numeric_limits<double>::infinity();
    // alpha^{(n-1)/2} = sqrt(alpha)^{n-1}
    double num = dr::mul_up(a_up, dr::pow_up(s_up, static_cast<unsigned>(n - 1)));
    return dr::div_up(num, denom);
}

ConvergenceCertificate make_certificate(const Rat& lambda, const OrbitTrace& trace) {
    if (lambda < 0 || lambda >= Rat(2, 3))
        throw StructureError("certificate needs lambda in [0, 2/3)");
    if (trace.steps() < 1)
        throw StructureError("certificate needs at least one step");
    ConvergenceCertificate cert;
    cert.lambda = lambda;
    cert.alpha = 2 * lambda / (2 - lambda);
    cert.a = trace.step_distances[0];
    if (trace.steps() >= 2) cert.a = std::max(cert.a, trace.step_distances[1]);
    return cert;
}

RateCheck verify_rate(const OrbitTrace& trace, const ConvergenceCertificate& cert) {
    namespace dr = directed;
    const auto& sd = trace.step_distances;  // sd[0] = a_1
    const int m = trace.steps();
    double a_up = dr::to_double_up(cert.a);
    double s_up = dr::sqrt_up(dr::to_double_up(cert.alpha));
    for (int n = 3; n <= m; ++n) {
        const Rat& an = sd[static_cast<size_t>(n - 1)];
        Rat per_step = cert.alpha * std::max(sd[static_cast<size_t>(n - 3)], sd[static_cast<size_t>(n - 2)]);
        if (an > per_step) return {false, n, "per-step"};
        // alpha^{n/2-1} = sqrt(alpha)^{n-2}
        double rhs = dr::mul_up(a_up, dr::pow_up(s_up, static_cast<unsigned>(n - 2)));
        if (an > rat_from_double(rhs)) return {false, n, "interleaved"};
    }
    return {};
}

RatioSequence uniqueness_ratio(const TableMap& map, int xstar, int xstarstar,
                               const OrbitTrace& trace) {
    if (map.apply(xstar) != xstar || map.apply(xstarstar) != xstarstar)
        throw StructureError("uniqueness ratio needs two fixed points");
    const auto& s = map.space();
    const Rat& dff = s.d(xstar, xstarstar);
    RatioSequence out;
    for (size_t i = 0; i + 1 < trace.points.size(); ++i) {
        int n = static_cast<int>(i) + 1;
        int xn1 = trace.points[i + 1];
        const Rat& den = trace.step_distances[i];
        if (den == 0) {
            out.skipped.push_back(n);
            continue;
        }
        out.values.push_back({n, (dff + s.d(xstar, xn1) + s.d(xstarstar, xn1)) / den});
    }
    return out;
}

SolveResult picard_solve(const TableMap& map, int x0, int budget,
                         const std::optional<Rat>& lambda) {
    SolveResult res;
    res.trace = orbit(map, x0, budget);
    if (res.trace.outcome == OrbitOutcome::ReachedFixedPoint)
        res.fixed_point = res.trace.points.back();
    if (lambda && *lambda < Rat(2, 3) && res.trace.steps() >= 1) {
        res.certificate = make_certificate(*lambda, res.trace);
        res.rate_check = verify_rate(res.trace, *res.certificate);
    }
    auto fixed = fixed_points(map);
    if (fixed.size() == 2 && res.trace.steps() >= 1)
        res.r_diagnostics = uniqueness_ratio(map, fixed[0], fixed[1], res.trace);
    return res;
}

AllStartsResult picard_solve_all(const TableMap& map, int budget,
                                 const std::optional<Rat>& lambda) {
    AllStartsResult out;
    out.all_reached = true;
    for (int x0 = 0; x0 < map.size(); ++x0) {
        out.results.push_back(picard_solve(map, x0, budget, lambda));
        const auto& r = out.results.back();
        if (r.trace.outcome == OrbitOutcome::ReachedFixedPoint) {
            out.worst_steps = std::max(out.worst_steps, r.trace.steps());
        } else if (out.all_reached) {
            out.all_reached = false;
            out.first_failed_start = x0;
        }
    }
    return out;
}

}  // namespace kfp
