#include "kfp/self_map.hpp"

namespace kfp {

TableMap::TableMap(SpacePtr space, std::vector<int> image) : space_(std::move(space)), image_(std::move(image)) {
    if (!space_) throw StructureError("table map needs a space");
    const int n = space_->size();
    if (static_cast<int>(image_.size()) != n)
        throw StructureError("image table must have one entry per point");
    for (int v : image_)
        if (v < 0 || v >= n) throw StructureError("image index out of range");
}

PiecewiseLinearMap::PiecewiseLinearMap(Rat lo, Rat hi, std::vector<Segment> segments)
    : lo_(std::move(lo)), hi_(std::move(hi)), segments_(std::move(segments)) {
    if (!(lo_ < hi_)) throw StructureError("piecewise map needs lo < hi");
    if (segments_.empty()) throw StructureError("piecewise map needs at least one segment");
    Rat prev = lo_;
    for (size_t k = 0; k < segments_.size(); ++k) {
        const auto& s = segments_[k];
        if (k == 0 ? !(s.upto > lo_) : !(s.upto > prev))
            throw StructureError("segment breakpoints must be strictly increasing");
        prev = s.upto;
    }
    if (segments_.back().upto != hi_)
        throw StructureError("last breakpoint must equal the domain's upper end");

    // Self-map closure. Each segment is linear, so its range is spanned by
    // the values at the segment ends; the left end is excluded for every
    // segment but the first, which makes a boundary value there acceptable.
    auto at = [](const Segment& s, const Rat& x) { return s.slope * x + s.intercept; };
    Rat left = lo_;
    for (size_t k = 0; k < segments_.size(); ++k) {
        const auto& s = segments_[k];
        Rat vl = at(s, left), vr = at(s, s.upto);
        bool left_closed = k == 0;
        auto inside = [&](const Rat& v) { return lo_ <= v && v <= hi_; };
        if (!inside(vr)) throw StructureError("segment leaves the domain");
        if (left_closed) {
            if (!inside(vl)) throw StructureError("segment leaves the domain");
        } else {
            // Open left end: the value there is only approached, so it may
            // sit exactly on the boundary but not beyond.
            if (vl < lo_ || vl > hi_) {
                bool approaches_boundary = vl == lo_ || vl == hi_;
                if (!approaches_boundary) throw StructureError("segment leaves the domain");
            }
        }
        left = s.upto;
    }
}

Rat PiecewiseLinearMap::evaluate(const Rat& x) const {
    if (x < lo_ || x > hi_) throw StructureError("evaluation point outside the domain");
    for (const auto& s : segments_)
        if (x <= s.upto) return s.slope * x + s.intercept;
    // x == hi belongs to the last segment; unreachable past the loop.
    const auto& s = segments_.back();
    return s.slope * x + s.intercept;
}

std::string to_string(OrbitOutcome o) {
    switch (o) {
        case OrbitOutcome::ReachedFixedPoint: return "reached-fixed-point";
        case OrbitOutcome::TwoCycleDetected: return "two-cycle-detected";
        case OrbitOutcome::BudgetExhausted: return "budget-exhausted";
    }
    return "budget-exhausted";
}

std::vector<int> fixed_points(const TableMap& map) {
    std::vector<int> fixed;
    for (int i = 0; i < map.size(); ++i)
        if (map.apply(i) == i) fixed.push_back(i);
    return fixed;
}

TwoCycleCheck two_cycle_free(const TableMap& map) {
    for (int i = 0; i < map.size(); ++i) {
        int t = map.apply(i);
        if (t != i && map.apply(t) == i) return {false, i};
    }
    return {true, std::nullopt};
}

OrbitTrace orbit(const TableMap& map, int x0, int budget) {
    if (budget < 1) throw StructureError("orbit budget must be at least 1");
    if (x0 < 0 || x0 >= map.size()) throw StructureError("start index out of range");

    OrbitTrace trace;
    trace.points.push_back(x0);
    for (int step = 0; step < budget; ++step) {
        int last = trace.points.back();
        int next = map.apply(last);
        if (next == last) {
            trace.outcome = OrbitOutcome::ReachedFixedPoint;
            return trace;
        }
        size_t len = trace.points.size();
        bool returned = len >= 2 && trace.points[len - 2] == next;
        trace.points.push_back(next);
        trace.step_distances.push_back(map.space().d(last, next));
        if (returned) {
            trace.outcome = OrbitOutcome::TwoCycleDetected;
            return trace;
        }
    }
    trace.outcome = OrbitOutcome::BudgetExhausted;
    return trace;
}

TableMap discretize(const PiecewiseLinearMap& map, SpacePtr space) {
    if (!space || space->provenance() != Provenance::GridSample || !space->grid())
        throw StructureError("discretize needs a grid-sampled space");
    const auto& grid = *space->grid();
    if (grid.lo != map.lo() || grid.hi != map.hi())
        throw StructureError("grid does not cover the map's domain");

    const int n = grid.n;
    std::vector<int> image(static_cast<size_t>(n));
    Rat delta(0);
    for (int i = 0; i < n; ++i) {
        Rat v = map.evaluate(space->grid_point(i));
        // Nearest grid index; a tie goes to the smaller coordinate.
        Rat t = (v - grid.lo) / grid.step;
        Int fl = numerator(t) / denominator(t);  // both nonnegative here
        Rat frac = t - Rat(fl);
        int idx = static_cast<int>(fl.convert_to<long long>());
        if (frac > Rat(1, 2)) ++idx;
        if (idx >= n) idx = n - 1;
        image[static_cast<size_t>(i)] = idx;
        Rat off = v - space->grid_point(idx);
        if (off < 0) off = -off;
        if (off > delta) delta = off;
    }
    TableMap table(std::move(space), std::move(image));
    table.set_rounding_delta(std::move(delta));
    return table;
}

}  // namespace kfp
