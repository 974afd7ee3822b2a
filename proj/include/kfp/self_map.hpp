#pragma once

#include "kfp/metric_space.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace kfp {

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

/// Total self-map on a finite space, given as a lookup table of point
/// indices. Immutable; carries the rounding displacement bound when it was
/// produced by discretizing a continuum map.
class TableMap {
public:
    TableMap(SpacePtr space, std::vector<int> image);

    const FiniteMetricSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }
    int size() const { return space_->size(); }
    int apply(int i) const { return image_[static_cast<size_t>(i)]; }
    const std::vector<int>& image() const { return image_; }

    /// d(p_i, T p_i)
    const Rat& displacement(int i) const { return space_->d(i, apply(i)); }

    /// Max |T'(p) - T(p)| introduced by grid rounding; 0 for exact tables.
    const Rat& rounding_delta() const { return delta_; }
    void set_rounding_delta(Rat d) { delta_ = std::move(d); }

private:
    SpacePtr space_;
    std::vector<int> image_;
    Rat delta_ = Rat(0);
};

/// Piecewise-linear self-map of a closed interval. Segment k applies on
/// (b_{k-1}, b_k]; the first segment additionally owns the left endpoint.
class PiecewiseLinearMap {
public:
    struct Segment {
        Rat upto;       // upper breakpoint (inclusive)
        Rat slope;
        Rat intercept;
    };

    PiecewiseLinearMap(Rat lo, Rat hi, std::vector<Segment> segments);

    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// slope*x + intercept of the unique segment owning x; breakpoints
    /// belong to the left segment. Throws StructureError outside [lo, hi].
    Rat evaluate(const Rat& x) const;

private:
    Rat lo_, hi_;
    std::vector<Segment> segments_;
};

enum class OrbitOutcome { ReachedFixedPoint, TwoCycleDetected, BudgetExhausted };

std::string to_string(OrbitOutcome o);

/// Iteration record: points x_0, x_1, ... and the step distances
/// a_n = d(x_{n-1}, x_n). On fixed-point termination the repeated point is
/// not duplicated; on a two-cycle the returning point is kept so the cycle
/// is visible in the tail.
struct OrbitTrace {
    std::vector<int> points;
    std::vector<Rat> step_distances;
    OrbitOutcome outcome = OrbitOutcome::BudgetExhausted;

    int steps() const { return static_cast<int>(step_distances.size()); }
};

/// Exactly the points with T(p) = p, in index order.
std::vector<int> fixed_points(const TableMap& map);

/// Checks that no non-fixed point returns to itself after two steps.
/// Returns the smallest witnessing index when one exists.
struct TwoCycleCheck {
    bool pass = true;
    std::optional<int> witness;
};
TwoCycleCheck two_cycle_free(const TableMap& map);

/// Iterates x_{n+1} = T(x_n) from x0 until a fixed point repeats
/// (reached-fixed-point), the orbit returns after two steps
/// (two-cycle-detected), or `budget` steps were taken. Longer cycles show
/// up as budget-exhausted.
OrbitTrace orbit(const TableMap& map, int x0, int budget);

/// Rounds T to the grid: image[i] = nearest grid point to T(p_i), ties
/// toward the smaller coordinate. The resulting table records the maximum
/// rounding displacement. The space must be grid-sampled over the map's
/// domain.
TableMap discretize(const PiecewiseLinearMap& map, SpacePtr space);

}  // namespace kfp
