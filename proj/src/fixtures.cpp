#include "kfp/fixtures.hpp"

namespace kfp::fixtures {

namespace {
SpacePtr share(FiniteMetricSpace s) {
    return std::make_shared<const FiniteMetricSpace>(std::move(s));
}
}  // namespace

SpacePtr three_point_space() {
    RatMatrix m = {{Rat(0), Rat(1), Rat(4)},
                   {Rat(1), Rat(0), Rat(4)},
                   {Rat(4), Rat(4), Rat(0)}};
    return share(FiniteMetricSpace::build({"x", "y", "z"}, std::move(m)));
}

TableMap two_fixed_map() { return TableMap(three_point_space(), {0, 1, 0}); }

TableMap period_two_map() { return TableMap(three_point_space(), {1, 0, 0}); }

PiecewiseLinearMap linear_family(const Rat& a) {
    if (a <= 1) throw StructureError("family parameter must exceed 1");
    return PiecewiseLinearMap(Rat(0), Rat(1), {{Rat(1), 1 / a, Rat(0)}});
}

PiecewiseLinearMap two_branch_family(const Rat& a, const Rat& b) {
    if (a <= 1 || b <= 1) throw StructureError("family parameters must exceed 1");
    return PiecewiseLinearMap(Rat(0), Rat(1),
                              {{Rat(1, 2), 1 / a, Rat(0)}, {Rat(1), 1 / b, Rat(0)}});
}

TableMap seven_point_witness() {
    // Outer points a, b, c sit one unit from their images u, v, w, which
    // form a triangle of side 7/10 around a common sink s at radius 7/20.
    // Unlisted distances come from the path closure.
    const int n = 7;
    const Rat far(100);
    RatMatrix m(n, std::vector<Rat>(n, far));
    for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(i)] = 0;
    auto set = [&](int i, int j, Rat v) {
        m[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
        m[static_cast<size_t>(j)][static_cast<size_t>(i)] = std::move(v);
    };
    // indices: a=0 b=1 c=2 u=3 v=4 w=5 s=6
    set(0, 3, Rat(1));
    set(1, 4, Rat(1));
    set(2, 5, Rat(1));
    set(3, 4, Rat(7, 10));
    set(3, 5, Rat(7, 10));
    set(4, 5, Rat(7, 10));
    set(3, 6, Rat(7, 20));
    set(4, 6, Rat(7, 20));
    set(5, 6, Rat(7, 20));
    auto closed = shortest_path_closure(std::move(m));
    auto space = share(FiniteMetricSpace::build({"a", "b", "c", "u", "v", "w", "s"}, std::move(closed)));
    return TableMap(std::move(space), {3, 4, 5, 6, 6, 6, 6});
}

SpacePtr unit_grid(int n) {
    return share(FiniteMetricSpace::sample_interval(Rat(0), Rat(1), n));
}

}  // namespace kfp::fixtures
