#pragma once

#include "kfp/self_map.hpp"

namespace kfp::fixtures {

// Three points with d(x,y) = 1 and d(y,z) = d(x,z) = 4.
SpacePtr three_point_space();

// On that space: x and y fixed, z -> x. Generalized contraction with two
// fixed points that is not a Kannan contraction.
TableMap two_fixed_map();

// On that space: x <-> y swap, z -> x. No fixed point; the swap violates
// the two-cycle-freeness the existence argument needs.
TableMap period_two_map();

// T(x) = x/a on [0,1].
PiecewiseLinearMap linear_family(const Rat& a);

// T(x) = x/a on [0,1/2], x/b on (1/2,1]; discontinuous at 1/2 when a != b.
PiecewiseLinearMap two_branch_family(const Rat& a, const Rat& b);

// Seven-point finite witness that is a Kannan contraction (coefficient
// 7/20) but not a generalized one (coefficient 7/10): three distant points
// map onto a tight triangle whose vertices then collapse to a common fixed
// point.
TableMap seven_point_witness();

// Grid sample of [0,1] with n points.
SpacePtr unit_grid(int n);

}  // namespace kfp::fixtures
