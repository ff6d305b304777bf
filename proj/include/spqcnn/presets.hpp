#pragma once

#include "spqcnn/group.hpp"
#include "spqcnn/split_plan.hpp"

namespace spqcnn {

// D4 on the 2x2x2 cube. Vertices 0..3 are the top face (0 1 / 2 3 seen from
// above), 4..7 sit below them. Generated by the quarter turn about the
// vertical axis and the diagonal mirror fixing 0 and 3.
FiniteGroup d4_cube_group();

// D4 on the 4x4 grid, row-major qubits 0..15: quarter turn (r, c) -> (c, 3 - r)
// and the main-diagonal mirror (r, c) -> (c, r).
FiniteGroup d4_grid4x4_group();

// Cyclic translations of an n-qubit ring.
FiniteGroup translation_ring_group(int n);

// The 8-qubit demo plan: branch families {0..7}; {0,3,5,6},{1,2,4,7};
// {0,3},{1,2},{5,6},{4,7}, built backward from the final-layer seed
// (<c4^2, mirror>, {0}) and (<c4^2, mirror>, {5}).
SplitPlan cube_demo_plan();

// Ring plan halving branches per layer: layer l carries the stride-2^l
// translation subgroup on subset {0}; once the stride reaches n the layers
// stay at singleton branches. n must be a power of two.
SplitPlan ring_halving_plan(int n, int layers);

// Deliberately broken plan: the two contiguous halves of a translation ring
// are not translation-invariant, so validate_plan fails with the unit
// translation as witness. Fixture for validator tests.
SplitPlan ring_halves_fixture(int n);

} // namespace spqcnn
