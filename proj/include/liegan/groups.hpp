#pragma once

#include "liegan/basis.hpp"
#include "liegan/matrix.hpp"

namespace liegan {

/// Reference algebra bases for the groups this project discovers.
namespace groups {

/// [[0,-1],[1,0]]: generator of 2D rotations.
Matrix so2_generator();

/// Rotation generator in the xy-plane of R^3, scaled by angle:
/// angle * [[0,-1,0],[1,0,0],[0,0,0]].
Matrix xy_rotation_generator(double angle);

/// Standard so(3) basis (three skew generators).
LieBasis so3_basis();

/// so(1,3) with signature (+,-,-,-): three boosts then three rotations.
LieBasis so13_basis();

/// su(2) basis {[[0,-1],[1,0]], [[i,0],[0,-i]], [[0,i],[i,0]]}.
LieBasis su2_basis();

/// log of the 3-cycle permutation (123) on the first three of five
/// coordinates, zero on the last two.
Matrix partial_permutation_generator();

/// diag(1,-1,-1,-1).
Matrix minkowski_metric();

} // namespace groups
} // namespace liegan
