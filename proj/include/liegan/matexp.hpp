#pragma once

#include "liegan/matrix.hpp"

namespace liegan {

/// exp(A) by scaling-and-squaring over a degree-16 truncated series.
///
/// The squaring count is s = max(0, ceil(log2(|A|_F)) + 4), which keeps the
/// scaled argument below 1/16 and the series remainder far under 1e-12 for
/// the matrix sizes this project uses (k <= 8).
Matrix mat_exp(const Matrix& a);

/// Adjoint of A for the map A -> exp(A): the transpose-mode Frechet
/// derivative applied to g_bar, obtained by differentiating the same
/// scaling-and-squaring recurrence that mat_exp runs forward.
Matrix mat_exp_vjp(const Matrix& a, const Matrix& g_bar);

} // namespace liegan
