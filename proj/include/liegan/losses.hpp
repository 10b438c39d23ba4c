#pragma once

#include <span>
#include <utility>

#include "liegan/basis.hpp"
#include "liegan/matrix.hpp"

namespace liegan {

/// Probability clamp applied before every log.
inline constexpr double kProbClamp = 1e-7;

/// Standard GAN losses from discriminator outputs on real and transformed
/// batches:
///   d_loss = -mean(log d_real + log(1 - d_fake))
///   g_loss = -mean(log d_fake)            (non-saturating form)
/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] first.
std::pair<double, double> gan_losses(std::span<const double> d_real, std::span<const double> d_fake);

/// Similarity between a sample and its transform:
/// cosine_sim(concat(x', y'), concat(x, y)). Columns must be same-field.
double reg_loss(const Matrix& x, const Matrix& y, const Matrix& xt, const Matrix& yt);

/// Pairwise channel similarity: sum_{i<j} |cosine_sim(L_i, L_j)|; zero for a
/// single channel.
double chreg_loss(const LieBasis& basis);

/// Vertical concatenation of two column vectors (widening real to complex
/// when the fields differ).
Matrix concat_cols(const Matrix& a, const Matrix& b);

} // namespace liegan
