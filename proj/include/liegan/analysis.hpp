#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "liegan/basis.hpp"
#include "liegan/datasets.hpp"
#include "liegan/matrix.hpp"
#include "liegan/rng.hpp"

namespace liegan {

enum class MetricNorm { Max, Frobenius };

struct MetricSolveConfig {
    double anti_collapse = 5e-4; // a
    double lr = 1e-5;
    long steps = 2000000;
    MetricNorm norm = MetricNorm::Max;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Invariant metric candidate for the group generated by the basis:
/// gradient descent on sum_i |L_i^T J + J L_i|^2 - a |J|^2 from a seeded
/// random symmetric start, symmetrizing each step; the result is normalized
/// to unit Frobenius norm. Real field only.
Matrix solve_metric(const LieBasis& basis, const MetricSolveConfig& cfg);

/// |L^T J + J L|_F — zero iff u^T J u is invariant to the one-parameter
/// subgroup of L.
double invariance_residual(const Matrix& l, const Matrix& j);

struct SimilarityReport {
    /// For each learned channel, its best alignment with any truth channel
    /// (modulus of the normalized Hermitian inner product; |cosine| for real).
    std::vector<double> per_channel_cosine;
    /// Mean cos^2 of the principal angles between the channel spans;
    /// symmetric in argument order and invariant to change of basis.
    double subspace_score = 0.0;
    /// Mean absolute entry error after the optimal per-channel scalar
    /// alignment argmin_s |s*learned - truth|, averaged over truth channels.
    double scale_aligned_mae = 0.0;
};

SimilarityReport compare_bases(const LieBasis& learned, const LieBasis& truth);

/// Prediction averaged over sampled transforms: mean of
/// rho_Y(g)^{-1} model(rho_X(g) x), or mean of model(rho_X(g) x) when the
/// output action is trivial.
Matrix augment_predict(const std::function<Matrix(const Matrix&)>& model, const LieBasis& basis,
                       const CoefficientDistribution& dist, const RepresentationSpec& rep,
                       const Matrix& x, int n_samples, RandomStream& rng);

/// Training-time augmentation: `copies` transformed replicas appended per
/// sample (equivariant tasks only).
Dataset augment_dataset(const Dataset& ds, const LieBasis& basis, const CoefficientDistribution& dist,
                        const RepresentationSpec& rep, int copies, RandomStream& rng);

/// Invariant edge features under metric J (graph-network building blocks):
/// squared distance |xi - xj|_J^2 and inner product <xi, xj>_J.
double metric_sq_dist(const Matrix& j, const Matrix& xi, const Matrix& xj);
double metric_inner(const Matrix& j, const Matrix& xi, const Matrix& xj);

} // namespace liegan
