#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "liegan/matrix.hpp"
#include "liegan/rng.hpp"

namespace liegan {

enum class BasisStructure { Dense, BlockDiagRepeat };

/// Learnable Lie-algebra basis: c channels of k x k matrices over one field.
struct LieBasis {
    int channels = 0;
    int dim = 0;
    Field field = Field::Real;
    BasisStructure structure = BasisStructure::Dense;
    int block_size = 0; // meaningful only for BlockDiagRepeat
    std::vector<Matrix> mats;

    void validate() const;
    /// Zero every entry outside the diagonal blocks (no-op for Dense).
    void enforce_structure();
    /// true when (i, j) may hold a nonzero entry under the structure.
    bool entry_allowed(int i, int j) const;
    /// Channels rescaled to unit Frobenius norm (reporting continuous runs).
    LieBasis normalized() const;

    /// i.i.d. N(0, stddev^2) entries on the allowed positions.
    static LieBasis random_init(int channels, int dim, Field field, RandomStream& rng,
                                BasisStructure structure = BasisStructure::Dense, int block_size = 0,
                                double stddev = 0.2);
};

/// Distribution over coefficient vectors w in R^c.
struct CoefficientDistribution {
    enum class Kind { Gaussian, UniformIntGrid };

    Kind kind = Kind::Gaussian;
    std::vector<double> sigma; // per channel, Gaussian only
    bool learnable = false;
    long grid_lo = 0;
    long grid_hi = 0;

    static CoefficientDistribution gaussian(std::vector<double> sigma, bool learnable = false);
    static CoefficientDistribution gaussian(int channels, double sigma, bool learnable = false);
    static CoefficientDistribution uniform_int_grid(long lo, long hi);

    void validate(int channels) const;
};

/// How a k x k group element acts on inputs x in R^n and outputs y in R^m.
struct RepresentationSpec {
    enum class OutputAction { RepeatBlocks, Trivial };

    int input_blocks = 1; // t: n = t*k
    OutputAction output_action = OutputAction::Trivial;
    int output_blocks = 0; // s: m = s*k when RepeatBlocks

    static RepresentationSpec invariant(int t = 1) { return {t, OutputAction::Trivial, 0}; }
    static RepresentationSpec equivariant(int t, int s) { return {t, OutputAction::RepeatBlocks, s}; }

    void validate(int k, int n, int m) const;
};

/// A sampled group element together with the coefficients that produced it.
struct GroupSample {
    Matrix g;
    std::vector<double> w;
};

/// i.i.d coefficient draws. Gaussian draws use w = sigma * eps with eps
/// standard normal, so gradients flow to sigma when it is learnable.
std::vector<std::vector<double>> sample_coefficients(const CoefficientDistribution& dist, int channels,
                                                     int count, RandomStream& rng);

/// g = exp(sum_i w_i L_i); validates det(g) away from zero.
GroupSample sample_group_element(const LieBasis& basis, std::span<const double> w);

/// Block-repeated action of g on a column vector: each of t consecutive
/// k-blocks of x is multiplied by g; y likewise, or untouched when Trivial.
std::pair<Matrix, Matrix> apply_transform(const GroupSample& sample, const RepresentationSpec& rep,
                                          const Matrix& x, const Matrix& y);

/// The same block action on x only.
Matrix apply_block_action(const Matrix& g, const Matrix& x, int blocks);

} // namespace liegan
