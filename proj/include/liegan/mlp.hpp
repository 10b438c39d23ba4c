#pragma once

#include <span>
#include <vector>

#include "liegan/matrix.hpp"
#include "liegan/rng.hpp"
#include "liegan/tape.hpp"

namespace liegan {

/// Discriminator configuration: `layers` affine maps with leaky-ReLU between
/// them and a sigmoid on the final scalar. Classification labels go through
/// an embedding table and are concatenated with the (transformed) input.
struct MlpConfig {
    int input_dim = 0; // x dim + y dim, or x dim + embed_dim for classification
    int hidden = 512;
    int layers = 3;
    double leak = 0.2;
    int num_classes = 0; // 0: no label embedding
    int embed_dim = 8;
};

struct MlpParams {
    std::vector<Matrix> weights; // [h x in], [h x h]..., [1 x h]
    std::vector<Matrix> biases;  // [h x 1], ..., [1 x 1]
    double leak = 0.2;
    Matrix label_embed; // num_classes x embed_dim; empty when unused

    /// Uniform [-1/sqrt(fan_in), 1/sqrt(fan_in)] weights and biases;
    /// standard-normal embedding rows.
    static MlpParams init(const MlpConfig& cfg, RandomStream& rng);

    int input_dim() const { return weights.empty() ? 0 : weights.front().cols(); }
    int num_classes() const { return label_embed.rows(); }
    int embed_dim() const { return label_embed.cols(); }
    void validate() const;
};

/// Probability that the input is a real sample, in (0, 1).
double disc_forward(const MlpParams& params, std::span<const double> input);

/// Classification entry point: x concatenated with the label embedding row.
double disc_forward(const MlpParams& params, std::span<const double> x, int class_id);

/// Tape-attached parameter nodes for one training step.
struct DiscNodes {
    std::vector<NodeId> weights;
    std::vector<NodeId> biases;
    NodeId label_embed = -1;
    double leak = 0.2;

    static DiscNodes attach(Tape& tape, const MlpParams& params);
};

/// Batched forward on the tape: inputs is (input_dim x B), result is the
/// (1 x B) row of probabilities.
NodeId disc_forward_tape(Tape& tape, const DiscNodes& nodes, NodeId inputs);

/// Pre-sigmoid scores; the losses consume these through softplus so that
/// saturated probabilities still propagate gradients.
NodeId disc_logits_tape(Tape& tape, const DiscNodes& nodes, NodeId inputs);

} // namespace liegan
