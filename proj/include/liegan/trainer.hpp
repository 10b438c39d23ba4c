#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "liegan/basis.hpp"
#include "liegan/datasets.hpp"
#include "liegan/mlp.hpp"

namespace liegan {

enum class GenLossKind {
    NonSaturating, // -log D(fake)
    Minimax        // +log(1 - D(fake))
};

struct TrainingConfig {
    double lambda = 1.0;      // transform-similarity coefficient
    double eta = 0.0;         // channel-similarity coefficient
    double lr_disc = 2e-4;
    double lr_gen = 1e-3;
    int epochs = 100;
    int batch_size = 64;
    std::uint64_t seed = 0;
    int d_steps_per_g_step = 1;
    GenLossKind gen_loss = GenLossKind::NonSaturating;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int snapshot_interval = 0; // 0: keep no basis snapshots

    void validate() const;
};

struct EpochRecord {
    int epoch = 0;
    double d_loss = 0.0;
    double g_loss = 0.0; // adversarial part only
    double reg = 0.0;    // mean transform similarity
    double chreg = 0.0;  // channel similarity
    double g_objective = 0.0; // g_loss + lambda*reg + eta*chreg as evaluated on the tape
};

struct TrainHistory {
    std::vector<EpochRecord> records;
    int snapshot_interval = 0;
    std::vector<std::pair<int, LieBasis>> snapshots;

    /// CSV columns: epoch,d_loss,g_loss,reg,chreg (17 significant digits).
    void save_csv(const std::filesystem::path& path) const;
};

struct TrainResult {
    LieBasis basis;
    CoefficientDistribution dist;
    MlpParams disc;
    TrainHistory history;
};

/// Alternating adversarial optimization: d_steps_per_g_step discriminator
/// Adam steps per batch, then one generator Adam step on
/// g_loss + lambda*mean(reg) + eta*chreg. One group element is drawn per
/// sample. All randomness comes from cfg.seed; equal seeds give identical
/// histories on one platform.
TrainResult train(const Dataset& data, LieBasis basis, CoefficientDistribution dist,
                  RepresentationSpec rep, MlpParams disc, const TrainingConfig& cfg);

} // namespace liegan
