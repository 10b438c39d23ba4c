#include "liegan/trainer.hpp"

#include <cmath>
#include <fstream>

#include "liegan/losses.hpp"

namespace liegan {

void TrainingConfig::validate() const {
    if (lambda < 0.0 || eta < 0.0) throw std::domain_error("TrainingConfig: negative regularizer weight");
    if (lr_disc < 0.0 || lr_gen < 0.0) throw std::domain_error("TrainingConfig: negative learning rate");
    if (epochs < 1 || batch_size < 1) throw std::domain_error("TrainingConfig: epochs and batch_size must be >= 1");
    if (d_steps_per_g_step < 1) throw std::domain_error("TrainingConfig: d_steps_per_g_step must be >= 1");
}

void TrainHistory::save_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("TrainHistory: cannot open " + path.string());
    out.precision(17);
    out << "epoch,d_loss,g_loss,reg,chreg\n";
    for (const EpochRecord& r : records)
        out << r.epoch << "," << r.d_loss << "," << r.g_loss << "," << r.reg << "," << r.chreg << "\n";
    if (!out) throw std::runtime_error("TrainHistory: write failed for " + path.string());
}

namespace {

// Per-tensor Adam state; complex tensors update their planes independently.
struct AdamState {
    Matrix m, v;
    long t = 0;
};

void adam_plane(std::span<double> p, std::span<const double> g, std::span<double> m, std::span<double> v,
                double lr, double b1, double b2, double eps, double bc1, double bc2) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

void adam_update(Matrix& param, const Matrix& grad, AdamState& st, double lr, const TrainingConfig& cfg) {
    if (st.t == 0) {
        st.m = Matrix::zeros_like(param);
        st.v = Matrix::zeros_like(param);
    }
    ++st.t;
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(st.t));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(st.t));
    adam_plane(param.re_data(), grad.re_data(), st.m.re_data(), st.v.re_data(), lr, cfg.adam_beta1,
               cfg.adam_beta2, cfg.adam_eps, bc1, bc2);
    adam_plane(param.im_data(), grad.im_data(), st.m.im_data(), st.v.im_data(), lr, cfg.adam_beta1,
               cfg.adam_beta2, cfg.adam_eps, bc1, bc2);
}

struct SampleView {
    Matrix x;              // n x 1, dataset field
    Matrix y;              // m x 1, dataset field (class id as 1x1 real)
    Matrix real_input;     // flattened discriminator input without embedding
    int class_id = -1;
};

class TrainLoop {
public:
    TrainLoop(const Dataset& data, LieBasis basis, CoefficientDistribution dist, RepresentationSpec rep,
              MlpParams disc, const TrainingConfig& cfg)
        : data_(data), basis_(std::move(basis)), dist_(std::move(dist)), rep_(rep),
          disc_(std::move(disc)), cfg_(cfg), rng_(cfg.seed) {
        cfg_.validate();
        basis_.validate();
        dist_.validate(basis_.channels);
        if (data_.count() == 0) throw std::domain_error("train: empty dataset");
        classification_ = data_.task == TaskKind::Classification;
        if (classification_) {
            if (rep_.output_action != RepresentationSpec::OutputAction::Trivial)
                throw ShapeError("train: classification labels only support the trivial output action");
            rep_.validate(basis_.dim, data_.n, 0);
            if (disc_.label_embed.rows() == 0)
                throw std::domain_error("train: classification data needs a label embedding");
        } else {
            rep_.validate(basis_.dim, data_.n, data_.m);
        }
        const int want = (data_.field == Field::Complex ? 2 * data_.n : data_.n) +
                         (classification_ ? disc_.label_embed.cols()
                                          : (data_.field == Field::Complex ? 2 * data_.m : data_.m));
        if (disc_.input_dim() != want)
            throw ShapeError("train: discriminator input dim " + std::to_string(disc_.input_dim()) +
                             ", expected " + std::to_string(want));
        if (dist_.kind == CoefficientDistribution::Kind::Gaussian)
            for (double s : dist_.sigma) log_sigma_.push_back(std::log(s));

        samples_.reserve(static_cast<std::size_t>(data_.count()));
        for (long i = 0; i < data_.count(); ++i) {
            SampleView s;
            s.x = data_.x_col(i);
            s.y = data_.y_col(i);
            if (classification_) {
                s.class_id = data_.y_class(i);
                s.real_input = flatten_to_real_col(s.x);
            } else {
                s.real_input = flatten_to_real_col(concat_cols(s.x, s.y));
            }
            samples_.push_back(std::move(s));
        }
    }

    TrainResult run() {
        TrainHistory history;
        history.snapshot_interval = cfg_.snapshot_interval;
        std::vector<long> order(samples_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<long>(i);

        for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
            rng_.shuffle(order);
            EpochRecord rec;
            rec.epoch = epoch;
            long steps = 0;
            for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(cfg_.batch_size)) {
                const std::size_t hi = std::min(order.size(), at + static_cast<std::size_t>(cfg_.batch_size));
                const std::span<const long> batch(order.data() + at, hi - at);
                double d_loss = 0.0;
                for (int k = 0; k < cfg_.d_steps_per_g_step; ++k) d_loss = disc_step(batch, epoch);
                const auto [g_loss, reg, chreg, objective] = gen_step(batch, epoch);
                rec.d_loss += d_loss;
                rec.g_loss += g_loss;
                rec.reg += reg;
                rec.chreg += chreg;
                rec.g_objective += objective;
                ++steps;
            }
            rec.d_loss /= static_cast<double>(steps);
            rec.g_loss /= static_cast<double>(steps);
            rec.reg /= static_cast<double>(steps);
            rec.chreg /= static_cast<double>(steps);
            rec.g_objective /= static_cast<double>(steps);
            history.records.push_back(rec);
            if (cfg_.snapshot_interval > 0 && (epoch + 1) % cfg_.snapshot_interval == 0)
                history.snapshots.emplace_back(epoch, basis_);
        }

        if (dist_.kind == CoefficientDistribution::Kind::Gaussian && dist_.learnable)
            for (std::size_t c = 0; c < log_sigma_.size(); ++c) dist_.sigma[c] = std::exp(log_sigma_[c]);
        return TrainResult{std::move(basis_), std::move(dist_), std::move(disc_), std::move(history)};
    }

private:
    // One discriminator Adam step; generator weights are fixed, so fakes are
    // produced off-tape. Returns the batch d_loss.
    double disc_step(std::span<const long> batch, int epoch) {
        const auto ws = sample_coefficients(dist_, basis_.channels, static_cast<int>(batch.size()), rng_);

        Matrix real_batch(disc_input_dim(), static_cast<int>(batch.size()));
        Matrix fake_batch(disc_input_dim(), static_cast<int>(batch.size()));
        for (std::size_t b = 0; b < batch.size(); ++b) {
            const SampleView& s = samples_[static_cast<std::size_t>(batch[b])];
            const GroupSample g = draw_group_element(ws[b], epoch);
            auto [xt, yt] = apply_transform(g, rep_, s.x, s.y);
            Matrix fake_col = classification_
                                  ? flatten_to_real_col(xt)
                                  : flatten_to_real_col(concat_cols(xt, yt));
            fill_column(real_batch, static_cast<int>(b), s.real_input, s.class_id);
            fill_column(fake_batch, static_cast<int>(b), fake_col, s.class_id);
        }

        // logit-space evaluation: softplus(-z) = -log sigmoid(z), so the loss
        // matches the clamped-probability formula inside the clamp range but
        // keeps its gradient when the sigmoid saturates
        Tape tape;
        DiscNodes nodes = attach_disc(tape, true);
        const NodeId z_real = disc_logits_tape(tape, nodes, tape.constant(std::move(real_batch)));
        const NodeId z_fake = disc_logits_tape(tape, nodes, tape.constant(std::move(fake_batch)));
        const NodeId loss =
            tape.mean_all(tape.add(tape.softplus(tape.neg(z_real)), tape.softplus(z_fake)));

        const double value = tape.value(loss).re(0, 0);
        if (!std::isfinite(value)) throw TrainingDivergence(epoch, "d_loss");
        tape.backward(loss);
        apply_disc_grads(tape, nodes);
        return value;
    }

    // One generator Adam step on g_loss + lambda*mean(reg) + eta*chreg.
    // Returns (g_loss, reg, chreg, objective).
    std::array<double, 4> gen_step(std::span<const long> batch, int epoch) {
        try {
            return gen_step_impl(batch, epoch);
        } catch (const TrainingDivergence&) {
            throw;
        } catch (const std::domain_error& e) {
            // a transform overflowed inside the tape (runaway basis scale)
            throw TrainingDivergence(epoch, std::string("generator transform (") + e.what() + ")");
        }
    }

    std::array<double, 4> gen_step_impl(std::span<const long> batch, int epoch) {
        Tape tape;
        DiscNodes disc_nodes = attach_disc(tape, false);

        std::vector<NodeId> basis_nodes;
        for (const Matrix& l : basis_.mats) basis_nodes.push_back(tape.param(l));
        std::vector<NodeId> log_sigma_nodes;
        const bool learn_sigma =
            dist_.kind == CoefficientDistribution::Kind::Gaussian && dist_.learnable;
        if (learn_sigma)
            for (double ls : log_sigma_) {
                Matrix v(1, 1);
                v.re(0, 0) = ls;
                log_sigma_nodes.push_back(tape.param(v));
            }

        const auto ws = draw_coefficient_inputs(static_cast<int>(batch.size()));

        std::vector<NodeId> fake_cols, reg_terms;
        for (std::size_t b = 0; b < batch.size(); ++b) {
            const SampleView& s = samples_[static_cast<std::size_t>(batch[b])];
            // A = sum_i w_i L_i on the tape so gradients reach L_i (and sigma)
            NodeId a = -1;
            for (int c = 0; c < basis_.channels; ++c) {
                NodeId term;
                if (learn_sigma) {
                    Matrix eps(1, 1);
                    eps.re(0, 0) = ws[b][static_cast<std::size_t>(c)];
                    const NodeId w = tape.scalar_mul(tape.exp_el(log_sigma_nodes[static_cast<std::size_t>(c)]),
                                                     tape.constant(std::move(eps)));
                    term = tape.scalar_mul(w, basis_nodes[static_cast<std::size_t>(c)]);
                } else {
                    term = tape.scale(basis_nodes[static_cast<std::size_t>(c)],
                                      ws[b][static_cast<std::size_t>(c)]);
                }
                a = (c == 0) ? term : tape.add(a, term);
            }
            const NodeId g = tape.matexp(a);

            const NodeId xt = blocked_apply(tape, g, s.x, rep_.input_blocks);
            NodeId pair; // concat(x', y') in the data field, for the similarity term
            NodeId fake; // real-flattened discriminator input
            if (rep_.output_action == RepresentationSpec::OutputAction::Trivial) {
                const NodeId y = tape.constant(data_.field == Field::Complex ? to_complex(s.y) : s.y);
                pair = tape.concat_rows(std::array{xt, y});
            } else {
                const NodeId yt = blocked_apply(tape, g, s.y, rep_.output_blocks);
                pair = tape.concat_rows(std::array{xt, yt});
            }
            if (classification_) {
                const NodeId flat_x = data_.field == Field::Complex ? tape.complex_to_real(xt) : xt;
                const NodeId emb = tape.row_lookup(disc_nodes.label_embed, s.class_id);
                fake = tape.concat_rows(std::array{flat_x, emb});
            } else {
                fake = data_.field == Field::Complex ? tape.complex_to_real(pair) : pair;
            }
            fake_cols.push_back(fake);
            reg_terms.push_back(tape.cos_sim(pair, tape.constant(concat_cols(s.x, s.y))));
        }

        const NodeId z_fake = disc_logits_tape(tape, disc_nodes, tape.assemble_cols(fake_cols));
        NodeId gan_term;
        if (cfg_.gen_loss == GenLossKind::NonSaturating) {
            // -mean log D(fake)
            gan_term = tape.mean_all(tape.softplus(tape.neg(z_fake)));
        } else {
            // +mean log(1 - D(fake))
            gan_term = tape.neg(tape.mean_all(tape.softplus(z_fake)));
        }

        const NodeId reg_mean = tape.mean_of(reg_terms);
        NodeId chreg = -1;
        if (basis_.channels > 1) {
            // tiny identity jitter keeps the similarity defined for any channel
            const NodeId jitter = tape.constant(1e-12 * Matrix::identity(basis_.dim, basis_.field));
            std::vector<NodeId> jittered;
            for (NodeId l : basis_nodes) jittered.push_back(tape.add(l, jitter));
            for (int i = 0; i < basis_.channels; ++i)
                for (int j = i + 1; j < basis_.channels; ++j) {
                    const NodeId pair_sim = tape.abs_el(tape.cos_sim(jittered[static_cast<std::size_t>(i)],
                                                                     jittered[static_cast<std::size_t>(j)]));
                    chreg = (chreg < 0) ? pair_sim : tape.add(chreg, pair_sim);
                }
        }

        NodeId objective = gan_term;
        if (cfg_.lambda != 0.0) objective = tape.add(objective, tape.scale(reg_mean, cfg_.lambda));
        if (cfg_.eta != 0.0 && chreg >= 0) objective = tape.add(objective, tape.scale(chreg, cfg_.eta));

        const double g_loss = tape.value(gan_term).re(0, 0);
        const double reg = tape.value(reg_mean).re(0, 0);
        const double ch = chreg >= 0 ? tape.value(chreg).re(0, 0) : 0.0;
        const double total = tape.value(objective).re(0, 0);
        if (!std::isfinite(g_loss)) throw TrainingDivergence(epoch, "g_loss");
        if (!std::isfinite(reg)) throw TrainingDivergence(epoch, "reg");
        if (!std::isfinite(ch)) throw TrainingDivergence(epoch, "chreg");

        tape.backward(objective);

        if (basis_states_.empty()) basis_states_.resize(basis_.mats.size());
        for (std::size_t c = 0; c < basis_.mats.size(); ++c) {
            Matrix grad = tape.gradient(basis_nodes[c]);
            mask_structure(grad);
            adam_update(basis_.mats[c], grad, basis_states_[c], cfg_.lr_gen, cfg_);
        }
        basis_.enforce_structure();
        if (learn_sigma) {
            if (sigma_states_.empty()) sigma_states_.resize(log_sigma_.size());
            for (std::size_t c = 0; c < log_sigma_.size(); ++c) {
                Matrix p(1, 1);
                p.re(0, 0) = log_sigma_[c];
                adam_update(p, tape.gradient(log_sigma_nodes[c]), sigma_states_[c], cfg_.lr_gen, cfg_);
                log_sigma_[c] = p.re(0, 0);
            }
        }
        return {g_loss, reg, ch, total};
    }

    // One resample when a grid draw lands on a numerically singular element
    // (extreme |j| on a contracting direction); a second failure aborts.
    GroupSample draw_group_element(std::span<const double> w, int epoch) {
        try {
            return sample_group_element(basis_, w);
        } catch (const std::domain_error&) {
            const auto retry = sample_coefficients(dist_, basis_.channels, 1, rng_)[0];
            try {
                return sample_group_element(basis_, retry);
            } catch (const std::domain_error&) {
                throw TrainingDivergence(epoch, "group element determinant");
            }
        }
    }

    NodeId blocked_apply(Tape& tape, NodeId g, const Matrix& vec, int blocks) {
        const int k = basis_.dim;
        const NodeId v = tape.constant(vec);
        if (blocks == 1) return tape.matmul(g, v);
        std::vector<NodeId> parts;
        for (int b = 0; b < blocks; ++b)
            parts.push_back(tape.matmul(g, tape.rows_segment(v, b * k, k)));
        return tape.concat_rows(parts);
    }

    // Raw coefficient inputs: epsilon for learnable-sigma Gaussians (scaled on
    // the tape), otherwise finished draws.
    std::vector<std::vector<double>> draw_coefficient_inputs(int count) {
        if (dist_.kind == CoefficientDistribution::Kind::Gaussian && dist_.learnable) {
            std::vector<std::vector<double>> eps(static_cast<std::size_t>(count));
            for (auto& row : eps) {
                row.resize(static_cast<std::size_t>(basis_.channels));
                for (double& v : row) v = rng_.gauss();
            }
            return eps;
        }
        // fixed Gaussian draws use the current sigma; grid draws are integers
        CoefficientDistribution d = dist_;
        if (d.kind == CoefficientDistribution::Kind::Gaussian)
            for (std::size_t c = 0; c < d.sigma.size(); ++c) d.sigma[c] = std::exp(log_sigma_[c]);
        return sample_coefficients(d, basis_.channels, count, rng_);
    }

    int disc_input_dim() const { return disc_.input_dim(); }

    void fill_column(Matrix& dst, int col, const Matrix& flat, int class_id) {
        int at = 0;
        for (int i = 0; i < flat.rows(); ++i) dst.re(at++, col) = flat.re(i, 0);
        if (classification_)
            for (int j = 0; j < disc_.label_embed.cols(); ++j)
                dst.re(at++, col) = disc_.label_embed.re(class_id, j);
        if (at != dst.rows()) throw ShapeError("train: discriminator input width mismatch");
    }

    static Matrix ones_row(int n) {
        Matrix m(1, n);
        for (double& v : m.re_data()) v = 1.0;
        return m;
    }

    DiscNodes attach_disc(Tape& tape, bool trainable) {
        if (trainable) return DiscNodes::attach(tape, disc_);
        DiscNodes n;
        n.leak = disc_.leak;
        for (const Matrix& w : disc_.weights) n.weights.push_back(tape.constant(w));
        for (const Matrix& b : disc_.biases) n.biases.push_back(tape.constant(b));
        if (disc_.label_embed.rows() > 0) n.label_embed = tape.constant(disc_.label_embed);
        return n;
    }

    void apply_disc_grads(Tape& tape, const DiscNodes& nodes) {
        if (disc_w_states_.empty()) {
            disc_w_states_.resize(disc_.weights.size());
            disc_b_states_.resize(disc_.biases.size());
        }
        for (std::size_t l = 0; l < disc_.weights.size(); ++l) {
            adam_update(disc_.weights[l], tape.gradient(nodes.weights[l]), disc_w_states_[l],
                        cfg_.lr_disc, cfg_);
            adam_update(disc_.biases[l], tape.gradient(nodes.biases[l]), disc_b_states_[l],
                        cfg_.lr_disc, cfg_);
        }
        if (nodes.label_embed >= 0)
            adam_update(disc_.label_embed, tape.gradient(nodes.label_embed), disc_e_state_,
                        cfg_.lr_disc, cfg_);
    }

    void mask_structure(Matrix& grad) const {
        if (basis_.structure == BasisStructure::Dense) return;
        for (int i = 0; i < grad.rows(); ++i)
            for (int j = 0; j < grad.cols(); ++j)
                if (!basis_.entry_allowed(i, j)) grad.set(i, j, 0.0);
    }

    const Dataset& data_;
    LieBasis basis_;
    CoefficientDistribution dist_;
    RepresentationSpec rep_;
    MlpParams disc_;
    TrainingConfig cfg_;
    RandomStream rng_;
    bool classification_ = false;
    std::vector<double> log_sigma_;
    std::vector<SampleView> samples_;

    std::vector<AdamState> basis_states_;
    std::vector<AdamState> sigma_states_;
    std::vector<AdamState> disc_w_states_;
    std::vector<AdamState> disc_b_states_;
    AdamState disc_e_state_;
};

} // namespace

TrainResult train(const Dataset& data, LieBasis basis, CoefficientDistribution dist,
                  RepresentationSpec rep, MlpParams disc, const TrainingConfig& cfg) {
    TrainLoop loop(data, std::move(basis), std::move(dist), rep, std::move(disc), cfg);
    return loop.run();
}

} // namespace liegan
