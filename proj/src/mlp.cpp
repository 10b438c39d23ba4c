#include "liegan/mlp.hpp"

#include <cmath>

namespace liegan {

MlpParams MlpParams::init(const MlpConfig& cfg, RandomStream& rng) {
    if (cfg.input_dim <= 0 || cfg.hidden <= 0 || cfg.layers < 1)
        throw ShapeError("MlpParams: invalid configuration");
    MlpParams p;
    p.leak = cfg.leak;
    int in = cfg.input_dim;
    for (int layer = 0; layer < cfg.layers; ++layer) {
        const int out = (layer + 1 == cfg.layers) ? 1 : cfg.hidden;
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        Matrix w(out, in);
        for (double& v : w.re_data()) v = rng.uniform(-bound, bound);
        Matrix b(out, 1);
        for (double& v : b.re_data()) v = rng.uniform(-bound, bound);
        p.weights.push_back(std::move(w));
        p.biases.push_back(std::move(b));
        in = out;
    }
    if (cfg.num_classes > 0) {
        p.label_embed = Matrix(cfg.num_classes, cfg.embed_dim);
        for (double& v : p.label_embed.re_data()) v = rng.gauss();
    }
    return p;
}

void MlpParams::validate() const {
    if (weights.empty() || weights.size() != biases.size())
        throw ShapeError("MlpParams: layer lists inconsistent");
    int in = weights.front().cols();
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].cols() != in || biases[l].rows() != weights[l].rows() || biases[l].cols() != 1)
            throw ShapeError("MlpParams: layer width chain broken at layer " + std::to_string(l));
        if (!weights[l].all_finite() || !biases[l].all_finite())
            throw std::domain_error("MlpParams: non-finite parameters");
        in = weights[l].rows();
    }
    if (weights.back().rows() != 1) throw ShapeError("MlpParams: output layer width must be 1");
    if (label_embed.rows() > 0 && !label_embed.all_finite())
        throw std::domain_error("MlpParams: non-finite embedding");
}

double disc_forward(const MlpParams& params, std::span<const double> input) {
    params.validate();
    if (static_cast<int>(input.size()) != params.input_dim())
        throw ShapeError("disc_forward: input dim " + std::to_string(input.size()) + " vs " +
                         std::to_string(params.input_dim()));
    std::vector<double> act(input.begin(), input.end());
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        const Matrix& w = params.weights[l];
        const Matrix& b = params.biases[l];
        std::vector<double> next(static_cast<std::size_t>(w.rows()));
        for (int i = 0; i < w.rows(); ++i) {
            double s = b.re(i, 0);
            for (int j = 0; j < w.cols(); ++j) s += w.re(i, j) * act[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(i)] = s;
        }
        if (l + 1 < params.weights.size())
            for (double& v : next)
                if (v < 0.0) v *= params.leak;
        act = std::move(next);
    }
    return 1.0 / (1.0 + std::exp(-act[0]));
}

double disc_forward(const MlpParams& params, std::span<const double> x, int class_id) {
    if (params.label_embed.rows() == 0)
        throw std::domain_error("disc_forward: discriminator has no label embedding");
    if (class_id < 0 || class_id >= params.label_embed.rows())
        throw std::domain_error("disc_forward: unknown class id " + std::to_string(class_id));
    std::vector<double> input(x.begin(), x.end());
    for (int j = 0; j < params.label_embed.cols(); ++j)
        input.push_back(params.label_embed.re(class_id, j));
    return disc_forward(params, input);
}

DiscNodes DiscNodes::attach(Tape& tape, const MlpParams& params) {
    DiscNodes n;
    n.leak = params.leak;
    for (const Matrix& w : params.weights) n.weights.push_back(tape.param(w));
    for (const Matrix& b : params.biases) n.biases.push_back(tape.param(b));
    if (params.label_embed.rows() > 0) n.label_embed = tape.param(params.label_embed);
    return n;
}

NodeId disc_logits_tape(Tape& tape, const DiscNodes& nodes, NodeId inputs) {
    NodeId act = inputs;
    for (std::size_t l = 0; l < nodes.weights.size(); ++l) {
        act = tape.add_col_broadcast(tape.matmul(nodes.weights[l], act), nodes.biases[l]);
        if (l + 1 < nodes.weights.size()) act = tape.leaky_relu(act, nodes.leak);
    }
    return act;
}

NodeId disc_forward_tape(Tape& tape, const DiscNodes& nodes, NodeId inputs) {
    return tape.sigmoid(disc_logits_tape(tape, nodes, inputs));
}

} // namespace liegan
