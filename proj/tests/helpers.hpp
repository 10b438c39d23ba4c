#pragma once

// Shared test oracles. These deliberately avoid the library's production
// paths: the Taylor oracle is a raw series sum with no scaling tricks, and
// the finite-difference checker differentiates by evaluation only.

#include <cmath>
#include <functional>
#include <vector>

#include "liegan/matrix.hpp"
#include "liegan/rng.hpp"
#include "liegan/tape.hpp"

namespace test_helpers {

/// Raw truncated Taylor series sum_{j=0}^{terms} A^j / j!.
inline liegan::Matrix taylor_exp_oracle(const liegan::Matrix& a, int terms = 60) {
    liegan::Matrix acc = liegan::Matrix::identity(a.rows(), a.field());
    liegan::Matrix power = acc;
    double factorial = 1.0;
    for (int j = 1; j <= terms; ++j) {
        power = power * a;
        factorial *= j;
        acc += (1.0 / factorial) * power;
    }
    return acc;
}

/// Builds a graph over param nodes made from `inputs` and returns the loss
/// node. Called fresh for every perturbed evaluation.
using GraphBuilder =
    std::function<liegan::NodeId(liegan::Tape&, const std::vector<liegan::NodeId>&)>;

inline double eval_loss(const GraphBuilder& build, const std::vector<liegan::Matrix>& inputs) {
    liegan::Tape tape;
    std::vector<liegan::NodeId> ids;
    for (const auto& m : inputs) ids.push_back(tape.param(m));
    return tape.value(build(tape, ids)).re(0, 0);
}

/// Max relative error between tape gradients and central finite differences
/// over every real and imaginary component of every input.
inline double max_grad_rel_err(const GraphBuilder& build, std::vector<liegan::Matrix> inputs,
                               double step = 1e-5) {
    liegan::Tape tape;
    std::vector<liegan::NodeId> ids;
    for (const auto& m : inputs) ids.push_back(tape.param(m));
    const liegan::NodeId loss = build(tape, ids);
    tape.backward(loss);
    std::vector<liegan::Matrix> grads;
    for (auto id : ids) grads.push_back(tape.gradient(id));

    double worst = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (int plane = 0; plane < 2; ++plane) {
            auto data = plane == 0 ? inputs[i].re_data() : inputs[i].im_data();
            auto gdata = plane == 0 ? grads[i].re_data() : grads[i].im_data();
            for (std::size_t e = 0; e < data.size(); ++e) {
                const double keep = data[e];
                data[e] = keep + step;
                const double up = eval_loss(build, inputs);
                data[e] = keep - step;
                const double dn = eval_loss(build, inputs);
                data[e] = keep;
                const double fd = (up - dn) / (2.0 * step);
                const double g = gdata[e];
                const double denom = std::max({std::abs(fd), std::abs(g), 1e-6});
                worst = std::max(worst, std::abs(fd - g) / denom);
            }
        }
    }
    return worst;
}

inline liegan::Matrix random_matrix(liegan::RandomStream& rng, int rows, int cols,
                                    liegan::Field field = liegan::Field::Real, double stddev = 1.0) {
    return liegan::Matrix::random_gaussian(rng, rows, cols, field, stddev);
}

} // namespace test_helpers
