#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "liegan/matrix.hpp"

namespace liegan {

using NodeId = std::int32_t;

/// Reverse-mode gradient tape over Matrix values.
///
/// A tape is built once per training step, evaluated forward as ops are
/// recorded, and swept backward in reverse creation order. Complex entries
/// are differentiated as independent real and imaginary parts; the adjoint
/// of a complex value z is dL/dRe(z) + i dL/dIm(z).
///
/// Tapes are single-owner: one thread records and sweeps a given tape.
class Tape {
public:
    NodeId constant(Matrix v);
    NodeId param(Matrix v);

    const Matrix& value(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    /// Valid after backward(); zero matrix if the node was never reached.
    Matrix gradient(NodeId id) const;
    bool requires_grad(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].requires_grad; }
    std::size_t node_count() const { return nodes_.size(); }

    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId neg(NodeId a);
    NodeId scale(NodeId a, double s);
    /// s is 1x1 real; result has a's field.
    NodeId scalar_mul(NodeId s, NodeId a);
    NodeId matmul(NodeId a, NodeId b);
    NodeId matexp(NodeId a);

    NodeId rows_segment(NodeId a, int row0, int len);
    NodeId concat_rows(std::span<const NodeId> parts);
    /// Column vectors of equal height into one matrix, one column each.
    NodeId assemble_cols(std::span<const NodeId> cols);
    /// col (h x 1) added to every column of a (h x B).
    NodeId add_col_broadcast(NodeId a, NodeId col);
    /// Interleaved [re, im] flattening of a complex column vector.
    NodeId complex_to_real(NodeId a);
    /// Single row of a table as a column vector (embedding lookup).
    NodeId row_lookup(NodeId table, int row);

    NodeId leaky_relu(NodeId a, double slope);
    NodeId sigmoid(NodeId a);
    NodeId clamp(NodeId a, double lo, double hi);
    NodeId log_el(NodeId a);
    NodeId exp_el(NodeId a);
    NodeId abs_el(NodeId a);
    /// log(1 + e^x), evaluated stably; softplus(-z) == -log(sigmoid(z)).
    NodeId softplus(NodeId a);

    NodeId mean_all(NodeId a);
    /// Fixed-order mean of 1x1 nodes.
    NodeId mean_of(std::span<const NodeId> scalars);
    NodeId cos_sim(NodeId a, NodeId b);

    /// Seeds d(root)/d(root) = 1 and sweeps the whole tape in reverse
    /// creation order. root must be a 1x1 real node.
    void backward(NodeId root);

private:
    struct Node {
        Matrix value;
        Matrix adjoint; // empty until first accumulation
        std::function<void(Tape&, const Node&)> back;
        bool requires_grad = false;
    };

    NodeId push(Matrix value, bool requires_grad, std::function<void(Tape&, const Node&)> back);
    void accumulate(NodeId id, const Matrix& contribution);
    void accumulate_scaled(NodeId id, const Matrix& contribution, double s);
    const Matrix& val(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }

    std::vector<Node> nodes_;
};

} // namespace liegan
