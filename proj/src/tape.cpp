#include "liegan/tape.hpp"

#include <cmath>

#include "liegan/matexp.hpp"

namespace liegan {

namespace {

void require_scalar(const Matrix& m, const char* op) {
    if (m.rows() != 1 || m.cols() != 1 || m.is_complex())
        throw ShapeError(std::string(op) + ": expected a 1x1 real node");
}

void require_real(const Matrix& m, const char* op) {
    if (m.is_complex()) throw ShapeError(std::string(op) + ": defined for real-field values only");
}

} // namespace

NodeId Tape::push(Matrix value, bool requires_grad, std::function<void(Tape&, const Node&)> back) {
    nodes_.push_back(Node{std::move(value), Matrix{}, std::move(back), requires_grad});
    return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Tape::constant(Matrix v) { return push(std::move(v), false, nullptr); }

NodeId Tape::param(Matrix v) { return push(std::move(v), true, nullptr); }

Matrix Tape::gradient(NodeId id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    return n.adjoint.rows() == 0 ? Matrix::zeros_like(n.value) : n.adjoint;
}

void Tape::accumulate(NodeId id, const Matrix& contribution) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad) return;
    if (n.adjoint.rows() == 0)
        n.adjoint = contribution;
    else
        n.adjoint += contribution;
}

void Tape::accumulate_scaled(NodeId id, const Matrix& contribution, double s) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad) return;
    if (n.adjoint.rows() == 0)
        n.adjoint = s * contribution;
    else {
        auto ar = n.adjoint.re_data();
        auto cr = contribution.re_data();
        for (std::size_t i = 0; i < ar.size(); ++i) ar[i] += s * cr[i];
        auto ai = n.adjoint.im_data();
        auto ci = contribution.im_data();
        for (std::size_t i = 0; i < ai.size(); ++i) ai[i] += s * ci[i];
    }
}

NodeId Tape::add(NodeId a, NodeId b) {
    Matrix v = val(a) + val(b);
    const bool rg = requires_grad(a) || requires_grad(b);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, b](Tape& t, const Node& n) {
            t.accumulate(a, n.adjoint);
            t.accumulate(b, n.adjoint);
        }));
}

NodeId Tape::sub(NodeId a, NodeId b) {
    Matrix v = val(a) - val(b);
    const bool rg = requires_grad(a) || requires_grad(b);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, b](Tape& t, const Node& n) {
            t.accumulate(a, n.adjoint);
            t.accumulate_scaled(b, n.adjoint, -1.0);
        }));
}

NodeId Tape::neg(NodeId a) {
    Matrix v = -val(a);
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a](Tape& t, const Node& n) { t.accumulate_scaled(a, n.adjoint, -1.0); }));
}

NodeId Tape::scale(NodeId a, double s) {
    Matrix v = s * val(a);
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, s](Tape& t, const Node& n) { t.accumulate_scaled(a, n.adjoint, s); }));
}

NodeId Tape::scalar_mul(NodeId s, NodeId a) {
    require_scalar(val(s), "scalar_mul");
    const double sv = val(s).re(0, 0);
    Matrix v = sv * val(a);
    const bool rg = requires_grad(s) || requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [s, a, sv](Tape& t, const Node& n) {
            Matrix sbar(1, 1);
            sbar.re(0, 0) = frobenius_inner_re(n.adjoint, t.val(a));
            t.accumulate(s, sbar);
            t.accumulate_scaled(a, n.adjoint, sv);
        }));
}

NodeId Tape::matmul(NodeId a, NodeId b) {
    Matrix v = val(a) * val(b);
    const bool rg = requires_grad(a) || requires_grad(b);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, b](Tape& t, const Node& n) {
            if (t.requires_grad(a)) t.accumulate(a, n.adjoint * conj_transpose(t.val(b)));
            if (t.requires_grad(b)) t.accumulate(b, conj_transpose(t.val(a)) * n.adjoint);
        }));
}

NodeId Tape::matexp(NodeId a) {
    Matrix v = mat_exp(val(a));
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a](Tape& t, const Node& n) { t.accumulate(a, mat_exp_vjp(t.val(a), n.adjoint)); }));
}

NodeId Tape::rows_segment(NodeId a, int row0, int len) {
    const Matrix& x = val(a);
    if (row0 < 0 || len < 0 || row0 + len > x.rows()) throw ShapeError("rows_segment: range out of bounds");
    Matrix v(len, x.cols(), x.field());
    for (int i = 0; i < len; ++i)
        for (int j = 0; j < x.cols(); ++j) v.set(i, j, x.at(row0 + i, j));
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, row0, len](Tape& t, const Node& n) {
            Matrix full = Matrix::zeros_like(t.val(a));
            for (int i = 0; i < len; ++i)
                for (int j = 0; j < full.cols(); ++j) full.set(row0 + i, j, n.adjoint.at(i, j));
            t.accumulate(a, full);
        }));
}

NodeId Tape::concat_rows(std::span<const NodeId> parts) {
    if (parts.empty()) throw ShapeError("concat_rows: no parts");
    const Field f = val(parts[0]).field();
    const int cols = val(parts[0]).cols();
    int total = 0;
    bool rg = false;
    for (NodeId p : parts) {
        const Matrix& m = val(p);
        if (m.cols() != cols || m.field() != f) throw ShapeError("concat_rows: incompatible parts");
        total += m.rows();
        rg = rg || requires_grad(p);
    }
    Matrix v(total, cols, f);
    int at = 0;
    for (NodeId p : parts) {
        const Matrix& m = val(p);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < cols; ++j) v.set(at + i, j, m.at(i, j));
        at += m.rows();
    }
    std::vector<NodeId> own(parts.begin(), parts.end());
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [own](Tape& t, const Node& n) {
            int row = 0;
            for (NodeId p : own) {
                const Matrix& m = t.val(p);
                Matrix piece(m.rows(), m.cols(), m.field());
                for (int i = 0; i < m.rows(); ++i)
                    for (int j = 0; j < m.cols(); ++j) piece.set(i, j, n.adjoint.at(row + i, j));
                t.accumulate(p, piece);
                row += m.rows();
            }
        }));
}

NodeId Tape::assemble_cols(std::span<const NodeId> cols) {
    if (cols.empty()) throw ShapeError("assemble_cols: no columns");
    const Matrix& first = val(cols[0]);
    const int h = first.rows();
    const Field f = first.field();
    bool rg = false;
    for (NodeId c : cols) {
        const Matrix& m = val(c);
        if (m.cols() != 1 || m.rows() != h || m.field() != f)
            throw ShapeError("assemble_cols: incompatible columns");
        rg = rg || requires_grad(c);
    }
    Matrix v(h, static_cast<int>(cols.size()), f);
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
        const Matrix& m = val(cols[static_cast<std::size_t>(j)]);
        for (int i = 0; i < h; ++i) v.set(i, j, m.at(i, 0));
    }
    std::vector<NodeId> own(cols.begin(), cols.end());
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [own, h, f](Tape& t, const Node& n) {
            for (int j = 0; j < static_cast<int>(own.size()); ++j) {
                Matrix col(h, 1, f);
                for (int i = 0; i < h; ++i) col.set(i, 0, n.adjoint.at(i, j));
                t.accumulate(own[static_cast<std::size_t>(j)], col);
            }
        }));
}

NodeId Tape::add_col_broadcast(NodeId a, NodeId col) {
    const Matrix& x = val(a);
    const Matrix& c = val(col);
    if (c.cols() != 1 || c.rows() != x.rows() || c.field() != x.field())
        throw ShapeError("add_col_broadcast: column shape mismatch");
    require_real(x, "add_col_broadcast");
    Matrix v = x;
    for (int i = 0; i < v.rows(); ++i)
        for (int j = 0; j < v.cols(); ++j) v.re(i, j) += c.re(i, 0);
    const bool rg = requires_grad(a) || requires_grad(col);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, col](Tape& t, const Node& n) {
            t.accumulate(a, n.adjoint);
            Matrix cbar(n.adjoint.rows(), 1);
            for (int i = 0; i < n.adjoint.rows(); ++i) {
                double s = 0.0;
                for (int j = 0; j < n.adjoint.cols(); ++j) s += n.adjoint.re(i, j);
                cbar.re(i, 0) = s;
            }
            t.accumulate(col, cbar);
        }));
}

NodeId Tape::complex_to_real(NodeId a) {
    const Matrix& x = val(a);
    if (!x.is_complex()) throw ShapeError("complex_to_real: input already real");
    if (x.cols() != 1) throw ShapeError("complex_to_real: expected a column vector");
    Matrix v(2 * x.rows(), 1);
    for (int i = 0; i < x.rows(); ++i) {
        v.re(2 * i, 0) = x.re(i, 0);
        v.re(2 * i + 1, 0) = x.im(i, 0);
    }
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a](Tape& t, const Node& n) {
            const Matrix& x = t.val(a);
            Matrix xbar(x.rows(), 1, Field::Complex);
            for (int i = 0; i < x.rows(); ++i)
                xbar.set(i, 0, {n.adjoint.re(2 * i, 0), n.adjoint.re(2 * i + 1, 0)});
            t.accumulate(a, xbar);
        }));
}

NodeId Tape::row_lookup(NodeId table, int row) {
    const Matrix& tab = val(table);
    require_real(tab, "row_lookup");
    if (row < 0 || row >= tab.rows()) throw std::domain_error("row_lookup: row out of range");
    Matrix v(tab.cols(), 1);
    for (int j = 0; j < tab.cols(); ++j) v.re(j, 0) = tab.re(row, j);
    const bool rg = requires_grad(table);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [table, row](Tape& t, const Node& n) {
            Matrix full = Matrix::zeros_like(t.val(table));
            for (int j = 0; j < full.cols(); ++j) full.re(row, j) = n.adjoint.re(j, 0);
            t.accumulate(table, full);
        }));
}

NodeId Tape::leaky_relu(NodeId a, double slope) {
    const Matrix& x = val(a);
    require_real(x, "leaky_relu");
    Matrix v = x;
    for (double& e : v.re_data())
        if (e < 0.0) e *= slope;
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, slope](Tape& t, const Node& n) {
            Matrix g = n.adjoint;
            auto xs = t.val(a).re_data();
            auto gs = g.re_data();
            for (std::size_t i = 0; i < gs.size(); ++i)
                if (xs[i] < 0.0) gs[i] *= slope;
            t.accumulate(a, g);
        }));
}

NodeId Tape::sigmoid(NodeId a) {
    const Matrix& x = val(a);
    require_real(x, "sigmoid");
    Matrix v = x;
    for (double& e : v.re_data()) e = 1.0 / (1.0 + std::exp(-e));
    const bool rg = requires_grad(a);
    const NodeId self_hint = static_cast<NodeId>(nodes_.size());
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, self_hint](Tape& t, const Node& n) {
            Matrix g = n.adjoint;
            auto ys = t.val(self_hint).re_data();
            auto gs = g.re_data();
            for (std::size_t i = 0; i < gs.size(); ++i) gs[i] *= ys[i] * (1.0 - ys[i]);
            t.accumulate(a, g);
        }));
}

NodeId Tape::clamp(NodeId a, double lo, double hi) {
    const Matrix& x = val(a);
    require_real(x, "clamp");
    Matrix v = x;
    for (double& e : v.re_data()) e = e < lo ? lo : (e > hi ? hi : e);
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, lo, hi](Tape& t, const Node& n) {
            Matrix g = n.adjoint;
            auto xs = t.val(a).re_data();
            auto gs = g.re_data();
            for (std::size_t i = 0; i < gs.size(); ++i)
                if (xs[i] < lo || xs[i] > hi) gs[i] = 0.0;
            t.accumulate(a, g);
        }));
}

NodeId Tape::log_el(NodeId a) {
    const Matrix& x = val(a);
    require_real(x, "log_el");
    Matrix v = x;
    for (double& e : v.re_data()) e = std::log(e);
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a](Tape& t, const Node& n) {
            Matrix g = n.adjoint;
            auto xs = t.val(a).re_data();
            auto gs = g.re_data();
            for (std::size_t i = 0; i < gs.size(); ++i) gs[i] /= xs[i];
            t.accumulate(a, g);
        }));
}

NodeId Tape::exp_el(NodeId a) {
    const Matrix& x = val(a);
    require_real(x, "exp_el");
    Matrix v = x;
    for (double& e : v.re_data()) e = std::exp(e);
    const bool rg = requires_grad(a);
    const NodeId self_hint = static_cast<NodeId>(nodes_.size());
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, self_hint](Tape& t, const Node& n) {
            Matrix g = n.adjoint;
            auto ys = t.val(self_hint).re_data();
            auto gs = g.re_data();
            for (std::size_t i = 0; i < gs.size(); ++i) gs[i] *= ys[i];
            t.accumulate(a, g);
        }));
}

NodeId Tape::softplus(NodeId a) {
    const Matrix& x = val(a);
    require_real(x, "softplus");
    Matrix v = x;
    for (double& e : v.re_data()) e = std::log1p(std::exp(-std::abs(e))) + (e > 0.0 ? e : 0.0);
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a](Tape& t, const Node& n) {
            Matrix g = n.adjoint;
            auto xs = t.val(a).re_data();
            auto gs = g.re_data();
            for (std::size_t i = 0; i < gs.size(); ++i) gs[i] *= 1.0 / (1.0 + std::exp(-xs[i]));
            t.accumulate(a, g);
        }));
}

NodeId Tape::abs_el(NodeId a) {
    const Matrix& x = val(a);
    require_real(x, "abs_el");
    Matrix v = x;
    for (double& e : v.re_data()) e = std::abs(e);
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a](Tape& t, const Node& n) {
            Matrix g = n.adjoint;
            auto xs = t.val(a).re_data();
            auto gs = g.re_data();
            for (std::size_t i = 0; i < gs.size(); ++i)
                gs[i] *= (xs[i] > 0.0) ? 1.0 : (xs[i] < 0.0 ? -1.0 : 0.0);
            t.accumulate(a, g);
        }));
}

NodeId Tape::mean_all(NodeId a) {
    const Matrix& x = val(a);
    require_real(x, "mean_all");
    const double inv = 1.0 / static_cast<double>(x.size());
    Matrix v(1, 1);
    double s = 0.0;
    for (double e : x.re_data()) s += e;
    v.re(0, 0) = s * inv;
    const bool rg = requires_grad(a);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, inv](Tape& t, const Node& n) {
            Matrix g = Matrix::zeros_like(t.val(a));
            const double gv = n.adjoint.re(0, 0) * inv;
            for (double& e : g.re_data()) e = gv;
            t.accumulate(a, g);
        }));
}

NodeId Tape::mean_of(std::span<const NodeId> scalars) {
    if (scalars.empty()) throw std::domain_error("mean_of: empty input");
    Matrix v(1, 1);
    double s = 0.0;
    bool rg = false;
    for (NodeId id : scalars) {
        require_scalar(val(id), "mean_of");
        s += val(id).re(0, 0);
        rg = rg || requires_grad(id);
    }
    const double inv = 1.0 / static_cast<double>(scalars.size());
    v.re(0, 0) = s * inv;
    std::vector<NodeId> own(scalars.begin(), scalars.end());
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [own, inv](Tape& t, const Node& n) {
            Matrix g(1, 1);
            g.re(0, 0) = n.adjoint.re(0, 0) * inv;
            for (NodeId id : own) t.accumulate(id, g);
        }));
}

NodeId Tape::cos_sim(NodeId a, NodeId b) {
    const Matrix& x = val(a);
    const Matrix& y = val(b);
    const double c = cosine_sim(x, y); // validates shapes and norms
    Matrix v(1, 1);
    v.re(0, 0) = c;
    const bool rg = requires_grad(a) || requires_grad(b);
    return push(std::move(v), rg, !rg ? nullptr : std::function<void(Tape&, const Node&)>(
        [a, b, c](Tape& t, const Node& n) {
            const Matrix& x = t.val(a);
            const Matrix& y = t.val(b);
            const double na = frobenius_norm(x);
            const double nb = frobenius_norm(y);
            const double g = n.adjoint.re(0, 0);
            // d/dx = y/(na*nb) - c*x/na^2, applied plane-wise (real-linear).
            if (t.requires_grad(a)) {
                Matrix xbar = (g / (na * nb)) * y;
                xbar += (-g * c / (na * na)) * x;
                t.accumulate(a, xbar);
            }
            if (t.requires_grad(b)) {
                Matrix ybar = (g / (na * nb)) * x;
                ybar += (-g * c / (nb * nb)) * y;
                t.accumulate(b, ybar);
            }
        }));
}

void Tape::backward(NodeId root) {
    Node& r = nodes_[static_cast<std::size_t>(root)];
    require_scalar(r.value, "backward root");
    Matrix seed(1, 1);
    seed.re(0, 0) = 1.0;
    r.adjoint = seed;
    for (std::int64_t i = root; i >= 0; --i) {
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        if (n.back && n.adjoint.rows() != 0) n.back(*this, n);
    }
}

} // namespace liegan
