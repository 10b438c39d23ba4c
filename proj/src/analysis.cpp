#include "liegan/analysis.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "liegan/matexp.hpp"

namespace liegan {

void MetricSolveConfig::validate() const {
    if (!(anti_collapse > 0.0)) throw std::domain_error("MetricSolveConfig: a must be > 0");
    if (!(lr > 0.0)) throw std::domain_error("MetricSolveConfig: lr must be > 0");
    if (steps < 1) throw std::domain_error("MetricSolveConfig: steps must be >= 1");
}

double invariance_residual(const Matrix& l, const Matrix& j) {
    if (!l.same_shape(j)) throw ShapeError("invariance_residual: shape mismatch");
    return frobenius_norm(conj_transpose(l) * j + j * l);
}

Matrix solve_metric(const LieBasis& basis, const MetricSolveConfig& cfg) {
    cfg.validate();
    basis.validate();
    if (basis.field != Field::Real) throw ShapeError("solve_metric: real-field bases only");
    bool any_nonzero = false;
    for (const Matrix& l : basis.mats) any_nonzero = any_nonzero || frobenius_norm(l) > 0.0;
    if (!any_nonzero)
        throw SolverError("solve_metric: all channels are zero, the objective is unconstrained");

    const int k = basis.dim;
    std::vector<Matrix> lt;
    for (const Matrix& l : basis.mats) lt.push_back(transpose(l));

    RandomStream rng(cfg.seed);
    Matrix j = Matrix::random_gaussian(rng, k, k, Field::Real, 1.0);
    j = 0.5 * (j + transpose(j));

    for (long step = 0; step < cfg.steps; ++step) {
        Matrix grad(k, k);
        for (int c = 0; c < basis.channels; ++c) {
            const Matrix& l = basis.mats[static_cast<std::size_t>(c)];
            const Matrix m = lt[static_cast<std::size_t>(c)] * j + j * l;
            grad += 2.0 * (l * m + m * lt[static_cast<std::size_t>(c)]);
        }
        if (cfg.norm == MetricNorm::Frobenius) {
            grad += (-2.0 * cfg.anti_collapse) * j;
        } else {
            int bi = 0, bj = 0;
            double best = -1.0;
            for (int r = 0; r < k; ++r)
                for (int cidx = 0; cidx < k; ++cidx)
                    if (std::abs(j.re(r, cidx)) > best) {
                        best = std::abs(j.re(r, cidx));
                        bi = r;
                        bj = cidx;
                    }
            grad.re(bi, bj) -= 2.0 * cfg.anti_collapse * j.re(bi, bj);
        }
        j -= cfg.lr * grad;
        j = 0.5 * (j + transpose(j));
        const double norm = frobenius_norm(j);
        if (!std::isfinite(norm) || norm > 1e6)
            throw SolverError("solve_metric: diverged; try a smaller anti-collapse coefficient or lr");
    }

    const double norm = frobenius_norm(j);
    if (norm == 0.0) throw SolverError("solve_metric: collapsed to zero");
    return (1.0 / norm) * j;
}

namespace {

Eigen::MatrixXcd stack_channels(const LieBasis& b) {
    const int kk = b.dim * b.dim;
    Eigen::MatrixXcd s(kk, b.channels);
    for (int c = 0; c < b.channels; ++c) {
        const Matrix& m = b.mats[static_cast<std::size_t>(c)];
        for (int i = 0; i < b.dim; ++i)
            for (int j = 0; j < b.dim; ++j)
                s(i * b.dim + j, c) = m.at(i, j);
    }
    return s;
}

// Orthonormal basis of the column span, rank-truncated.
Eigen::MatrixXcd orthonormal_span(const Eigen::MatrixXcd& s) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? sv(0) * 1e-10 : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    if (rank == 0) throw UndefinedSimilarityError("compare_bases: zero-span basis");
    return svd.matrixU().leftCols(rank);
}

// Modulus of the normalized Hermitian inner product; reduces to |cosine| for
// real matrices but also counts phase-rotated complex channels as aligned.
double channel_alignment(const Matrix& a, const Matrix& b) {
    const double na = frobenius_norm(a);
    const double nb = frobenius_norm(b);
    if (na == 0.0 || nb == 0.0) throw UndefinedSimilarityError("compare_bases: zero-norm channel");
    std::complex<double> inner = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) inner += std::conj(a.at(i, j)) * b.at(i, j);
    return std::abs(inner) / (na * nb);
}

} // namespace

SimilarityReport compare_bases(const LieBasis& learned, const LieBasis& truth) {
    learned.validate();
    truth.validate();
    if (learned.dim != truth.dim || learned.field != truth.field)
        throw ShapeError("compare_bases: bases must share dim and field");

    SimilarityReport rep;
    for (const Matrix& l : learned.mats) {
        double best = 0.0;
        for (const Matrix& t : truth.mats) best = std::max(best, channel_alignment(l, t));
        rep.per_channel_cosine.push_back(best);
    }

    const Eigen::MatrixXcd q1 = orthonormal_span(stack_channels(learned));
    const Eigen::MatrixXcd q2 = orthonormal_span(stack_channels(truth));
    Eigen::JacobiSVD<Eigen::MatrixXcd> angles(q1.adjoint() * q2);
    const auto& cosines = angles.singularValues();
    const int count = static_cast<int>(std::min(q1.cols(), q2.cols()));
    double score = 0.0;
    for (int i = 0; i < count; ++i) {
        const double c = std::min(1.0, cosines(i));
        score += c * c;
    }
    rep.subspace_score = count > 0 ? score / count : 0.0;

    // optimal per-channel scalar alignment against each truth channel
    double mae = 0.0;
    for (const Matrix& t : truth.mats) {
        double best = -1.0;
        const Matrix* match = nullptr;
        for (const Matrix& l : learned.mats) {
            const double a = channel_alignment(l, t);
            if (a > best) {
                best = a;
                match = &l;
            }
        }
        std::complex<double> inner = 0.0;
        for (int i = 0; i < t.rows(); ++i)
            for (int j = 0; j < t.cols(); ++j) inner += std::conj(match->at(i, j)) * t.at(i, j);
        const double nl = frobenius_norm(*match);
        const std::complex<double> s = inner / (nl * nl);
        double err = 0.0;
        for (int i = 0; i < t.rows(); ++i)
            for (int j = 0; j < t.cols(); ++j) err += std::abs(s * match->at(i, j) - t.at(i, j));
        mae += err / static_cast<double>(t.rows() * t.cols());
    }
    rep.scale_aligned_mae = mae / static_cast<double>(truth.mats.size());
    return rep;
}

Matrix augment_predict(const std::function<Matrix(const Matrix&)>& model, const LieBasis& basis,
                       const CoefficientDistribution& dist, const RepresentationSpec& rep,
                       const Matrix& x, int n_samples, RandomStream& rng) {
    if (n_samples < 1) throw std::domain_error("augment_predict: n_samples must be >= 1");
    const bool trivial = rep.output_action == RepresentationSpec::OutputAction::Trivial;
    Matrix acc;
    for (int s = 0; s < n_samples; ++s) {
        auto w = sample_coefficients(dist, basis.channels, 1, rng)[0];
        GroupSample g = sample_group_element(basis, w);
        if (std::abs(determinant(g.g)) < 1e-12) {
            // one resample, then give up: the draw landed on a numerically
            // singular representation
            w = sample_coefficients(dist, basis.channels, 1, rng)[0];
            g = sample_group_element(basis, w);
            if (std::abs(determinant(g.g)) < 1e-12)
                throw SolverError("augment_predict: sampled group element is singular");
        }
        const Matrix xt = apply_block_action(g.g, x, rep.input_blocks);
        Matrix yt = model(xt);
        if (!trivial) {
            // exact group inverse through the exponential map
            Matrix a(basis.dim, basis.dim, basis.field);
            for (int c = 0; c < basis.channels; ++c)
                a += g.w[static_cast<std::size_t>(c)] * basis.mats[static_cast<std::size_t>(c)];
            yt = apply_block_action(mat_exp(-a), yt, rep.output_blocks);
        }
        if (s == 0)
            acc = std::move(yt);
        else
            acc += yt;
    }
    acc *= 1.0 / static_cast<double>(n_samples);
    return acc;
}

Dataset augment_dataset(const Dataset& ds, const LieBasis& basis, const CoefficientDistribution& dist,
                        const RepresentationSpec& rep, int copies, RandomStream& rng) {
    if (copies < 0) throw std::domain_error("augment_dataset: copies must be >= 0");
    if (ds.task == TaskKind::Classification)
        throw std::domain_error("augment_dataset: classification labels cannot be transformed");
    Dataset out = ds;
    for (long i = 0; i < ds.count(); ++i) {
        const Matrix x = ds.x_col(i);
        const Matrix y = ds.y_col(i);
        for (int c = 0; c < copies; ++c) {
            const auto w = sample_coefficients(dist, basis.channels, 1, rng)[0];
            const GroupSample g = sample_group_element(basis, w);
            auto [xt, yt] = apply_transform(g, rep, x, y);
            out.push_sample(xt, yt);
        }
    }
    return out;
}

double metric_inner(const Matrix& j, const Matrix& xi, const Matrix& xj) {
    if (xi.cols() != 1 || xj.cols() != 1 || xi.rows() != j.rows() || xj.rows() != j.cols())
        throw ShapeError("metric_inner: dimension mismatch");
    const Matrix r = transpose(xi) * (j * xj);
    return r.re(0, 0);
}

double metric_sq_dist(const Matrix& j, const Matrix& xi, const Matrix& xj) {
    const Matrix d = xi - xj;
    return metric_inner(j, d, d);
}

} // namespace liegan
