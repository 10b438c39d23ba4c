#include "liegan/basis.hpp"

#include <cmath>

#include "liegan/matexp.hpp"

namespace liegan {

void LieBasis::validate() const {
    if (channels <= 0 || dim <= 0) throw ShapeError("LieBasis: channels and dim must be positive");
    if (static_cast<int>(mats.size()) != channels) throw ShapeError("LieBasis: channel count mismatch");
    for (const Matrix& m : mats) {
        if (m.rows() != dim || m.cols() != dim || m.field() != field)
            throw ShapeError("LieBasis: channel shape/field mismatch");
        if (!m.all_finite()) throw std::domain_error("LieBasis: non-finite entries");
    }
    if (structure == BasisStructure::BlockDiagRepeat) {
        if (block_size <= 0 || dim % block_size != 0)
            throw ShapeError("LieBasis: block size must divide dim");
        for (const Matrix& m : mats)
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    if (!entry_allowed(i, j) && (m.re(i, j) != 0.0 || m.im(i, j) != 0.0))
                        throw ShapeError("LieBasis: nonzero entry outside diagonal blocks");
    }
}

bool LieBasis::entry_allowed(int i, int j) const {
    if (structure == BasisStructure::Dense) return true;
    return i / block_size == j / block_size;
}

void LieBasis::enforce_structure() {
    if (structure == BasisStructure::Dense) return;
    for (Matrix& m : mats)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                if (!entry_allowed(i, j)) m.set(i, j, 0.0);
}

LieBasis LieBasis::normalized() const {
    LieBasis out = *this;
    for (Matrix& m : out.mats) {
        const double n = frobenius_norm(m);
        if (n > 0.0) m *= 1.0 / n;
    }
    return out;
}

LieBasis LieBasis::random_init(int channels, int dim, Field field, RandomStream& rng,
                               BasisStructure structure, int block_size, double stddev) {
    LieBasis b;
    b.channels = channels;
    b.dim = dim;
    b.field = field;
    b.structure = structure;
    b.block_size = block_size;
    for (int c = 0; c < channels; ++c)
        b.mats.push_back(Matrix::random_gaussian(rng, dim, dim, field, stddev));
    b.enforce_structure();
    b.validate();
    return b;
}

CoefficientDistribution CoefficientDistribution::gaussian(std::vector<double> sigma, bool learnable) {
    CoefficientDistribution d;
    d.kind = Kind::Gaussian;
    d.sigma = std::move(sigma);
    d.learnable = learnable;
    return d;
}

CoefficientDistribution CoefficientDistribution::gaussian(int channels, double sigma, bool learnable) {
    return gaussian(std::vector<double>(static_cast<std::size_t>(channels), sigma), learnable);
}

CoefficientDistribution CoefficientDistribution::uniform_int_grid(long lo, long hi) {
    CoefficientDistribution d;
    d.kind = Kind::UniformIntGrid;
    d.grid_lo = lo;
    d.grid_hi = hi;
    return d;
}

void CoefficientDistribution::validate(int channels) const {
    if (kind == Kind::Gaussian) {
        if (static_cast<int>(sigma.size()) != channels)
            throw ShapeError("CoefficientDistribution: sigma size must equal channel count");
        for (double s : sigma)
            if (!(s > 0.0)) throw std::domain_error("CoefficientDistribution: sigma must be positive");
    } else {
        if (grid_lo >= grid_hi) throw std::domain_error("CoefficientDistribution: grid needs lo < hi");
        if (grid_lo > 0 || grid_hi < 0)
            throw std::domain_error("CoefficientDistribution: grid must include 0 so the identity is reachable");
    }
}

void RepresentationSpec::validate(int k, int n, int m) const {
    if (input_blocks <= 0) throw ShapeError("RepresentationSpec: input_blocks must be positive");
    if (n != input_blocks * k)
        throw ShapeError("RepresentationSpec: n = " + std::to_string(n) + " but t*k = " +
                         std::to_string(input_blocks * k));
    if (output_action == OutputAction::RepeatBlocks && m != output_blocks * k)
        throw ShapeError("RepresentationSpec: m = " + std::to_string(m) + " but s*k = " +
                         std::to_string(output_blocks * k));
}

std::vector<std::vector<double>> sample_coefficients(const CoefficientDistribution& dist, int channels,
                                                     int count, RandomStream& rng) {
    if (count < 1) throw std::domain_error("sample_coefficients: count must be >= 1");
    dist.validate(channels);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(count));
    for (auto& w : out) {
        w.resize(static_cast<std::size_t>(channels));
        for (int c = 0; c < channels; ++c) {
            if (dist.kind == CoefficientDistribution::Kind::Gaussian)
                w[static_cast<std::size_t>(c)] = dist.sigma[static_cast<std::size_t>(c)] * rng.gauss();
            else
                w[static_cast<std::size_t>(c)] =
                    static_cast<double>(rng.uniform_int(dist.grid_lo, dist.grid_hi));
        }
    }
    return out;
}

GroupSample sample_group_element(const LieBasis& basis, std::span<const double> w) {
    if (static_cast<int>(w.size()) != basis.channels)
        throw ShapeError("sample_group_element: coefficient count mismatch");
    Matrix a(basis.dim, basis.dim, basis.field);
    for (int c = 0; c < basis.channels; ++c)
        a += w[static_cast<std::size_t>(c)] * basis.mats[static_cast<std::size_t>(c)];
    GroupSample s{mat_exp(a), std::vector<double>(w.begin(), w.end())};
    if (std::abs(determinant(s.g)) < 1e-12)
        throw std::domain_error("sample_group_element: numerically singular group element");
    return s;
}

Matrix apply_block_action(const Matrix& g, const Matrix& x, int blocks) {
    const int k = g.rows();
    if (g.cols() != k) throw ShapeError("apply_block_action: group element must be square");
    if (x.cols() != 1 || x.rows() != blocks * k || x.field() != g.field())
        throw ShapeError("apply_block_action: vector has wrong length or field");
    Matrix out(x.rows(), 1, x.field());
    for (int b = 0; b < blocks; ++b) {
        for (int i = 0; i < k; ++i) {
            std::complex<double> acc = 0.0;
            for (int j = 0; j < k; ++j) acc += g.at(i, j) * x.at(b * k + j, 0);
            out.set(b * k + i, 0, acc);
        }
    }
    return out;
}

std::pair<Matrix, Matrix> apply_transform(const GroupSample& sample, const RepresentationSpec& rep,
                                          const Matrix& x, const Matrix& y) {
    Matrix xt = apply_block_action(sample.g, x, rep.input_blocks);
    if (rep.output_action == RepresentationSpec::OutputAction::Trivial) return {std::move(xt), y};
    Matrix yt = apply_block_action(sample.g, y, rep.output_blocks);
    return {std::move(xt), std::move(yt)};
}

} // namespace liegan
