#include "liegan/losses.hpp"

#include <algorithm>
#include <cmath>

namespace liegan {

std::pair<double, double> gan_losses(std::span<const double> d_real, std::span<const double> d_fake) {
    if (d_real.empty() || d_fake.empty()) throw std::domain_error("gan_losses: empty batch");
    auto clamped = [](double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); };
    double d_loss = 0.0;
    const std::size_t n = std::min(d_real.size(), d_fake.size());
    for (std::size_t i = 0; i < n; ++i)
        d_loss += std::log(clamped(d_real[i])) + std::log(1.0 - clamped(d_fake[i]));
    d_loss = -d_loss / static_cast<double>(n);
    double g_loss = 0.0;
    for (double p : d_fake) g_loss += std::log(clamped(p));
    g_loss = -g_loss / static_cast<double>(d_fake.size());
    return {d_loss, g_loss};
}

Matrix concat_cols(const Matrix& a, const Matrix& b) {
    if (a.cols() != 1 || b.cols() != 1) throw ShapeError("concat_cols: expected column vectors");
    const Field f = (a.is_complex() || b.is_complex()) ? Field::Complex : Field::Real;
    const Matrix& aa = (f == Field::Complex && !a.is_complex()) ? to_complex(a) : a;
    const Matrix& bb = (f == Field::Complex && !b.is_complex()) ? to_complex(b) : b;
    Matrix out(a.rows() + b.rows(), 1, f);
    for (int i = 0; i < aa.rows(); ++i) out.set(i, 0, aa.at(i, 0));
    for (int i = 0; i < bb.rows(); ++i) out.set(aa.rows() + i, 0, bb.at(i, 0));
    return out;
}

double reg_loss(const Matrix& x, const Matrix& y, const Matrix& xt, const Matrix& yt) {
    if (!x.same_shape(xt) || !y.same_shape(yt)) throw ShapeError("reg_loss: shape mismatch");
    return cosine_sim(concat_cols(xt, yt), concat_cols(x, y));
}

double chreg_loss(const LieBasis& basis) {
    basis.validate();
    double total = 0.0;
    for (int i = 0; i < basis.channels; ++i)
        for (int j = i + 1; j < basis.channels; ++j)
            total += std::abs(cosine_sim(basis.mats[static_cast<std::size_t>(i)],
                                         basis.mats[static_cast<std::size_t>(j)]));
    return total;
}

} // namespace liegan
