#include "liegan/matexp.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace liegan {

namespace {

constexpr int kSeriesDegree = 16;

int squaring_count(double fro_norm) {
    if (fro_norm <= 0.0) return 0;
    const double s = std::ceil(std::log2(fro_norm)) + 4.0;
    return s > 0.0 ? static_cast<int>(s) : 0;
}

std::array<double, kSeriesDegree + 1> factorial_inverses() {
    std::array<double, kSeriesDegree + 1> inv{};
    double fact = 1.0;
    inv[0] = 1.0;
    for (int j = 1; j <= kSeriesDegree; ++j) {
        fact *= j;
        inv[j] = 1.0 / fact;
    }
    return inv;
}

struct ExpTrace {
    int s = 0;
    Matrix scaled;                     // B = A / 2^s
    std::vector<Matrix> series_powers; // B^0 .. B^16
    std::vector<Matrix> squarings;     // E_0 = T, E_{i+1} = E_i^2; size s+1
};

ExpTrace run_forward(const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("mat_exp: non-square matrix");
    if (!a.all_finite()) throw std::domain_error("mat_exp: non-finite entries");
    const double norm = frobenius_norm(a);
    if (!std::isfinite(norm)) throw std::domain_error("mat_exp: norm overflow");

    static const auto inv_fact = factorial_inverses();

    ExpTrace t;
    t.s = squaring_count(norm);
    t.scaled = std::ldexp(1.0, -t.s) * a;

    t.series_powers.reserve(kSeriesDegree + 1);
    t.series_powers.push_back(Matrix::identity(a.rows(), a.field()));
    for (int j = 1; j <= kSeriesDegree; ++j)
        t.series_powers.push_back(t.series_powers.back() * t.scaled);

    Matrix series = Matrix::zeros_like(a);
    for (int j = 0; j <= kSeriesDegree; ++j) series += inv_fact[j] * t.series_powers[j];

    t.squarings.reserve(t.s + 1);
    t.squarings.push_back(std::move(series));
    for (int i = 0; i < t.s; ++i) t.squarings.push_back(t.squarings.back() * t.squarings.back());
    return t;
}

} // namespace

Matrix mat_exp(const Matrix& a) { return run_forward(a).squarings.back(); }

Matrix mat_exp_vjp(const Matrix& a, const Matrix& g_bar) {
    if (!a.same_shape(g_bar)) throw ShapeError("mat_exp_vjp: adjoint shape mismatch");
    const ExpTrace t = run_forward(a);
    static const auto inv_fact = factorial_inverses();

    // Backward through the squarings: for C = E*E, E_bar = C_bar*E^H + E^H*C_bar.
    Matrix acc = g_bar;
    for (int i = t.s - 1; i >= 0; --i) {
        const Matrix eh = conj_transpose(t.squarings[static_cast<std::size_t>(i)]);
        acc = acc * eh + eh * acc;
    }

    // Backward through the truncated series T = sum_j B^j / j!:
    //   B_bar = sum_{j>=1} 1/j! sum_{p+q=j-1} (B^H)^p T_bar (B^H)^q
    // grouped as sum_p C^p T_bar (sum_q inv_fact[p+q+1] C^q) with C = B^H.
    std::vector<Matrix> ch_powers;
    ch_powers.reserve(kSeriesDegree);
    for (int p = 0; p < kSeriesDegree; ++p)
        ch_powers.push_back(conj_transpose(t.series_powers[static_cast<std::size_t>(p)]));

    Matrix b_bar = Matrix::zeros_like(a);
    for (int p = 0; p < kSeriesDegree; ++p) {
        Matrix right = Matrix::zeros_like(a);
        for (int q = 0; p + q + 1 <= kSeriesDegree; ++q)
            right += inv_fact[static_cast<std::size_t>(p + q + 1)] * ch_powers[static_cast<std::size_t>(q)];
        b_bar += ch_powers[static_cast<std::size_t>(p)] * (acc * right);
    }

    return std::ldexp(1.0, -t.s) * b_bar;
}

} // namespace liegan
