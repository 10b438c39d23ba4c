#include "liegan/groups.hpp"

#include <cmath>

namespace liegan {
namespace groups {

namespace {

Matrix real_entries(int n, std::initializer_list<double> entries) {
    return Matrix::from_rows(n, n, std::span<const double>(entries.begin(), entries.size()));
}

LieBasis basis_from(std::vector<Matrix> mats, Field field) {
    LieBasis b;
    b.channels = static_cast<int>(mats.size());
    b.dim = mats.front().rows();
    b.field = field;
    b.mats = std::move(mats);
    b.validate();
    return b;
}

} // namespace

Matrix so2_generator() {
    return real_entries(2, {0, -1, 1, 0});
}

Matrix xy_rotation_generator(double angle) {
    Matrix m = real_entries(3, {0, -1, 0, 1, 0, 0, 0, 0, 0});
    m *= angle;
    return m;
}

LieBasis so3_basis() {
    return basis_from({real_entries(3, {0, 0, 0, 0, 0, -1, 0, 1, 0}),
                       real_entries(3, {0, 0, 1, 0, 0, 0, -1, 0, 0}),
                       real_entries(3, {0, -1, 0, 1, 0, 0, 0, 0, 0})},
                      Field::Real);
}

LieBasis so13_basis() {
    // boosts along x, y, z (symmetric), then spatial rotations (skew)
    return basis_from({real_entries(4, {0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
                       real_entries(4, {0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0}),
                       real_entries(4, {0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0}),
                       real_entries(4, {0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0}),
                       real_entries(4, {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0}),
                       real_entries(4, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0})},
                      Field::Real);
}

LieBasis su2_basis() {
    Matrix u1(2, 2, Field::Complex);
    u1.set(0, 1, -1.0);
    u1.set(1, 0, 1.0);
    Matrix u2(2, 2, Field::Complex);
    u2.set(0, 0, {0.0, 1.0});
    u2.set(1, 1, {0.0, -1.0});
    Matrix u3(2, 2, Field::Complex);
    u3.set(0, 1, {0.0, 1.0});
    u3.set(1, 0, {0.0, 1.0});
    return basis_from({u1, u2, u3}, Field::Complex);
}

Matrix partial_permutation_generator() {
    // principal log of the 3-cycle (123) acting on the first three axes
    const double c = 2.0 * M_PI / (3.0 * std::sqrt(3.0));
    Matrix m(5, 5);
    const double k[3][3] = {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.re(i, j) = c * k[i][j];
    return m;
}

Matrix minkowski_metric() {
    Matrix m = Matrix::identity(4);
    m.re(1, 1) = m.re(2, 2) = m.re(3, 3) = -1.0;
    return m;
}

} // namespace groups
} // namespace liegan
