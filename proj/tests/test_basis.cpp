#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "liegan/basis.hpp"
#include "liegan/groups.hpp"
#include "liegan/matexp.hpp"

using namespace liegan;

TEST_CASE("coefficient distribution validation") {
    CHECK_THROWS_AS(CoefficientDistribution::gaussian(2, -1.0).validate(2), std::domain_error);
    CHECK_THROWS_AS(CoefficientDistribution::gaussian(2, 1.0).validate(3), ShapeError);
    CHECK_THROWS_AS(CoefficientDistribution::uniform_int_grid(5, 2).validate(1), std::domain_error);
    // grids must contain zero so the identity is reachable
    CHECK_THROWS_AS(CoefficientDistribution::uniform_int_grid(1, 5).validate(1), std::domain_error);
    CHECK_NOTHROW(CoefficientDistribution::uniform_int_grid(-10, 10).validate(1));
}

TEST_CASE("gaussian draws: degenerate scale collapses to zero") {
    RandomStream rng(1);
    const auto dist = CoefficientDistribution::gaussian(3, 1e-300);
    for (const auto& w : sample_coefficients(dist, 3, 50, rng))
        for (double v : w) CHECK(std::abs(v) < 1e-290);
}

TEST_CASE("grid draws stay on the integer grid") {
    RandomStream rng(2);
    const auto dist = CoefficientDistribution::uniform_int_grid(-10, 10);
    for (const auto& w : sample_coefficients(dist, 2, 500, rng))
        for (double v : w) {
            CHECK(v == std::floor(v));
            CHECK(v >= -10.0);
            CHECK(v <= 10.0);
        }
}

TEST_CASE("gaussian draws: seeded Monte-Carlo moments") {
    RandomStream rng(3);
    const auto dist = CoefficientDistribution::gaussian(1, 1.0);
    const auto draws = sample_coefficients(dist, 1, 100000, rng);
    double mean = 0.0;
    for (const auto& w : draws) mean += w[0];
    mean /= static_cast<double>(draws.size());
    double var = 0.0;
    for (const auto& w : draws) var += (w[0] - mean) * (w[0] - mean);
    var /= static_cast<double>(draws.size());
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 0.02);
}

TEST_CASE("group element: zero coefficients give the identity") {
    RandomStream rng(4);
    const LieBasis b = LieBasis::random_init(3, 4, Field::Real, rng);
    const GroupSample s = sample_group_element(b, std::array{0.0, 0.0, 0.0});
    CHECK(max_abs_diff(s.g, Matrix::identity(4)) == 0.0);
}

TEST_CASE("group element: rotation by pi is minus identity") {
    LieBasis b;
    b.channels = 1;
    b.dim = 2;
    b.mats = {groups::so2_generator()};
    const GroupSample s = sample_group_element(b, std::array{M_PI});
    CHECK(max_abs_diff(s.g, -Matrix::identity(2)) < 1e-12);
}

TEST_CASE("group element determinant oracle (property)") {
    RandomStream rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const Field f = trial % 3 == 0 ? Field::Complex : Field::Real;
        const LieBasis b = LieBasis::random_init(2, 4, f, rng, BasisStructure::Dense, 0, 0.4);
        std::array<double, 2> w{rng.gauss(), rng.gauss()};
        const GroupSample s = sample_group_element(b, w);
        Matrix a(4, 4, f);
        for (int c = 0; c < 2; ++c) a += w[static_cast<std::size_t>(c)] * b.mats[static_cast<std::size_t>(c)];
        CHECK(std::abs(determinant(s.g) - std::exp(trace(a))) <= 1e-9);
    }
}

TEST_CASE("apply_transform: identity leaves samples unchanged") {
    RandomStream rng(6);
    const RepresentationSpec rep = RepresentationSpec::equivariant(2, 1);
    GroupSample id{Matrix::identity(3), {0.0}};
    const Matrix x = test_helpers::random_matrix(rng, 6, 1);
    const Matrix y = test_helpers::random_matrix(rng, 3, 1);
    const auto [xt, yt] = apply_transform(id, rep, x, y);
    CHECK(max_abs_diff(xt, x) == 0.0);
    CHECK(max_abs_diff(yt, y) == 0.0);
}

TEST_CASE("apply_transform: per-block rotation") {
    const Matrix rot = mat_exp((M_PI / 2.0) * groups::so2_generator());
    GroupSample s{rot, {M_PI / 2.0}};
    const RepresentationSpec rep = RepresentationSpec::invariant(2);
    Matrix x(4, 1);
    x.re(0, 0) = 1.0; // block 1: (1, 0)
    x.re(3, 0) = 1.0; // block 2: (0, 1)
    Matrix y(1, 1);
    y.re(0, 0) = 42.0;
    const auto [xt, yt] = apply_transform(s, rep, x, y);
    Matrix expect(4, 1);
    expect.re(1, 0) = 1.0;  // (0, 1)
    expect.re(2, 0) = -1.0; // (-1, 0)
    CHECK(max_abs_diff(xt, expect) < 1e-14);
    CHECK(yt.re(0, 0) == 42.0);
}

TEST_CASE("apply_transform: trivial output never changes y") {
    RandomStream rng(7);
    const LieBasis b = LieBasis::random_init(1, 3, Field::Real, rng);
    const RepresentationSpec rep = RepresentationSpec::invariant(1);
    for (int trial = 0; trial < 100; ++trial) {
        const GroupSample s = sample_group_element(b, std::array{rng.gauss()});
        const Matrix x = test_helpers::random_matrix(rng, 3, 1);
        const Matrix y = test_helpers::random_matrix(rng, 2, 1);
        const auto [xt, yt] = apply_transform(s, rep, x, y);
        CHECK(max_abs_diff(yt, y) == 0.0);
    }
}

TEST_CASE("composition property: applying g2 after g1 equals g2*g1 (property)") {
    RandomStream rng(8);
    for (int trial = 0; trial < 25; ++trial) {
        const LieBasis b = LieBasis::random_init(2, 3, Field::Real, rng, BasisStructure::Dense, 0, 0.5);
        const GroupSample g1 = sample_group_element(b, std::array{rng.gauss(), rng.gauss()});
        const GroupSample g2 = sample_group_element(b, std::array{rng.gauss(), rng.gauss()});
        const RepresentationSpec rep = RepresentationSpec::equivariant(2, 1);
        const Matrix x = test_helpers::random_matrix(rng, 6, 1);
        const Matrix y = test_helpers::random_matrix(rng, 3, 1);
        const auto [x1, y1] = apply_transform(g1, rep, x, y);
        const auto [x12, y12] = apply_transform(g2, rep, x1, y1);
        GroupSample prod{g2.g * g1.g, {}};
        const auto [xp, yp] = apply_transform(prod, rep, x, y);
        CHECK(max_abs_diff(x12, xp) <= 1e-10);
        CHECK(max_abs_diff(y12, yp) <= 1e-10);
    }
}

TEST_CASE("block structure: enforcement and validation") {
    RandomStream rng(9);
    LieBasis b = LieBasis::random_init(1, 4, Field::Real, rng, BasisStructure::BlockDiagRepeat, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i / 2 != j / 2) CHECK(b.mats[0].re(i, j) == 0.0);
    CHECK_NOTHROW(b.validate());

    b.mats[0].re(0, 3) = 0.5; // off-block entry
    CHECK_THROWS_AS(b.validate(), ShapeError);
    b.enforce_structure();
    CHECK(b.mats[0].re(0, 3) == 0.0);
    CHECK_NOTHROW(b.validate());

    LieBasis bad = b;
    bad.block_size = 3; // 4 % 3 != 0
    CHECK_THROWS_AS(bad.validate(), ShapeError);
}

TEST_CASE("integer-grid orbit of the C_k generator is closed under products") {
    // ground-truth C_7 generator at the discrete angle 2*pi/7; the grid
    // [-10, 10] spans 21 = 3*7 steps, so exp(21 * L) is the identity
    const int k = 7;
    const Matrix l = groups::xy_rotation_generator(2.0 * M_PI / k);
    CHECK(max_abs_diff(mat_exp(21.0 * l), Matrix::identity(3)) < 1e-9);

    std::vector<Matrix> orbit;
    for (long j = -10; j <= 10; ++j) orbit.push_back(mat_exp(static_cast<double>(j) * l));
    RandomStream rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        const auto i1 = static_cast<std::size_t>(rng.uniform_int(0, 20));
        const auto i2 = static_cast<std::size_t>(rng.uniform_int(0, 20));
        const Matrix prod = orbit[i1] * orbit[i2];
        double best = 1e300;
        for (const Matrix& member : orbit) best = std::min(best, max_abs_diff(prod, member));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("normalized basis has unit channels") {
    RandomStream rng(11);
    LieBasis b = LieBasis::random_init(3, 3, Field::Real, rng);
    const LieBasis n = b.normalized();
    for (const Matrix& m : n.mats) CHECK(frobenius_norm(m) == doctest::Approx(1.0).epsilon(1e-12));
}
