#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "liegan/groups.hpp"
#include "liegan/losses.hpp"

using namespace liegan;

TEST_CASE("uninformative discriminator: closed-form losses") {
    std::vector<double> half(8, 0.5);
    const auto [d_loss, g_loss] = gan_losses(half, half);
    CHECK(d_loss == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(g_loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("perfect discriminator limit collapses d_loss to the clamp floor") {
    std::vector<double> real(4, 1.0);
    std::vector<double> fake(4, 0.0);
    const auto [d_loss, g_loss] = gan_losses(real, fake);
    CHECK(d_loss == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(d_loss > 0.0); // clamped, not exactly zero
    CHECK(g_loss == doctest::Approx(-std::log(kProbClamp)).epsilon(1e-9));
}

TEST_CASE("losses match an independent scalar re-evaluation (formula oracle)") {
    RandomStream rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> real(16), fake(16);
        for (double& v : real) v = rng.uniform(0.01, 0.99);
        for (double& v : fake) v = rng.uniform(0.01, 0.99);
        const auto [d_loss, g_loss] = gan_losses(real, fake);

        // direct transcription of the formulas, summed in a different order
        long double d = 0.0L, g = 0.0L;
        for (int i = 15; i >= 0; --i) {
            d += std::log(real[static_cast<std::size_t>(i)]) +
                 std::log1p(-fake[static_cast<std::size_t>(i)]);
            g += std::log(fake[static_cast<std::size_t>(i)]);
        }
        CHECK(std::abs(d_loss - static_cast<double>(-d / 16.0L)) <= 1e-12);
        CHECK(std::abs(g_loss - static_cast<double>(-g / 16.0L)) <= 1e-12);
    }
}

TEST_CASE("empty batches are rejected") {
    std::vector<double> some(3, 0.5), none;
    CHECK_THROWS_AS((void)gan_losses(none, some), std::domain_error);
    CHECK_THROWS_AS((void)gan_losses(some, none), std::domain_error);
}

TEST_CASE("reg_loss examples") {
    RandomStream rng(2);
    const Matrix x = test_helpers::random_matrix(rng, 4, 1);
    const Matrix y = test_helpers::random_matrix(rng, 2, 1);
    CHECK(reg_loss(x, y, x, y) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reg_loss(x, y, -x, -y) == doctest::Approx(-1.0).epsilon(1e-12));

    // quarter-turned 2D input with zero-padding output
    Matrix e1(2, 1), e2(2, 1), zero(1, 1);
    e1.re(0, 0) = 1.0;
    e2.re(1, 0) = 1.0;
    CHECK(reg_loss(e1, zero, e2, zero) == doctest::Approx(0.0));

    Matrix z4(4, 1), z2(2, 1);
    CHECK_THROWS_AS((void)reg_loss(z4, z2, z4, z2), UndefinedSimilarityError);
}

TEST_CASE("chreg_loss examples") {
    RandomStream rng(3);
    LieBasis single = LieBasis::random_init(1, 3, Field::Real, rng);
    CHECK(chreg_loss(single) == 0.0);

    LieBasis parallel = LieBasis::random_init(1, 3, Field::Real, rng);
    parallel.channels = 2;
    parallel.mats.push_back(3.0 * parallel.mats[0]);
    CHECK(chreg_loss(parallel) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(chreg_loss(groups::so3_basis()) == doctest::Approx(0.0));

    LieBasis with_zero = LieBasis::random_init(2, 3, Field::Real, rng);
    with_zero.mats[1] = Matrix(3, 3);
    CHECK_THROWS_AS((void)chreg_loss(with_zero), UndefinedSimilarityError);
}

TEST_CASE("concat_cols widens mixed fields") {
    Matrix r(2, 1);
    r.re(0, 0) = 1.0;
    Matrix c(1, 1, Field::Complex);
    c.set(0, 0, {0.0, 2.0});
    const Matrix joined = concat_cols(r, c);
    CHECK(joined.is_complex());
    CHECK(joined.rows() == 3);
    CHECK(joined.at(0, 0) == std::complex<double>(1.0, 0.0));
    CHECK(joined.at(2, 0) == std::complex<double>(0.0, 2.0));
}
