#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "liegan/datasets.hpp"
#include "liegan/groups.hpp"
#include "liegan/matexp.hpp"

using namespace liegan;

namespace {

// independent target re-implementations (oracles the generators must match)
double rot_target(int k, double x, double y, double z) {
    double a = std::atan2(y, x);
    if (a < 0) a += 2.0 * M_PI;
    return z / (1.0 + std::fmod(a, 2.0 * M_PI / k));
}

double perm_target(const double* v) { return v[0] + v[1] + v[2] + v[3] * v[3] - v[4] * v[4]; }

std::complex<double> su2_target(std::complex<double> x1, std::complex<double> x2,
                                std::complex<double> y1, std::complex<double> y2) {
    const auto det = x1 * y2 - x2 * y1;
    return 0.5 * det * det + det;
}

double lorentz_target(const double* v) {
    return v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3];
}

} // namespace

TEST_CASE("two-body: center of mass and momentum vanish exactly") {
    const Dataset ds = gen_two_body(50, 11);
    CHECK(ds.n == 40);
    CHECK(ds.m == 40);
    for (long i = 0; i < ds.count(); ++i) {
        for (int t = 0; t < 10; ++t) {
            const double* step = (t < 5 ? ds.xs.data() + i * 40 + 8 * t : ds.ys.data() + i * 40 + 8 * (t - 5));
            CHECK(step[0] + step[4] == 0.0);
            CHECK(step[1] + step[5] == 0.0);
            CHECK(step[2] + step[6] == 0.0);
            CHECK(step[3] + step[7] == 0.0);
        }
    }
}

TEST_CASE("two-body: energy is conserved along each sample") {
    const Dataset ds = gen_two_body(20, 3);
    auto energy = [](const double* s) {
        const double kin = (s[2] * s[2] + s[3] * s[3] + s[6] * s[6] + s[7] * s[7]) / 2.0;
        const double dx = s[0] - s[4], dy = s[1] - s[5];
        return kin - 1.0 / std::sqrt(dx * dx + dy * dy);
    };
    for (long i = 0; i < ds.count(); ++i) {
        const double e0 = energy(ds.xs.data() + i * 40);
        for (int t = 0; t < 10; ++t) {
            const double* step =
                (t < 5 ? ds.xs.data() + i * 40 + 8 * t : ds.ys.data() + i * 40 + 8 * (t - 5));
            CHECK(std::abs(energy(step) - e0) <= 1e-10);
        }
    }
}

TEST_CASE("two-body: rotated samples are valid continuations (equivariance)") {
    const TwoBodyConfig cfg;
    const Dataset ds = gen_two_body(10, 17, cfg);
    RandomStream rng(18);
    for (long i = 0; i < ds.count(); ++i) {
        const double theta = rng.uniform(0.0, 2.0 * M_PI);
        const double c = std::cos(theta), s = std::sin(theta);
        // rotate every (pair) of the sample
        auto rotate_step = [&](const double* in, double* out) {
            for (int p = 0; p < 4; ++p) {
                out[2 * p] = c * in[2 * p] - s * in[2 * p + 1];
                out[2 * p + 1] = s * in[2 * p] + c * in[2 * p + 1];
            }
        };
        double rot[80];
        for (int t = 0; t < 5; ++t) rotate_step(ds.xs.data() + i * 40 + 8 * t, rot + 8 * t);
        for (int t = 0; t < 5; ++t) rotate_step(ds.ys.data() + i * 40 + 8 * t, rot + 40 + 8 * t);

        // regenerate the full trajectory from the rotated first step
        const double qx = rot[0], qy = rot[1];
        const double r = std::hypot(qx, qy);
        const double phi = std::atan2(qy, qx);
        const double omega = std::sqrt(1.0 / (4.0 * r * r * r));
        for (int t = 0; t < 10; ++t) {
            const double a = omega * cfg.dt * t + phi;
            const double* step = rot + 8 * t;
            CHECK(std::abs(step[0] - r * std::cos(a)) < 1e-9);
            CHECK(std::abs(step[1] - r * std::sin(a)) < 1e-9);
            CHECK(std::abs(step[2] + r * omega * std::sin(a)) < 1e-9);
            CHECK(std::abs(step[3] - r * omega * std::cos(a)) < 1e-9);
        }
    }
}

TEST_CASE("generators are pure functions of the seed") {
    const Dataset a = gen_two_body(25, 42);
    const Dataset b = gen_two_body(25, 42);
    CHECK(a.xs == b.xs);
    CHECK(a.ys == b.ys);
    const Dataset c = gen_two_body(25, 43);
    CHECK(a.xs != c.xs);

    const Dataset d1 = gen_discrete_rotation(7, 100, 5);
    const Dataset d2 = gen_discrete_rotation(7, 100, 5);
    CHECK(d1.xs == d2.xs);
    CHECK(d1.ys == d2.ys);
}

TEST_CASE("two-body rejects bad radii") {
    TwoBodyConfig cfg;
    cfg.r_lo = -1.0;
    CHECK_THROWS_AS((void)gen_two_body(5, 1, cfg), std::domain_error);
}

TEST_CASE("discrete rotation: values match the independent target formula") {
    CHECK(rot_target(7, 1.0, 0.0, 1.0) == 1.0); // zero angle: f = z
    const Dataset ds = gen_discrete_rotation(7, 200, 9);
    for (long i = 0; i < ds.count(); ++i) {
        const double* p = ds.xs.data() + 3 * i;
        CHECK(ds.ys[static_cast<std::size_t>(i)] ==
              doctest::Approx(rot_target(7, p[0], p[1], p[2])).epsilon(1e-15));
    }
}

TEST_CASE("discrete rotation: invariant under 2pi/k, broken at pi/k") {
    const int k = 7;
    const Dataset ds = gen_discrete_rotation(k, 100, 21);
    const double full = 2.0 * M_PI / k, half = M_PI / k;
    long broken = 0;
    for (long i = 0; i < ds.count(); ++i) {
        const double* p = ds.xs.data() + 3 * i;
        auto rotated = [&](double ang, int coord) {
            return coord == 0 ? p[0] * std::cos(ang) - p[1] * std::sin(ang)
                              : p[0] * std::sin(ang) + p[1] * std::cos(ang);
        };
        CHECK(std::abs(rot_target(k, rotated(full, 0), rotated(full, 1), p[2]) -
                       ds.ys[static_cast<std::size_t>(i)]) < 1e-9);
        if (std::abs(rot_target(k, rotated(half, 0), rotated(half, 1), p[2]) -
                     ds.ys[static_cast<std::size_t>(i)]) > 1e-6)
            ++broken;
    }
    CHECK(broken == 100); // the half-angle breaks invariance at every sampled point
}

TEST_CASE("partial permutation: formula, symmetry and antisymmetry") {
    const double probe[5] = {1, 2, 3, 0, 0};
    CHECK(perm_target(probe) == 6.0);

    const Dataset ds = gen_partial_permutation(100, 33);
    for (long i = 0; i < ds.count(); ++i) {
        const double* v = ds.xs.data() + 5 * i;
        CHECK(ds.ys[static_cast<std::size_t>(i)] == perm_target(v));
        const double permuted[5] = {v[2], v[0], v[1], v[3], v[4]};
        CHECK(perm_target(permuted) == doctest::Approx(ds.ys[static_cast<std::size_t>(i)]).epsilon(1e-14));
        if (std::abs(std::abs(v[3]) - std::abs(v[4])) > 1e-9) {
            const double swapped[5] = {v[0], v[1], v[2], v[4], v[3]};
            CHECK(perm_target(swapped) != ds.ys[static_cast<std::size_t>(i)]);
        }
    }
}

TEST_CASE("su2 task: unit determinant and vanishing cases") {
    CHECK(su2_target({1, 0}, {0, 0}, {0, 0}, {1, 0}) == std::complex<double>(1.5, 0.0));
    CHECK(su2_target({0.3, 1}, {2, -1}, {0.3, 1}, {2, -1}) == std::complex<double>(0.0, 0.0));

    const Dataset ds = gen_su2(50, 7);
    CHECK(ds.field == Field::Complex);
    CHECK(ds.n == 4);
    for (long i = 0; i < ds.count(); ++i) {
        const Matrix x = ds.x_col(i);
        const auto f = su2_target(x.at(0, 0), x.at(1, 0), x.at(2, 0), x.at(3, 0));
        CHECK(std::abs(f - ds.y_col(i).at(0, 0)) < 1e-12);
    }
}

TEST_CASE("su2 task: invariance under sampled group elements (oracle)") {
    const Dataset ds = gen_su2(20, 8);
    const LieBasis su2 = groups::su2_basis();
    RandomStream rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const long i = rng.uniform_int(0, ds.count() - 1);
        Matrix a(2, 2, Field::Complex);
        for (int c = 0; c < 3; ++c) a += rng.gauss() * su2.mats[static_cast<std::size_t>(c)];
        const Matrix g = mat_exp(a);
        const Matrix gx = apply_block_action(g, ds.x_col(i), 2);
        const auto f = su2_target(gx.at(0, 0), gx.at(1, 0), gx.at(2, 0), gx.at(3, 0));
        CHECK(std::abs(f - ds.y_col(i).at(0, 0)) <= 1e-9);
    }
}

TEST_CASE("lorentz task: light cone values and so(1,3) invariance (oracle)") {
    const double timelike[4] = {1, 0, 0, 0};
    const double lightlike[4] = {1, 1, 0, 0};
    CHECK(lorentz_target(timelike) == 1.0);
    CHECK(lorentz_target(lightlike) == 0.0);

    const Dataset ds = gen_lorentz_invariant(30, 4);
    for (long i = 0; i < ds.count(); ++i)
        CHECK(ds.ys[static_cast<std::size_t>(i)] == lorentz_target(ds.xs.data() + 4 * i));

    const LieBasis so13 = groups::so13_basis();
    RandomStream rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const long i = rng.uniform_int(0, ds.count() - 1);
        Matrix a(4, 4);
        for (int c = 0; c < 6; ++c) a += (0.5 * rng.gauss()) * so13.mats[static_cast<std::size_t>(c)];
        const Matrix gx = mat_exp(a) * ds.x_col(i);
        double v[4];
        for (int j = 0; j < 4; ++j) v[j] = gx.re(j, 0);
        CHECK(std::abs(lorentz_target(v) - ds.ys[static_cast<std::size_t>(i)]) <= 1e-8);
    }
}

TEST_CASE("angular split orders by polar angle") {
    const Dataset ds = gen_two_body(100, 55);
    const auto [train, test] = angular_split(ds, 0.8);
    CHECK(train.count() == 80);
    CHECK(test.count() == 20);
    auto max_angle = [](const Dataset& d) {
        double best = -10.0;
        for (long i = 0; i < d.count(); ++i)
            best = std::max(best, std::atan2(d.xs[static_cast<std::size_t>(i) * d.n + 1],
                                             d.xs[static_cast<std::size_t>(i) * d.n]));
        return best;
    };
    auto min_angle = [](const Dataset& d) {
        double best = 10.0;
        for (long i = 0; i < d.count(); ++i)
            best = std::min(best, std::atan2(d.xs[static_cast<std::size_t>(i) * d.n + 1],
                                             d.xs[static_cast<std::size_t>(i) * d.n]));
        return best;
    };
    CHECK(max_angle(train) <= min_angle(test));
}

TEST_CASE("csv round trip is bit exact") {
    const Dataset ds = gen_discrete_rotation(5, 37, 12);
    const auto path = std::filesystem::temp_directory_path() / "liegan_test_roundtrip.csv";
    save_csv(path, ds);
    CsvSchema schema;
    schema.n = 3;
    schema.m = 1;
    const Dataset back = load_csv(path, schema);
    CHECK(back.xs == ds.xs);
    CHECK(back.ys == ds.ys);

    // second write of the loaded data is byte-identical
    const auto path2 = std::filesystem::temp_directory_path() / "liegan_test_roundtrip2.csv";
    save_csv(path2, back);
    std::ifstream f1(path), f2(path2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("csv parse errors carry the row number") {
    const auto path = std::filesystem::temp_directory_path() / "liegan_test_bad.csv";
    {
        std::ofstream out(path);
        out << "1,2,3,4\n1,2,3\n";
    }
    CsvSchema schema;
    schema.n = 3;
    schema.m = 1;
    try {
        (void)load_csv(path, schema);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
    }
    {
        std::ofstream out(path);
        out << "1,2,zzz,4\n";
    }
    try {
        (void)load_csv(path, schema);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 1);
    }
    std::filesystem::remove(path);
}

TEST_CASE("complex csv written by an independent serializer loads correctly") {
    const auto path = std::filesystem::temp_directory_path() / "liegan_test_complex.csv";
    {
        std::ofstream out(path);
        out.precision(17);
        // two samples, n=2 complex, m=1 complex: re,im per entry
        out << "1,2,3,4,5,6\n";
        out << "-1,0.5,0,0,2.25,-7\n";
    }
    CsvSchema schema;
    schema.n = 2;
    schema.m = 1;
    schema.field = Field::Complex;
    const Dataset ds = load_csv(path, schema);
    CHECK(ds.count() == 2);
    CHECK(ds.x_col(0).at(0, 0) == std::complex<double>(1, 2));
    CHECK(ds.x_col(0).at(1, 0) == std::complex<double>(3, 4));
    CHECK(ds.y_col(0).at(0, 0) == std::complex<double>(5, 6));
    CHECK(ds.x_col(1).at(0, 0) == std::complex<double>(-1, 0.5));
    CHECK(ds.y_col(1).at(0, 0) == std::complex<double>(2.25, -7));
    std::filesystem::remove(path);
}

TEST_CASE("csv with header flag") {
    const auto path = std::filesystem::temp_directory_path() / "liegan_test_header.csv";
    const Dataset ds = gen_partial_permutation(4, 3);
    save_csv(path, ds, true);
    CsvSchema schema;
    schema.n = 5;
    schema.m = 1;
    schema.has_header = true;
    const Dataset back = load_csv(path, schema);
    CHECK(back.xs == ds.xs);
    std::filesystem::remove(path);
}

TEST_CASE("classification ids are validated on load") {
    const auto path = std::filesystem::temp_directory_path() / "liegan_test_cls.csv";
    {
        std::ofstream out(path);
        out << "0.5,1\n0.25,2\n";
    }
    CsvSchema schema;
    schema.n = 1;
    schema.m = 1;
    schema.task = TaskKind::Classification;
    schema.num_classes = 2;
    CHECK_THROWS_AS((void)load_csv(path, schema), ParseError); // id 2 out of range
    schema.num_classes = 3;
    const Dataset ok = load_csv(path, schema);
    CHECK(ok.y_class(1) == 2);
    std::filesystem::remove(path);
}
