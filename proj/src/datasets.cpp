#include "liegan/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "liegan/groups.hpp"
#include "liegan/matexp.hpp"
#include "liegan/rng.hpp"

namespace liegan {

const char* task_name(TaskKind t) {
    switch (t) {
        case TaskKind::Regression: return "regression";
        case TaskKind::Classification: return "classification";
        case TaskKind::Trajectory: return "trajectory";
    }
    return "?";
}

TaskKind task_from_name(const std::string& name) {
    if (name == "regression") return TaskKind::Regression;
    if (name == "classification") return TaskKind::Classification;
    if (name == "trajectory") return TaskKind::Trajectory;
    throw std::domain_error("unknown task kind: " + name);
}

long Dataset::count() const {
    return x_width() == 0 ? 0 : static_cast<long>(xs.size()) / x_width();
}

Matrix Dataset::x_col(long i) const {
    Matrix out(n, 1, field);
    const double* p = xs.data() + static_cast<std::size_t>(i) * x_width();
    if (field == Field::Complex) {
        for (int j = 0; j < n; ++j) out.set(j, 0, {p[2 * j], p[2 * j + 1]});
    } else {
        for (int j = 0; j < n; ++j) out.re(j, 0) = p[j];
    }
    return out;
}

Matrix Dataset::y_col(long i) const {
    if (task == TaskKind::Classification) {
        Matrix out(1, 1);
        out.re(0, 0) = ys[static_cast<std::size_t>(i)];
        return out;
    }
    Matrix out(m, 1, field);
    const double* p = ys.data() + static_cast<std::size_t>(i) * y_width();
    if (field == Field::Complex) {
        for (int j = 0; j < m; ++j) out.set(j, 0, {p[2 * j], p[2 * j + 1]});
    } else {
        for (int j = 0; j < m; ++j) out.re(j, 0) = p[j];
    }
    return out;
}

int Dataset::y_class(long i) const {
    if (task != TaskKind::Classification) throw std::domain_error("y_class: not a classification dataset");
    return static_cast<int>(ys[static_cast<std::size_t>(i) * y_width()]);
}

void Dataset::push_sample(const Matrix& x, const Matrix& y) {
    if (x.rows() != n || x.cols() != 1 || y.cols() != 1)
        throw ShapeError("push_sample: sample dims do not match dataset");
    if (task == TaskKind::Classification) {
        if (y.rows() != 1 || y.is_complex())
            throw ShapeError("push_sample: class id must be a real 1x1");
        if (field == Field::Complex) {
            for (int j = 0; j < n; ++j) {
                xs.push_back(x.re(j, 0));
                xs.push_back(x.im(j, 0));
            }
        } else {
            for (int j = 0; j < n; ++j) xs.push_back(x.re(j, 0));
        }
        ys.push_back(y.re(0, 0));
        return;
    }
    if (y.rows() != m) throw ShapeError("push_sample: sample dims do not match dataset");
    if (field == Field::Complex) {
        for (int j = 0; j < n; ++j) {
            xs.push_back(x.re(j, 0));
            xs.push_back(x.im(j, 0));
        }
        for (int j = 0; j < m; ++j) {
            ys.push_back(y.re(j, 0));
            ys.push_back(y.im(j, 0));
        }
    } else {
        for (int j = 0; j < n; ++j) xs.push_back(x.re(j, 0));
        for (int j = 0; j < m; ++j) ys.push_back(y.re(j, 0));
    }
}

void Dataset::validate_shape() const {
    if (n <= 0 || m <= 0) throw ShapeError("Dataset: n and m must be positive");
    if (xs.size() % x_width() != 0 || ys.size() % y_width() != 0)
        throw ShapeError("Dataset: storage not a whole number of samples");
    if (static_cast<long>(ys.size()) / y_width() != count())
        throw ShapeError("Dataset: x/y sample counts differ");
    if (task == TaskKind::Trajectory && (n != t_in * step_dim || m != t_out * step_dim))
        throw ShapeError("Dataset: trajectory dims inconsistent with t_in/t_out/step_dim");
    for (double v : xs)
        if (!std::isfinite(v)) throw std::domain_error("Dataset: non-finite input value");
    for (double v : ys)
        if (!std::isfinite(v)) throw std::domain_error("Dataset: non-finite target value");
}

namespace {

// Post-generation validation: the declared symmetry must hold numerically on
// the generated samples. These mirror the construction; a failure means the
// generator itself is broken.
void check(bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("dataset self-check failed: ") + what);
}

double two_body_energy(std::span<const double> step, double mass, double coupling) {
    const double p1 = step[2] * step[2] + step[3] * step[3];
    const double p2 = step[6] * step[6] + step[7] * step[7];
    const double dx = step[0] - step[4];
    const double dy = step[1] - step[5];
    const double r = std::sqrt(dx * dx + dy * dy);
    return (p1 + p2) / (2.0 * mass) - coupling * mass * mass / r;
}

} // namespace

Dataset gen_two_body(long count, std::uint64_t seed, const TwoBodyConfig& cfg) {
    if (count < 1) throw std::domain_error("gen_two_body: count must be >= 1");
    if (!(cfg.r_lo > 0.0) || !(cfg.r_hi >= cfg.r_lo))
        throw std::domain_error("gen_two_body: radius range must be positive");
    Dataset ds;
    ds.task = TaskKind::Trajectory;
    ds.field = Field::Real;
    ds.t_in = cfg.t_in;
    ds.t_out = cfg.t_out;
    ds.step_dim = 8;
    ds.n = cfg.t_in * 8;
    ds.m = cfg.t_out * 8;
    ds.xs.reserve(static_cast<std::size_t>(count) * ds.n);
    ds.ys.reserve(static_cast<std::size_t>(count) * ds.m);

    RandomStream rng(seed);
    const int steps = cfg.t_in + cfg.t_out;
    for (long s = 0; s < count; ++s) {
        const double r = rng.uniform(cfg.r_lo, cfg.r_hi);
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        // circular orbit about the origin: omega^2 = coupling*m / (4 r^3)
        const double omega = std::sqrt(cfg.coupling * cfg.mass / (4.0 * r * r * r));
        for (int t = 0; t < steps; ++t) {
            const double a = omega * cfg.dt * t + phi;
            const double c = std::cos(a), si = std::sin(a);
            const double qx = r * c, qy = r * si;
            const double px = -cfg.mass * r * omega * si, py = cfg.mass * r * omega * c;
            auto& dst = (t < cfg.t_in) ? ds.xs : ds.ys;
            dst.insert(dst.end(), {qx, qy, px, py, -qx, -qy, -px, -py});
        }
    }
    ds.validate_shape();

    // self-check on a bounded prefix: exact COM and energy conservation
    const long probe = std::min<long>(count, 64);
    for (long s = 0; s < probe; ++s) {
        const double* x = ds.xs.data() + static_cast<std::size_t>(s) * ds.n;
        const double* y = ds.ys.data() + static_cast<std::size_t>(s) * ds.m;
        const double e0 = two_body_energy({x, 8}, cfg.mass, cfg.coupling);
        for (int t = 0; t < steps; ++t) {
            const double* step = t < cfg.t_in ? x + 8 * t : y + 8 * (t - cfg.t_in);
            check(step[0] + step[4] == 0.0 && step[1] + step[5] == 0.0, "two_body center of mass");
            check(step[2] + step[6] == 0.0 && step[3] + step[7] == 0.0, "two_body total momentum");
            check(std::abs(two_body_energy({step, 8}, cfg.mass, cfg.coupling) - e0) < 1e-10,
                  "two_body energy drift");
        }
    }
    return ds;
}

namespace {

double discrete_rotation_target(int k, double x, double y, double z) {
    double angle = std::atan2(y, x);
    if (angle < 0.0) angle += 2.0 * M_PI;
    const double sector = 2.0 * M_PI / static_cast<double>(k);
    return z / (1.0 + std::fmod(angle, sector));
}

} // namespace

Dataset gen_discrete_rotation(int k, long count, std::uint64_t seed) {
    if (k < 2) throw std::domain_error("gen_discrete_rotation: k must be >= 2");
    if (count < 1) throw std::domain_error("gen_discrete_rotation: count must be >= 1");
    Dataset ds;
    ds.task = TaskKind::Regression;
    ds.n = 3;
    ds.m = 1;
    RandomStream rng(seed);
    for (long s = 0; s < count; ++s) {
        double x = rng.gauss();
        while (std::abs(x) < 1e-9) x = rng.gauss();
        const double y = rng.gauss();
        const double z = rng.gauss();
        ds.xs.insert(ds.xs.end(), {x, y, z});
        ds.ys.push_back(discrete_rotation_target(k, x, y, z));
    }
    ds.validate_shape();

    const double sector = 2.0 * M_PI / static_cast<double>(k);
    const long probe = std::min<long>(count, 64);
    for (long s = 0; s < probe; ++s) {
        const double* p = ds.xs.data() + 3 * s;
        const double xr = p[0] * std::cos(sector) - p[1] * std::sin(sector);
        const double yr = p[0] * std::sin(sector) + p[1] * std::cos(sector);
        check(std::abs(discrete_rotation_target(k, xr, yr, p[2]) - ds.ys[static_cast<std::size_t>(s)]) <
                  1e-9,
              "discrete_rotation invariance");
    }
    return ds;
}

Dataset gen_partial_permutation(long count, std::uint64_t seed) {
    if (count < 1) throw std::domain_error("gen_partial_permutation: count must be >= 1");
    Dataset ds;
    ds.task = TaskKind::Regression;
    ds.n = 5;
    ds.m = 1;
    RandomStream rng(seed);
    for (long s = 0; s < count; ++s) {
        double v[5];
        for (double& e : v) e = rng.gauss();
        ds.xs.insert(ds.xs.end(), v, v + 5);
        ds.ys.push_back(v[0] + v[1] + v[2] + v[3] * v[3] - v[4] * v[4]);
    }
    ds.validate_shape();

    const long probe = std::min<long>(count, 64);
    for (long s = 0; s < probe; ++s) {
        const double* p = ds.xs.data() + 5 * s;
        const double swapped = p[1] + p[2] + p[0] + p[3] * p[3] - p[4] * p[4];
        check(std::abs(swapped - ds.ys[static_cast<std::size_t>(s)]) < 1e-12,
              "partial_permutation invariance");
    }
    return ds;
}

Dataset gen_su2(long count, std::uint64_t seed) {
    if (count < 1) throw std::domain_error("gen_su2: count must be >= 1");
    Dataset ds;
    ds.task = TaskKind::Regression;
    ds.field = Field::Complex;
    ds.n = 4; // x in C^2 stacked over y in C^2
    ds.m = 1;
    RandomStream rng(seed);
    for (long s = 0; s < count; ++s) {
        std::complex<double> v[4];
        for (auto& e : v) e = {rng.gauss(), rng.gauss()};
        const std::complex<double> det = v[0] * v[3] - v[1] * v[2]; // x1 y2 - x2 y1
        const std::complex<double> f = 0.5 * det * det + det;
        for (const auto& e : v) ds.xs.insert(ds.xs.end(), {e.real(), e.imag()});
        ds.ys.insert(ds.ys.end(), {f.real(), f.imag()});
    }
    ds.validate_shape();

    // invariance self-check under a fixed unit-determinant transform
    {
        const LieBasis su2 = groups::su2_basis();
        Matrix a(2, 2, Field::Complex);
        const double w[3] = {0.37, -0.81, 0.52};
        for (int c = 0; c < 3; ++c) a += w[c] * su2.mats[static_cast<std::size_t>(c)];
        const Matrix g = mat_exp(a);
        const long probe = std::min<long>(count, 32);
        for (long s = 0; s < probe; ++s) {
            const Matrix x = ds.x_col(s);
            const Matrix gx = apply_block_action(g, x, 2);
            const std::complex<double> det =
                gx.at(0, 0) * gx.at(3, 0) - gx.at(1, 0) * gx.at(2, 0);
            const std::complex<double> f = 0.5 * det * det + det;
            check(std::abs(f - ds.y_col(s).at(0, 0)) < 1e-9, "su2 invariance");
        }
    }
    return ds;
}

Dataset gen_lorentz_invariant(long count, std::uint64_t seed) {
    if (count < 1) throw std::domain_error("gen_lorentz_invariant: count must be >= 1");
    Dataset ds;
    ds.task = TaskKind::Regression;
    ds.n = 4;
    ds.m = 1;
    RandomStream rng(seed);
    for (long s = 0; s < count; ++s) {
        double v[4];
        for (double& e : v) e = rng.gauss();
        ds.xs.insert(ds.xs.end(), v, v + 4);
        ds.ys.push_back(v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3]);
    }
    ds.validate_shape();

    // invariance self-check under a fixed boost+rotation combination
    {
        const LieBasis so13 = groups::so13_basis();
        Matrix a(4, 4);
        const double w[6] = {0.21, -0.13, 0.09, 0.44, -0.31, 0.27};
        for (int c = 0; c < 6; ++c) a += w[c] * so13.mats[static_cast<std::size_t>(c)];
        const Matrix g = mat_exp(a);
        const Matrix eta = groups::minkowski_metric();
        const long probe = std::min<long>(count, 32);
        for (long s = 0; s < probe; ++s) {
            const Matrix gx = g * ds.x_col(s);
            const Matrix q = transpose(gx) * (eta * gx);
            check(std::abs(q.re(0, 0) - ds.ys[static_cast<std::size_t>(s)]) < 1e-8,
                  "lorentz invariance");
        }
    }
    return ds;
}

std::pair<Dataset, Dataset> angular_split(const Dataset& ds, double train_frac) {
    if (ds.task != TaskKind::Trajectory || ds.step_dim < 2)
        throw std::domain_error("angular_split: expects trajectory data");
    if (!(train_frac > 0.0 && train_frac < 1.0))
        throw std::domain_error("angular_split: train fraction must be in (0, 1)");
    std::vector<long> order(static_cast<std::size_t>(ds.count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](long a, long b) {
        const double* pa = ds.xs.data() + static_cast<std::size_t>(a) * ds.n;
        const double* pb = ds.xs.data() + static_cast<std::size_t>(b) * ds.n;
        return std::atan2(pa[1], pa[0]) < std::atan2(pb[1], pb[0]);
    });
    Dataset train = ds, test = ds;
    train.xs.clear();
    train.ys.clear();
    test.xs.clear();
    test.ys.clear();
    const long cut = static_cast<long>(static_cast<double>(ds.count()) * train_frac);
    for (long idx = 0; idx < ds.count(); ++idx) {
        Dataset& dst = idx < cut ? train : test;
        const long s = order[static_cast<std::size_t>(idx)];
        dst.xs.insert(dst.xs.end(), ds.xs.begin() + static_cast<std::size_t>(s) * ds.n,
                      ds.xs.begin() + static_cast<std::size_t>(s + 1) * ds.n);
        dst.ys.insert(dst.ys.end(), ds.ys.begin() + static_cast<std::size_t>(s) * ds.m,
                      ds.ys.begin() + static_cast<std::size_t>(s + 1) * ds.m);
    }
    return {std::move(train), std::move(test)};
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path.string());
    Dataset ds;
    ds.task = schema.task;
    ds.field = schema.field;
    ds.n = schema.n;
    ds.m = schema.m;
    ds.num_classes = schema.num_classes;
    ds.t_in = schema.t_in;
    ds.t_out = schema.t_out;
    ds.step_dim = schema.step_dim;
    const int width = ds.x_width() + ds.y_width();

    std::string line;
    long row = 0;
    bool skip_header = schema.has_header;
    while (std::getline(in, line)) {
        ++row;
        if (skip_header) {
            skip_header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(width));
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p < end) {
            const char* comma = std::find(p, end, ',');
            while (p < comma && (*p == ' ' || *p == '\t')) ++p;
            double v = 0.0;
            auto [next, ec] = std::from_chars(p, comma, v);
            if (ec != std::errc() )
                throw ParseError("load_csv: non-numeric cell '" + std::string(p, comma) + "'", row);
            while (next < comma && (*next == ' ' || *next == '\t' || *next == '\r')) ++next;
            if (next != comma)
                throw ParseError("load_csv: trailing characters in cell", row);
            vals.push_back(v);
            p = comma < end ? comma + 1 : end;
        }
        if (static_cast<int>(vals.size()) != width)
            throw ParseError("load_csv: expected " + std::to_string(width) + " values, found " +
                                 std::to_string(vals.size()),
                             row);
        ds.xs.insert(ds.xs.end(), vals.begin(), vals.begin() + ds.x_width());
        ds.ys.insert(ds.ys.end(), vals.begin() + ds.x_width(), vals.end());
        if (ds.task == TaskKind::Classification) {
            const double id = ds.ys.back();
            if (id != std::floor(id) || id < 0 ||
                (ds.num_classes > 0 && id >= static_cast<double>(ds.num_classes)))
                throw ParseError("load_csv: invalid class id", row);
        }
    }
    ds.validate_shape();
    return ds;
}

void save_csv(const std::filesystem::path& path, const Dataset& ds, bool header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open " + path.string());
    out.precision(17);
    const int xw = ds.x_width(), yw = ds.y_width();
    if (header) {
        for (int j = 0; j < xw; ++j) out << (j ? "," : "") << "x" << j;
        for (int j = 0; j < yw; ++j) out << ",y" << j;
        out << "\n";
    }
    for (long i = 0; i < ds.count(); ++i) {
        const double* x = ds.xs.data() + static_cast<std::size_t>(i) * xw;
        const double* y = ds.ys.data() + static_cast<std::size_t>(i) * yw;
        for (int j = 0; j < xw; ++j) out << (j ? "," : "") << x[j];
        for (int j = 0; j < yw; ++j) out << "," << y[j];
        out << "\n";
    }
    if (!out) throw std::runtime_error("save_csv: write failed for " + path.string());
}

} // namespace liegan
