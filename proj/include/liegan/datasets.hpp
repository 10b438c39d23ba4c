#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "liegan/matrix.hpp"

namespace liegan {

enum class TaskKind { Regression, Classification, Trajectory };

const char* task_name(TaskKind t);
TaskKind task_from_name(const std::string& name);

/// Labeled samples with declared task kind and scalar field. Values are
/// stored flat and row-major; complex entries are interleaved [re, im],
/// matching the CSV column layout.
struct Dataset {
    TaskKind task = TaskKind::Regression;
    Field field = Field::Real;
    int n = 0;
    int m = 0;
    int num_classes = 0;              // Classification only
    int t_in = 0, t_out = 0, step_dim = 0; // Trajectory only

    std::vector<double> xs; // count * n * (1 or 2)
    std::vector<double> ys; // count * m * (1 or 2); class ids for Classification

    long count() const;
    int x_width() const { return n * (field == Field::Complex ? 2 : 1); }
    /// Class ids occupy one real column regardless of field.
    int y_width() const {
        return task == TaskKind::Classification ? 1 : m * (field == Field::Complex ? 2 : 1);
    }

    /// Sample i as an n x 1 column (complex-aware).
    Matrix x_col(long i) const;
    /// Sample i's target as an m x 1 column; for Classification the id as a
    /// real 1x1.
    Matrix y_col(long i) const;
    int y_class(long i) const;

    void push_sample(const Matrix& x, const Matrix& y);
    void validate_shape() const;
};

struct TwoBodyConfig {
    double r_lo = 0.5;
    double r_hi = 1.5;
    int t_in = 5;
    int t_out = 5;
    double mass = 1.0;
    double dt = 0.1;
    double coupling = 1.0;
};

/// Closed-form circular two-body orbits about the center of mass; each sample
/// is t_in consecutive phase-space steps and the t_out-step continuation,
/// step layout [q1x, q1y, p1x, p1y, q2x, q2y, p2x, p2y].
Dataset gen_two_body(long count, std::uint64_t seed, const TwoBodyConfig& cfg = {});

/// f(x, y, z) = z / (1 + atan2(y, x) mod 2*pi/k); invariant to xy-rotations
/// by multiples of 2*pi/k. Inputs standard normal, resampled away from x = 0.
Dataset gen_discrete_rotation(int k, long count, std::uint64_t seed);

/// f(x) = x1 + x2 + x3 + x4^2 - x5^2; invariant to permutations of the first
/// three coordinates.
Dataset gen_partial_permutation(long count, std::uint64_t seed);

/// Complex task f(x, y) = (x1 y2 - x2 y1)^2 / 2 + (x1 y2 - x2 y1) with
/// x, y in C^2 stacked into a C^4 input; invariant under simultaneous
/// unit-determinant transforms of x and y.
Dataset gen_su2(long count, std::uint64_t seed);

/// y = x0^2 - x1^2 - x2^2 - x3^2 on standard-normal 4-vectors.
Dataset gen_lorentz_invariant(long count, std::uint64_t seed);

/// Split sorted by the polar angle of the first particle at the first step
/// (distribution-shift evaluation for trajectory data).
std::pair<Dataset, Dataset> angular_split(const Dataset& ds, double train_frac = 0.8);

struct CsvSchema {
    int n = 0;
    int m = 0;
    TaskKind task = TaskKind::Regression;
    Field field = Field::Real;
    int num_classes = 0;
    int t_in = 0, t_out = 0, step_dim = 0;
    bool has_header = false;
};

/// Comma-separated rows of width n + m (twice that for complex, re before im
/// per entry). Throws ParseError with the offending row number.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// 17-significant-digit CSV; optional header names columns x0..,y0..
void save_csv(const std::filesystem::path& path, const Dataset& ds, bool header = false);

} // namespace liegan
