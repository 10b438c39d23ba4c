#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "liegan/errors.hpp"

namespace liegan {

class RandomStream;

enum class Field { Real, Complex };

inline const char* field_name(Field f) { return f == Field::Real ? "real" : "complex"; }

/// Dense row-major matrix over real or complex scalars.
///
/// Complex values are stored as separate real and imaginary planes; a real
/// matrix carries no imaginary plane at all, so real-field arithmetic pays
/// no complex overhead. The field is fixed at construction and mixed-field
/// arithmetic throws ShapeError.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, Field field = Field::Real);

    static Matrix identity(int n, Field field = Field::Real);
    static Matrix zeros_like(const Matrix& other);
    /// Row-major real entries.
    static Matrix from_rows(int rows, int cols, std::span<const double> entries);
    /// i.i.d. N(0, stddev^2) entries (independent real and imaginary parts).
    static Matrix random_gaussian(RandomStream& rng, int rows, int cols, Field field, double stddev);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Field field() const { return field_; }
    bool is_complex() const { return field_ == Field::Complex; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    std::size_t size() const { return re_.size(); }

    double& re(int i, int j) { return re_[idx(i, j)]; }
    double re(int i, int j) const { return re_[idx(i, j)]; }
    double& im(int i, int j) { return im_[idx(i, j)]; }
    double im(int i, int j) const { return is_complex() ? im_[idx(i, j)] : 0.0; }

    std::complex<double> at(int i, int j) const { return {re(i, j), im(i, j)}; }
    void set(int i, int j, std::complex<double> v);

    std::span<double> re_data() { return re_; }
    std::span<const double> re_data() const { return re_; }
    std::span<double> im_data() { return im_; }
    std::span<const double> im_data() const { return im_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && field_ == other.field_;
    }
    bool all_finite() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }

    int rows_ = 0;
    int cols_ = 0;
    Field field_ = Field::Real;
    std::vector<double> re_;
    std::vector<double> im_; // empty for the real field
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b); // matrix product
Matrix operator*(double s, const Matrix& a);

Matrix scale(const Matrix& a, std::complex<double> s);
Matrix transpose(const Matrix& a);
Matrix conj_transpose(const Matrix& a);
Matrix conj(const Matrix& a);

/// Widen a real matrix to the complex field (imaginary plane zero).
Matrix to_complex(const Matrix& a);

double frobenius_norm(const Matrix& a);
/// Real part of the Hermitian inner product <vec(a), vec(b)>.
double frobenius_inner_re(const Matrix& a, const Matrix& b);
std::complex<double> trace(const Matrix& a);
/// Determinant by LU with partial pivoting; independent of the exponential path.
std::complex<double> determinant(const Matrix& a);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

/// <vec(a), vec(b)> / (|a|_F |b|_F); real part of the Hermitian product for
/// complex operands. Throws UndefinedSimilarityError on a zero-norm operand.
double cosine_sim(const Matrix& a, const Matrix& b);

/// Column vector flattened to the real field; complex entries expand to
/// interleaved [re, im] pairs, real columns pass through unchanged.
Matrix flatten_to_real_col(const Matrix& a);

std::string to_string(const Matrix& a);

} // namespace liegan
