#include "liegan/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liegan/parallel.hpp"
#include "liegan/rng.hpp"

namespace liegan {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(op) + ": shape/field mismatch (" +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " " + field_name(a.field()) +
                         " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + " " +
                         field_name(b.field()) + ")");
    }
}

} // namespace

Matrix::Matrix(int rows, int cols, Field field) : rows_(rows), cols_(cols), field_(field) {
    if (rows < 0 || cols < 0) throw ShapeError("Matrix: negative dimension");
    re_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    if (field == Field::Complex) im_.assign(re_.size(), 0.0);
}

Matrix Matrix::identity(int n, Field field) {
    Matrix m(n, n, field);
    for (int i = 0; i < n; ++i) m.re(i, i) = 1.0;
    return m;
}

Matrix Matrix::zeros_like(const Matrix& other) { return Matrix(other.rows_, other.cols_, other.field_); }

Matrix Matrix::from_rows(int rows, int cols, std::span<const double> entries) {
    if (entries.size() != static_cast<std::size_t>(rows) * cols)
        throw ShapeError("from_rows: entry count does not match dimensions");
    Matrix m(rows, cols, Field::Real);
    std::copy(entries.begin(), entries.end(), m.re_.begin());
    return m;
}

Matrix Matrix::random_gaussian(RandomStream& rng, int rows, int cols, Field field, double stddev) {
    Matrix m(rows, cols, field);
    for (auto& v : m.re_) v = stddev * rng.gauss();
    for (auto& v : m.im_) v = stddev * rng.gauss();
    return m;
}

void Matrix::set(int i, int j, std::complex<double> v) {
    re_[idx(i, j)] = v.real();
    if (is_complex()) {
        im_[idx(i, j)] = v.imag();
    } else if (v.imag() != 0.0) {
        throw ShapeError("set: imaginary value assigned to a real-field matrix");
    }
}

bool Matrix::all_finite() const {
    auto ok = [](double v) { return std::isfinite(v); };
    return std::all_of(re_.begin(), re_.end(), ok) && std::all_of(im_.begin(), im_.end(), ok);
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_shape(*this, other, "add");
    for (std::size_t i = 0; i < re_.size(); ++i) re_[i] += other.re_[i];
    for (std::size_t i = 0; i < im_.size(); ++i) im_[i] += other.im_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_shape(*this, other, "sub");
    for (std::size_t i = 0; i < re_.size(); ++i) re_[i] -= other.re_[i];
    for (std::size_t i = 0; i < im_.size(); ++i) im_[i] -= other.im_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (auto& v : re_) v *= s;
    for (auto& v : im_) v *= s;
    return *this;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix r = a;
    r += b;
    return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix r = a;
    r -= b;
    return r;
}

Matrix operator-(const Matrix& a) {
    Matrix r = a;
    r *= -1.0;
    return r;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix r = a;
    r *= s;
    return r;
}

Matrix scale(const Matrix& a, std::complex<double> s) {
    if (s.imag() == 0.0) return s.real() * a;
    if (!a.is_complex()) {
        return scale(to_complex(a), s);
    }
    Matrix r = a;
    auto re = r.re_data();
    auto im = r.im_data();
    for (std::size_t i = 0; i < re.size(); ++i) {
        const double x = re[i], y = im[i];
        re[i] = s.real() * x - s.imag() * y;
        im[i] = s.real() * y + s.imag() * x;
    }
    return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.field() != b.field())
        throw ShapeError("matmul: mixed fields");
    if (a.cols() != b.rows())
        throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
    const int n = a.rows(), k = a.cols(), m = b.cols();
    Matrix c(n, m, a.field());
    const double* ar = a.re_data().data();
    const double* br = b.re_data().data();
    double* cr = c.re_data().data();
    if (!a.is_complex()) {
        // ikj order: both inner accesses stream along rows. Output rows are
        // disjoint per worker, so the parallel split is bit-deterministic.
        auto rows_fn = [&](int lo, int hi) {
            for (int i = lo; i < hi; ++i) {
                const double* arow = ar + static_cast<std::size_t>(i) * k;
                double* crow = cr + static_cast<std::size_t>(i) * m;
                for (int p = 0; p < k; ++p) {
                    const double av = arow[p];
                    if (av == 0.0) continue;
                    const double* brow = br + static_cast<std::size_t>(p) * m;
                    for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
                }
            }
        };
        if (static_cast<long>(n) * k * m >= 1 << 20)
            parallel_rows(n, 16, rows_fn);
        else
            rows_fn(0, n);
        return c;
    }
    const double* ai = a.im_data().data();
    const double* bi = b.im_data().data();
    double* ci = c.im_data().data();
    for (int i = 0; i < n; ++i) {
        const std::size_t ao = static_cast<std::size_t>(i) * k;
        const std::size_t co = static_cast<std::size_t>(i) * m;
        for (int p = 0; p < k; ++p) {
            const double are = ar[ao + p], aim = ai[ao + p];
            if (are == 0.0 && aim == 0.0) continue;
            const std::size_t bo = static_cast<std::size_t>(p) * m;
            for (int j = 0; j < m; ++j) {
                cr[co + j] += are * br[bo + j] - aim * bi[bo + j];
                ci[co + j] += are * bi[bo + j] + aim * br[bo + j];
            }
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix r(a.cols(), a.rows(), a.field());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.set(j, i, a.at(i, j));
    return r;
}

Matrix conj(const Matrix& a) {
    Matrix r = a;
    for (auto& v : r.im_data()) v = -v;
    return r;
}

Matrix conj_transpose(const Matrix& a) {
    Matrix r(a.cols(), a.rows(), a.field());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.set(j, i, std::conj(a.at(i, j)));
    return r;
}

Matrix to_complex(const Matrix& a) {
    if (a.is_complex()) return a;
    Matrix r(a.rows(), a.cols(), Field::Complex);
    std::copy(a.re_data().begin(), a.re_data().end(), r.re_data().begin());
    return r;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.re_data()) s += v * v;
    for (double v : a.im_data()) s += v * v;
    return std::sqrt(s);
}

double frobenius_inner_re(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "frobenius_inner");
    double s = 0.0;
    auto ar = a.re_data(), br = b.re_data();
    for (std::size_t i = 0; i < ar.size(); ++i) s += ar[i] * br[i];
    auto ai = a.im_data(), bi = b.im_data();
    for (std::size_t i = 0; i < ai.size(); ++i) s += ai[i] * bi[i];
    return s;
}

std::complex<double> trace(const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("trace: non-square matrix");
    std::complex<double> t = 0.0;
    for (int i = 0; i < a.rows(); ++i) t += a.at(i, i);
    return t;
}

std::complex<double> determinant(const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("determinant: non-square matrix");
    const int n = a.rows();
    std::vector<std::complex<double>> lu(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lu[static_cast<std::size_t>(i) * n + j] = a.at(i, j);
    std::complex<double> det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(lu[static_cast<std::size_t>(col) * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(lu[static_cast<std::size_t>(r) * n + col]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (pivot != col) {
            for (int j = 0; j < n; ++j)
                std::swap(lu[static_cast<std::size_t>(pivot) * n + j], lu[static_cast<std::size_t>(col) * n + j]);
            det = -det;
        }
        const std::complex<double> d = lu[static_cast<std::size_t>(col) * n + col];
        det *= d;
        for (int r = col + 1; r < n; ++r) {
            const std::complex<double> f = lu[static_cast<std::size_t>(r) * n + col] / d;
            if (f == std::complex<double>(0.0)) continue;
            for (int j = col + 1; j < n; ++j)
                lu[static_cast<std::size_t>(r) * n + j] -= f * lu[static_cast<std::size_t>(col) * n + j];
        }
    }
    return det;
}

double max_abs(const Matrix& a) {
    double best = 0.0;
    if (!a.is_complex()) {
        for (double v : a.re_data()) best = std::max(best, std::abs(v));
        return best;
    }
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) best = std::max(best, std::abs(a.at(i, j)));
    return best;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double best = 0.0;
    auto ar = a.re_data(), br = b.re_data();
    for (std::size_t i = 0; i < ar.size(); ++i) best = std::max(best, std::abs(ar[i] - br[i]));
    auto ai = a.im_data(), bi = b.im_data();
    for (std::size_t i = 0; i < ai.size(); ++i) best = std::max(best, std::abs(ai[i] - bi[i]));
    return best;
}

double cosine_sim(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "cosine_sim");
    const double na = frobenius_norm(a);
    const double nb = frobenius_norm(b);
    if (na == 0.0 || nb == 0.0)
        throw UndefinedSimilarityError("cosine_sim: zero-norm operand");
    return frobenius_inner_re(a, b) / (na * nb);
}

Matrix flatten_to_real_col(const Matrix& a) {
    if (a.cols() != 1) throw ShapeError("flatten_to_real_col: expected a column vector");
    if (!a.is_complex()) return a;
    Matrix out(2 * a.rows(), 1);
    for (int i = 0; i < a.rows(); ++i) {
        out.re(2 * i, 0) = a.re(i, 0);
        out.re(2 * i + 1, 0) = a.im(i, 0);
    }
    return out;
}

std::string to_string(const Matrix& a) {
    std::ostringstream os;
    os.precision(6);
    for (int i = 0; i < a.rows(); ++i) {
        os << (i == 0 ? "[" : " ") << "[";
        for (int j = 0; j < a.cols(); ++j) {
            if (j) os << ", ";
            os << a.re(i, j);
            if (a.is_complex()) os << (a.im(i, j) < 0 ? "-" : "+") << std::abs(a.im(i, j)) << "i";
        }
        os << "]" << (i + 1 == a.rows() ? "]" : "\n");
    }
    return os.str();
}

} // namespace liegan
