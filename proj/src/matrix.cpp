#include "mroot/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace mroot {

double norm2(const Vec& v) {
    double s = 0.0;
    for (const cd& x : v) s += std::norm(x);
    return std::sqrt(s);
}

double norm_inf(const Vec& v) {
    double m = 0.0;
    for (const cd& x : v) m = std::max(m, std::abs(x));
    return m;
}

cd dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    cd s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec +: size mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec -: size mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec operator*(cd s, const Vec& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

namespace {
thread_local MatrixAllocStats* g_active_watch = nullptr;
}

MatrixAllocWatch::MatrixAllocWatch() : prev_(g_active_watch) {
    g_active_watch = &stats_;
}

MatrixAllocWatch::~MatrixAllocWatch() {
    g_active_watch = prev_;
}

Matrix::Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, cd(0.0)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative size");
    if (g_active_watch) {
        g_active_watch->count++;
        g_active_watch->max_rows = std::max(g_active_watch->max_rows, rows);
        g_active_watch->max_cols = std::max(g_active_watch->max_cols, cols);
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("Matrix *: shape mismatch");
    Matrix m(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const cd a = (*this)(i, k);
            if (a == cd(0.0)) continue;
            for (int j = 0; j < rhs.cols_; ++j) m(i, j) += a * rhs(k, j);
        }
    return m;
}

Vec Matrix::mul(const Vec& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("Matrix mul: size mismatch");
    Vec r(rows_, cd(0.0));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * x[j];
    return r;
}

Vec Matrix::mul_adjoint(const Vec& x) const {
    if (static_cast<int>(x.size()) != rows_) throw std::invalid_argument("Matrix mul_adjoint: size mismatch");
    Vec r(cols_, cd(0.0));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r[j] += std::conj((*this)(i, j)) * x[i];
    return r;
}

Vec Matrix::col(int j) const {
    if (j < 0 || j >= cols_) throw std::invalid_argument("Matrix col: out of range");
    Vec r(rows_);
    for (int i = 0; i < rows_; ++i) r[i] = (*this)(i, j);
    return r;
}

void Matrix::set_col(int j, const Vec& v) {
    if (j < 0 || j >= cols_ || static_cast<int>(v.size()) != rows_)
        throw std::invalid_argument("Matrix set_col: shape mismatch");
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

double Matrix::frobenius() const {
    double s = 0.0;
    for (const cd& x : data_) s += std::norm(x);
    return std::sqrt(s);
}

} // namespace mroot
