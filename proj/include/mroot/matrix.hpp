#pragma once

#include <complex>
#include <vector>

namespace mroot {

using cd = std::complex<double>;
using Vec = std::vector<cd>;

// Vector helpers (2-norm, max-norm, conjugated dot product).
double norm2(const Vec& v);
double norm_inf(const Vec& v);
cd dot(const Vec& a, const Vec& b); // sum conj(a_i) * b_i
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(cd s, const Vec& v);

/// Allocation statistics for Matrix, collected while a MatrixAllocWatch is
/// active on the current thread. Used to check the claim that the
/// refinement path never touches a matrix larger than max(t, s) + 1 per
/// side.
struct MatrixAllocStats {
    long count = 0;
    int max_rows = 0;
    int max_cols = 0;
    int max_side() const { return max_rows > max_cols ? max_rows : max_cols; }
};

class MatrixAllocWatch {
  public:
    MatrixAllocWatch();
    ~MatrixAllocWatch();
    MatrixAllocWatch(const MatrixAllocWatch&) = delete;
    MatrixAllocWatch& operator=(const MatrixAllocWatch&) = delete;
    const MatrixAllocStats& stats() const { return stats_; }

  private:
    MatrixAllocStats stats_;
    MatrixAllocStats* prev_;
};

/// Dense complex matrix, row-major. Sized for the small systems this
/// library works with; no attempt at blocking or sparsity.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols);
    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cd& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const cd& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    Matrix adjoint() const;
    Matrix operator*(const Matrix& rhs) const;
    Vec mul(const Vec& x) const;         // A x
    Vec mul_adjoint(const Vec& x) const; // A* x

    Vec col(int j) const;
    void set_col(int j, const Vec& v);

    double frobenius() const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cd> data_;
};

} // namespace mroot
