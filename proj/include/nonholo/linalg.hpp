#pragma once

#include <cstddef>
#include <vector>

#include "nonholo/errors.hpp"

// Small dense linear algebra for desk-scale problems (N <= ~50).
// Row-major storage, plain loops, no blocking. Chosen for robustness and
// determinism rather than speed.

namespace nonholo {

using Vec = std::vector<double>;

class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] Mat transposed() const;
    [[nodiscard]] double max_abs() const;

    Mat& operator+=(const Mat& rhs);
    Mat& operator-=(const Mat& rhs);
    Mat& operator*=(double s);

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(Mat a, double s);
Mat operator*(double s, Mat a);
Mat mat_mul(const Mat& a, const Mat& b);
Vec mat_vec(const Mat& a, const Vec& x);

// Vector helpers.
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Vec& a, double s);
void vec_axpy(Vec& y, double alpha, const Vec& x); // y += alpha * x
double dot(const Vec& a, const Vec& b);            // plain Euclidean dot
double max_abs(const Vec& a);

/// Cholesky factorization A = L L^T of a symmetric positive-definite matrix.
/// Throws NumericError if a pivot is non-positive.
class Cholesky {
public:
    explicit Cholesky(const Mat& a);

    [[nodiscard]] const Mat& lower() const { return L_; }

    [[nodiscard]] Vec solve(const Vec& b) const;          // A x = b
    [[nodiscard]] Mat solve(const Mat& b) const;          // column-wise
    [[nodiscard]] Vec solve_lower(const Vec& b) const;    // L y = b
    [[nodiscard]] Vec solve_lower_t(const Vec& b) const;  //L^T x = b
    [[nodiscard]] Vec lower_times(const Vec& x) const;    // L x

private:
    Mat L_;
};

struct SymEigen {
    Vec values;  // ascending
    Mat vectors; // orthonormal columns, vectors(:,k) pairs with values[k]
};

/// Cyclic Jacobi eigensolver for a symmetric matrix. Input is symmetrized
/// before iteration; converges quadratically for the small matrices used here.
SymEigen jacobi_eigensymm(Mat a, int max_sweeps = 64);

struct GenSymEigen {
    Vec values;      // ascending
    Mat vectors_con; // columns x with A x = lambda G x, normalized x^T G x = 1
    Mat vectors_cov; // columns G x (covariant components)
};

/// Generalized symmetric eigenproblem A x = lambda G x with G SPD, solved by
/// Cholesky reduction of G followed by Jacobi iteration.
GenSymEigen generalized_eigensymm(const Mat& a, const Mat& g);

} // namespace nonholo
