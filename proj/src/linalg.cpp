#include "nonholo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nonholo {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Mat::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Mat& Mat::operator+=(const Mat& rhs) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

Mat& Mat::operator-=(const Mat& rhs) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

Mat& Mat::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(Mat a, double s) { return a *= s; }
Mat operator*(double s, Mat a) { return a *= s; }

Mat mat_mul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw ConfigError("mat_mul: inner dimensions differ");
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vec mat_vec(const Mat& a, const Vec& x) {
    if (a.cols() != x.size()) throw ConfigError("mat_vec: dimension mismatch");
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vec vec_add(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Vec vec_scale(const Vec& a, double s) {
    Vec r(a);
    for (double& v : r) v *= s;
    return r;
}

void vec_axpy(Vec& y, double alpha, const Vec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw ConfigError("dot: dimension mismatch");
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

Cholesky::Cholesky(const Mat& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ConfigError("Cholesky: matrix not square");
    L_ = Mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= L_(j, k) * L_(j, k);
        if (!(d > 0.0) || !std::isfinite(d))
            throw NumericError("Cholesky: matrix not positive definite");
        L_(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L_(i, k) * L_(j, k);
            L_(i, j) = s / L_(j, j);
        }
    }
}

Vec Cholesky::solve_lower(const Vec& b) const {
    const std::size_t n = L_.rows();
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= L_(i, k) * y[k];
        y[i] = s / L_(i, i);
    }
    return y;
}

Vec Cholesky::solve_lower_t(const Vec& b) const {
    const std::size_t n = L_.rows();
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= L_(k, ii) * x[k];
        x[ii] = s / L_(ii, ii);
    }
    return x;
}

Vec Cholesky::solve(const Vec& b) const {
    if (b.size() != L_.rows()) throw ConfigError("Cholesky::solve: dimension mismatch");
    return solve_lower_t(solve_lower(b));
}

Mat Cholesky::solve(const Mat& b) const {
    if (b.rows() != L_.rows()) throw ConfigError("Cholesky::solve: dimension mismatch");
    Mat x(b.rows(), b.cols());
    Vec col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        const Vec sol = solve(col);
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

Vec Cholesky::lower_times(const Vec& x) const {
    const std::size_t n = L_.rows();
    Vec y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += L_(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

SymEigen jacobi_eigensymm(Mat a, int max_sweeps) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ConfigError("jacobi_eigensymm: matrix not square");

    // Symmetrize; the iteration assumes exact symmetry.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double m = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = m;
        }

    Mat v = Mat::identity(n);
    const double scale = std::max(a.max_abs(), 1.0);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));
        if (off <= 1e-15 * scale) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = a(p, k) = akp - s * (akq + tau * akp);
                    a(k, q) = a(q, k) = akq + s * (akp - tau * akq);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymEigen out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

GenSymEigen generalized_eigensymm(const Mat& a, const Mat& g) {
    const std::size_t n = a.rows();
    if (a.cols() != n || g.rows() != n || g.cols() != n)
        throw ConfigError("generalized_eigensymm: dimension mismatch");

    const Cholesky chol(g);

    // B = L^{-1} A L^{-T}, computed column by column.
    Mat half(n, n);
    Vec col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = a(i, j);
        const Vec y = chol.solve_lower(col);
        for (std::size_t i = 0; i < n; ++i) half(i, j) = y[i];
    }
    Mat b(n, n);
    const Mat half_t = half.transposed(); // rows are L^{-1} A columns
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = half_t(i, j);
        const Vec y = chol.solve_lower(col);
        for (std::size_t i = 0; i < n; ++i) b(i, j) = y[i];
    }

    SymEigen std_eig = jacobi_eigensymm(b);

    GenSymEigen out;
    out.values = std_eig.values;
    out.vectors_con = Mat(n, n);
    out.vectors_cov = Mat(n, n);
    Vec y(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) y[i] = std_eig.vectors(i, k);
        const Vec x = chol.solve_lower_t(y); // contravariant: x^T G x = 1
        const Vec c = chol.lower_times(y);   // covariant: G x = L y
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors_con(i, k) = x[i];
            out.vectors_cov(i, k) = c[i];
        }
    }
    return out;
}

} // namespace nonholo
