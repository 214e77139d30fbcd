#pragma once

#include <functional>
#include <vector>

#include "nonholo/linalg.hpp"

namespace nonholo {

/// Sampling box for one coordinate chart: per-coordinate closed intervals.
struct Chart {
    std::size_t dim = 0;
    std::vector<std::pair<double, double>> bounds; // {lower, upper} per axis

    Chart() = default;
    Chart(std::size_t n, std::vector<std::pair<double, double>> b);
    static Chart cube(std::size_t n, double lo, double hi);

    [[nodiscard]] Vec center() const;
};

/**
 * The metric tensor g_AB(q) as an evaluable field over one chart.
 *
 * eval must return a symmetric positive-definite N x N matrix; symmetry is
 * checked at every evaluation, positive definiteness surfaces as a hard
 * error from the Cholesky factorization wherever the metric is inverted.
 * partials (d g_AB / d q^C, indexed by C) are optional; central differences
 * are used when absent. Immutable after construction, safe for concurrent
 * read-only use.
 */
struct MetricField {
    std::size_t dim = 0;
    std::function<Mat(const Vec&)> eval;
    std::function<std::vector<Mat>(const Vec&)> partials; // optional

    [[nodiscard]] Mat at(const Vec& q) const;               // validated g(q)
    [[nodiscard]] std::vector<Mat> partials_at(const Vec& q) const;

    static MetricField identity(std::size_t n);
};

enum class IndexDirection { Raise, Lower };

/// Raise (solve g x = a) or lower (compute g x) the index of a rank-1 tensor.
Vec raise_lower(const Mat& g_at_q, IndexDirection direction, const Vec& components);

Vec raise_index(const Mat& g_at_q, const Vec& covector);   // a^A = g^{AB} a_B
Vec lower_index(const Mat& g_at_q, const Vec& vector);     // v_A = g_AB v^B

/// Inner product of two covectors, sum g^{AB} u_A v_B.
double inner(const Mat& g_at_q, const Vec& u_cov, const Vec& v_cov);
double norm(const Mat& g_at_q, const Vec& u_cov);

/// Inner product of two contravariant vectors, sum g_AB u^A v^B.
double inner_con(const Mat& g_at_q, const Vec& u_con, const Vec& v_con);
double norm_con(const Mat& g_at_q, const Vec& u_con);

} // namespace nonholo
