#include "nonholo/tensor.hpp"

#include <cmath>
#include <utility>

#include "nonholo/numdiff.hpp"

namespace nonholo {

Chart::Chart(std::size_t n, std::vector<std::pair<double, double>> b)
    : dim(n), bounds(std::move(b)) {
    if (bounds.size() != dim) throw ConfigError("Chart: bounds size does not match dim");
    for (const auto& [lo, hi] : bounds)
        if (!(lo < hi)) throw ConfigError("Chart: degenerate interval (lower must be < upper)");
}

Chart Chart::cube(std::size_t n, double lo, double hi) {
    return Chart(n, std::vector<std::pair<double, double>>(n, {lo, hi}));
}

Vec Chart::center() const {
    Vec c(dim);
    for (std::size_t i = 0; i < dim; ++i) c[i] = 0.5 * (bounds[i].first + bounds[i].second);
    return c;
}

Mat MetricField::at(const Vec& q) const {
    if (q.size() != dim) throw ConfigError("MetricField: point dimension mismatch");
    Mat g = eval(q);
    if (g.rows() != dim || g.cols() != dim)
        throw ConfigError("MetricField: eval returned wrong shape");
    const double scale = std::max(g.max_abs(), 1.0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            if (std::abs(g(i, j) - g(j, i)) > 1e-12 * scale)
                throw NumericError("MetricField: tensor not symmetric at queried point");
    return g;
}

std::vector<Mat> MetricField::partials_at(const Vec& q) const {
    if (partials) {
        auto dg = partials(q);
        if (dg.size() != dim) throw ConfigError("MetricField: partials returned wrong count");
        return dg;
    }
    std::vector<Mat> dg(dim);
    Vec qp = q, qm = q;
    for (std::size_t c = 0; c < dim; ++c) {
        const double h = fd_step(q[c]);
        qp[c] = q[c] + h;
        qm[c] = q[c] - h;
        Mat gp = eval(qp);
        const Mat gm = eval(qm);
        gp -= gm;
        gp *= 1.0 / (2.0 * h);
        dg[c] = gp;
        qp[c] = q[c];
        qm[c] = q[c];
    }
    return dg;
}

MetricField MetricField::identity(std::size_t n) {
    MetricField m;
    m.dim = n;
    m.eval = [n](const Vec&) { return Mat::identity(n); };
    m.partials = [n](const Vec&) { return std::vector<Mat>(n, Mat(n, n)); };
    return m;
}

Vec raise_lower(const Mat& g_at_q, IndexDirection direction, const Vec& components) {
    if (g_at_q.rows() != components.size())
        throw ConfigError("raise_lower: dimension mismatch");
    const Cholesky chol(g_at_q); // also validates positive definiteness
    if (direction == IndexDirection::Raise) return chol.solve(components);
    return mat_vec(g_at_q, components);
}

Vec raise_index(const Mat& g_at_q, const Vec& covector) {
    return raise_lower(g_at_q, IndexDirection::Raise, covector);
}

Vec lower_index(const Mat& g_at_q, const Vec& vector) {
    return raise_lower(g_at_q, IndexDirection::Lower, vector);
}

double inner(const Mat& g_at_q, const Vec& u_cov, const Vec& v_cov) {
    if (u_cov.size() != v_cov.size() || g_at_q.rows() != u_cov.size())
        throw ConfigError("inner: dimension mismatch");
    const Cholesky chol(g_at_q);
    return dot(chol.solve(u_cov), v_cov);
}

double norm(const Mat& g_at_q, const Vec& u_cov) {
    const double s = inner(g_at_q, u_cov, u_cov);
    return std::sqrt(std::max(s, 0.0));
}

double inner_con(const Mat& g_at_q, const Vec& u_con, const Vec& v_con) {
    if (u_con.size() != v_con.size() || g_at_q.rows() != u_con.size())
        throw ConfigError("inner_con: dimension mismatch");
    return dot(mat_vec(g_at_q, u_con), v_con);
}

double norm_con(const Mat& g_at_q, const Vec& u_con) {
    const double s = inner_con(g_at_q, u_con, u_con);
    return std::sqrt(std::max(s, 0.0));
}

} // namespace nonholo
