#pragma once

#include <cmath>
#include <functional>

#include "nonholo/linalg.hpp"

namespace nonholo {

/// Central-difference step per coordinate: h = 1e-6 * max(1, |q_c|).
inline double fd_step(double qc) {
    return 1e-6 * std::max(1.0, std::abs(qc));
}

/// Jacobian J(i,c) = d f_i / d q^c by central differences.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& q) {
    Vec qp = q, qm = q;
    Mat j;
    for (std::size_t c = 0; c < q.size(); ++c) {
        const double h = fd_step(q[c]);
        qp[c] = q[c] + h;
        qm[c] = q[c] - h;
        const Vec fp = f(qp);
        const Vec fm = f(qm);
        if (c == 0) j = Mat(fp.size(), q.size());
        for (std::size_t i = 0; i < fp.size(); ++i) j(i, c) = (fp[i] - fm[i]) / (2.0 * h);
        qp[c] = q[c];
        qm[c] = q[c];
    }
    return j;
}

/// Gradient of a scalar field by central differences.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& q) {
    Vec g(q.size());
    Vec qp = q, qm = q;
    for (std::size_t c = 0; c < q.size(); ++c) {
        const double h = fd_step(q[c]);
        qp[c] = q[c] + h;
        qm[c] = q[c] - h;
        g[c] = (f(qp) - f(qm)) / (2.0 * h);
        qp[c] = q[c];
        qm[c] = q[c];
    }
    return g;
}

} // namespace nonholo
