#include "nonholo/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nonholo/numdiff.hpp"

namespace nonholo {
namespace {

constexpr double kVanishTol = 1e-10; // ||a|| below this: sample skipped
constexpr double kDenomFloor = 1e-30;

// Uniform double in [0,1) from the raw engine output; the standard
// distribution objects are implementation-defined, this is reproducible.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// g-weighted Frobenius norm of the curl tensor: sqrt(-tr(g^{-1} M g^{-1} M)).
double curl_norm(const Mat& m, const Cholesky& g_chol) {
    const Mat x = g_chol.solve(m); // g^{-1} M
    const Mat xx = mat_mul(x, x);
    double tr = 0.0;
    for (std::size_t i = 0; i < xx.rows(); ++i) tr += xx(i, i);
    return std::sqrt(std::max(-tr, 0.0));
}

std::vector<Vec> sample_points(const Chart& chart, std::size_t n_samples, std::size_t n_random,
                               std::uint64_t seed) {
    const std::size_t n = chart.dim;
    std::size_t per_axis = 1;
    if (n_samples > 1) {
        per_axis = static_cast<std::size_t>(
            std::ceil(std::pow(static_cast<double>(n_samples), 1.0 / static_cast<double>(n))));
        per_axis = std::max<std::size_t>(per_axis, 1);
    }

    std::vector<Vec> pts;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        Vec q(n);
        for (std::size_t c = 0; c < n; ++c) {
            const auto [lo, hi] = chart.bounds[c];
            q[c] = (per_axis == 1)
                       ? 0.5 * (lo + hi)
                       : lo + (hi - lo) * static_cast<double>(idx[c]) /
                                 static_cast<double>(per_axis - 1);
        }
        pts.push_back(std::move(q));
        std::size_t c = 0;
        while (c < n && ++idx[c] == per_axis) idx[c++] = 0;
        if (c == n) break;
    }

    pts.push_back(chart.center());

    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n_random; ++k) {
        Vec q(n);
        for (std::size_t c = 0; c < n; ++c) {
            const auto [lo, hi] = chart.bounds[c];
            q[c] = lo + (hi - lo) * uniform01(rng);
        }
        pts.push_back(std::move(q));
    }
    return pts;
}

} // namespace

Vec ConstraintForm::at(const Vec& q) const {
    if (q.size() != dim) throw ConfigError("ConstraintForm: point dimension mismatch");
    Vec a = eval(q);
    if (a.size() != dim) throw ConfigError("ConstraintForm: eval returned wrong size");
    return a;
}

Mat ConstraintForm::jacobian_at(const Vec& q) const {
    if (q.size() != dim) throw ConfigError("ConstraintForm: point dimension mismatch");
    if (jacobian) {
        Mat j = jacobian(q);
        if (j.rows() != dim || j.cols() != dim)
            throw ConfigError("ConstraintForm: jacobian returned wrong shape");
        return j;
    }
    return fd_jacobian(eval, q);
}

Mat curl(const ConstraintForm& a, const Vec& q) {
    const Mat j = a.jacobian_at(q);
    const std::size_t n = a.dim;
    Mat m(n, n);
    for (std::size_t A = 0; A < n; ++A)
        for (std::size_t B = A + 1; B < n; ++B) {
            const double v = j(A, B) - j(B, A);
            m(A, B) = v;
            m(B, A) = -v;
        }
    return m;
}

std::size_t condition_count(std::size_t n) {
    if (n < 2) throw ConfigError("condition_count: dimension must be >= 2");
    return (n - 1) * (n - 2) / 2;
}

IntegrabilityReport integrability_report(const ConstraintForm& a, const MetricField& g,
                                         const Chart& chart, std::size_t n_samples,
                                         std::size_t n_random, std::uint64_t seed) {
    if (chart.dim != a.dim || g.dim != a.dim)
        throw ConfigError("integrability_report: dimension mismatch");
    if (n_samples < 1) throw ConfigError("integrability_report: n_samples must be >= 1");

    const std::size_t n = a.dim;
    IntegrabilityReport rep;
    rep.n_conditions = condition_count(n);

    for (const Vec& q : sample_points(chart, n_samples, n_random, seed)) {
        const Vec av = a.at(q);
        const Mat gq = g.at(q);
        const Cholesky gchol(gq);
        const double anorm = std::sqrt(std::max(dot(gchol.solve(av), av), 0.0));
        if (anorm < kVanishTol) {
            ++rep.n_samples_skipped;
            continue;
        }
        ++rep.n_samples_used;

        const Mat m = curl(a, q);
        const double mnorm = curl_norm(m, gchol);

        double closed = 0.0;
        for (std::size_t A = 0; A < n; ++A)
            for (std::size_t B = A + 1; B < n; ++B) closed = std::max(closed, std::abs(m(A, B)));
        rep.max_closedness_residual = std::max(rep.max_closedness_residual, closed);
        rep.max_closedness_normalized =
            std::max(rep.max_closedness_normalized, closed / std::max(anorm, kDenomFloor));

        // Independent triple set pivoted on the largest |a_P|; the remaining
        // triples follow from the identity a ^ (a ^ da) = 0.
        std::size_t pivot = 0;
        for (std::size_t A = 1; A < n; ++A)
            if (std::abs(av[A]) > std::abs(av[pivot])) pivot = A;
        double frob = 0.0;
        for (std::size_t B = 0; B < n; ++B) {
            if (B == pivot) continue;
            for (std::size_t C = B + 1; C < n; ++C) {
                if (C == pivot) continue;
                frob = std::max(frob, std::abs(av[pivot] * m(B, C) + av[B] * m(C, pivot) +
                                               av[C] * m(pivot, B)));
            }
        }
        rep.max_frobenius_residual = std::max(rep.max_frobenius_residual, frob);
        rep.max_frobenius_normalized = std::max(
            rep.max_frobenius_normalized, frob / std::max(anorm * mnorm, kDenomFloor));
    }
    return rep;
}

std::string to_string(ConstraintClass c) {
    switch (c) {
    case ConstraintClass::HolonomicExact: return "HolonomicExact";
    case ConstraintClass::IntegrableWithFactor: return "IntegrableWithFactor";
    case ConstraintClass::GenuinelyNonholonomic: return "GenuinelyNonholonomic";
    case ConstraintClass::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

ClassificationResult classify(const ConstraintForm& a, const MetricField& g, const Chart& chart,
                              double tol, std::size_t n_samples, std::size_t n_random,
                              std::uint64_t seed) {
    if (!(tol > 0.0)) throw ConfigError("classify: tol must be positive");
    ClassificationResult res;
    res.tol = tol;
    res.report = integrability_report(a, g, chart, n_samples, n_random, seed);
    const IntegrabilityReport& r = res.report;
    if (r.n_samples_used == 0)
        res.constraint_class = ConstraintClass::Indeterminate;
    else if (r.max_closedness_normalized <= tol)
        res.constraint_class = ConstraintClass::HolonomicExact;
    else if (r.max_frobenius_normalized <= tol)
        res.constraint_class = ConstraintClass::IntegrableWithFactor;
    else
        res.constraint_class = ConstraintClass::GenuinelyNonholonomic;
    return res;
}

} // namespace nonholo
