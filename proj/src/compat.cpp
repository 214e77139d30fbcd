#include "nonholo/compat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nonholo/tensor.hpp"

namespace nonholo {
namespace {

constexpr double kDegenerate = 1e-30;

} // namespace

double capital_R(const Vec& a_cov, const Mat& m, const Mat& g, const Vec& qdot) {
    if (a_cov.size() != qdot.size() || m.rows() != a_cov.size())
        throw ConfigError("capital_R: dimension mismatch");
    return dot(raise_index(g, a_cov), mat_vec(m, qdot));
}

double compat_residual(const Vec& a_cov, const Mat& m, const Mat& g, const Vec& qdot) {
    if (a_cov.size() != qdot.size() || m.rows() != a_cov.size())
        throw ConfigError("compat_residual: dimension mismatch");
    const double anorm = norm(g, a_cov);
    if (anorm < kDegenerate)
        throw NumericError("compat_residual: constraint covector vanishes at the point");
    const Vec mq = mat_vec(m, qdot); // covariant
    const double mqnorm = norm(g, mq);
    const double ratio = mqnorm / anorm;
    double best = std::numeric_limits<double>::infinity();
    for (const double s : {1.0, -1.0})
        best = std::min(best, norm(g, vec_sub(mq, vec_scale(a_cov, s * ratio))));
    return best;
}

double three_dim_obstruction(const Vec& a_cov, const Mat& m) {
    if (a_cov.size() != 3 || m.rows() != 3 || m.cols() != 3)
        throw ConfigError("three_dim_obstruction: defined for N = 3 only");
    return a_cov[0] * m(1, 2) + a_cov[1] * m(2, 0) + a_cov[2] * m(0, 1);
}

ConsistencyCounts consistency_counts(std::size_t n, std::size_t p, bool full_rank) {
    if (p < 1) throw ConfigError("consistency_counts: p must be >= 1");
    if (2 * p > n) throw ConfigError("consistency_counts: 2p must be <= N");
    if (full_rank != (2 * p == n))
        throw ConfigError("consistency_counts: full_rank flag inconsistent with (N, p)");
    ConsistencyCounts c;
    if (full_rank) {
        c.velocity_conditions = n - 1;
        c.orthogonality_conditions = 0;
    } else {
        c.velocity_conditions = 2 * p - 1;
        c.orthogonality_conditions = n - 2 * p;
    }
    c.total = n - 1;
    return c;
}

VelocityFamily velocity_family(const Vec& a_cov, const Mat& m, const Mat& g,
                               const SkewSpectrum& spec, double tol) {
    if (!spec.has_b_basis()) throw ConfigError("velocity_family: b-basis not built");
    if (a_cov.size() != spec.dim || m.rows() != spec.dim)
        throw ConfigError("velocity_family: dimension mismatch");
    const double anorm = norm(g, a_cov);
    if (anorm < kDegenerate)
        throw NumericError("velocity_family: constraint covector vanishes at the point");

    VelocityFamily fam;
    fam.kernel_dim = spec.kernel_dim();

    fam.span_direction_cov.assign(spec.dim, 0.0);
    for (std::size_t nu = 0; nu < spec.p(); ++nu) {
        const Vec& bo = spec.b_cov[2 * nu];
        const Vec& be = spec.b_cov[2 * nu + 1];
        const double co = inner(g, bo, a_cov);
        const double ce = inner(g, be, a_cov);
        const double inv_kappa = 1.0 / spec.pair_kappas[nu];
        vec_axpy(fam.span_direction_cov, inv_kappa * ce / anorm, bo);
        vec_axpy(fam.span_direction_cov, -inv_kappa * co / anorm, be);
    }

    for (std::size_t nu = spec.rank; nu < spec.dim; ++nu) {
        fam.kernel_basis_cov.push_back(spec.b_cov[nu]);
        if (std::abs(inner(g, a_cov, spec.b_cov[nu])) <= tol * anorm)
            ++fam.admissible_kernel_dims;
    }
    return fam;
}

std::string to_string(CompatCase c) {
    switch (c) {
    case CompatCase::TriviallyCompatible: return "TriviallyCompatible";
    case CompatCase::KernelCase: return "KernelCase";
    case CompatCase::SpanCase: return "SpanCase";
    }
    return "TriviallyCompatible";
}

CompatVerdict initial_data_verdict(const Vec& a_cov, const Mat& m, const Mat& g,
                                   const SkewSpectrum& spec, const Vec& q0, const Vec& qdot0,
                                   double tol) {
    if (!spec.has_b_basis()) throw ConfigError("initial_data_verdict: b-basis not built");
    if (a_cov.size() != qdot0.size() || a_cov.size() != spec.dim || q0.size() != spec.dim)
        throw ConfigError("initial_data_verdict: dimension mismatch");
    if (!(tol > 0.0)) throw ConfigError("initial_data_verdict: tol must be positive");

    const double anorm = norm(g, a_cov);
    if (anorm < kDegenerate)
        throw NumericError("initial_data_verdict: constraint covector vanishes at q0");
    const double vnorm = norm_con(g, qdot0);

    CompatVerdict v;
    v.constraint_residual = std::abs(dot(a_cov, qdot0));
    if (v.constraint_residual > tol * std::max(anorm * vnorm, kDegenerate))
        throw ConfigError("initial_data_verdict: initial velocity violates the constraint");

    const double mnorm = spec.operator_norm();
    const double scale = mnorm * vnorm + anorm; // residual normalizer

    v.family = velocity_family(a_cov, m, g, spec, tol);
    if (spec.p() >= 1) {
        v.counts = consistency_counts(spec.dim, spec.p(), spec.rank == spec.dim);
        v.n_velocity_conditions = v.counts.velocity_conditions;
        v.n_total_conditions = v.counts.total;
    }

    if (vnorm == 0.0) { // vacuous: every equation is satisfied by rest
        v.verdict_case = CompatCase::KernelCase;
        v.kernel_coefficients.assign(v.family.kernel_basis_cov.size(), 0.0);
        v.compatible_at_point = true;
        return v;
    }

    if (mnorm <= tol * std::max(1.0, anorm)) {
        v.verdict_case = CompatCase::TriviallyCompatible;
        v.compatible_at_point = true;
        return v;
    }

    v.compat_residual = compat_residual(a_cov, m, g, qdot0);
    const Vec mq = mat_vec(m, qdot0);
    const double mqnorm = norm(g, mq);

    if (mqnorm <= tol * scale) {
        v.verdict_case = CompatCase::KernelCase;
        // Expand qdot0 in the raised kernel basis.
        Vec residual = qdot0;
        double condam = 0.0;
        for (const Vec& b : v.family.kernel_basis_cov) {
            const double gamma = dot(b, qdot0); // natural pairing with covariant b
            v.kernel_coefficients.push_back(gamma);
            condam += gamma * inner(g, a_cov, b);
            vec_axpy(residual, -gamma, raise_index(g, b));
        }
        v.representation_residual = norm_con(g, residual) / vnorm;
        v.condam_residual = std::abs(condam) / std::max(anorm * vnorm, kDegenerate);
        v.compatible_at_point =
            v.representation_residual <= tol && v.condam_residual <= tol;
    } else {
        v.verdict_case = CompatCase::SpanCase;
        for (const Vec& b : v.family.kernel_basis_cov)
            v.ortho_residual = std::max(v.ortho_residual, std::abs(inner(g, b, a_cov)) / anorm);
        v.compatible_at_point =
            v.ortho_residual <= tol && v.compat_residual / scale <= tol;
    }
    return v;
}

} // namespace nonholo
