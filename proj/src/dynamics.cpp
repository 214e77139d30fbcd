#include "nonholo/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "nonholo/numdiff.hpp"

namespace nonholo {
namespace {

constexpr double kDegenerate = 1e-24; // threshold on a^T g^{-1} a

// C = sum (da_A/dq^B) qdot^B qdot^A, the curvature term of the
// differentiated constraint d/dt(a . qdot) = C + a . qddot.
double constraint_curvature(const ConstraintForm& a, const Vec& q, const Vec& qdot) {
    return dot(mat_vec(a.jacobian_at(q), qdot), qdot);
}

struct RhsContext {
    const NaturalLagrangian& sys;
    const ConstraintForm& a;
    SystemKind kind;
};

// Packed state layout: [q, qdot] or [q, qdot, mu].
void eval_derivative(const RhsContext& ctx, const Vec& y, Vec& dy) {
    const std::size_t n = ctx.sys.metric.dim;
    const Vec q(y.begin(), y.begin() + n);
    const Vec qdot(y.begin() + n, y.begin() + 2 * n);
    dy.resize(y.size());
    for (std::size_t i = 0; i < n; ++i) dy[i] = qdot[i];
    if (ctx.kind == SystemKind::Dalembert) {
        const DalembertEval e = dalembert_rhs(ctx.sys, ctx.a, q, qdot);
        for (std::size_t i = 0; i < n; ++i) dy[n + i] = e.qddot[i];
    } else {
        const Mat m = curl(ctx.a, q);
        const VakonomicEval e = vakonomic_rhs(ctx.sys, ctx.a, m, q, qdot, y[2 * n]);
        for (std::size_t i = 0; i < n; ++i) dy[n + i] = e.qddot[i];
        dy[2 * n] = e.mudot;
    }
}

} // namespace

double NaturalLagrangian::potential_at(const Vec& q) const {
    return potential ? potential(q) : 0.0;
}

Vec NaturalLagrangian::potential_gradient_at(const Vec& q) const {
    if (!potential) return Vec(q.size(), 0.0);
    if (potential_gradient) return potential_gradient(q);
    return fd_gradient(potential, q);
}

Vec force_term(const NaturalLagrangian& sys, const Vec& q, const Vec& qdot) {
    const std::size_t n = sys.metric.dim;
    if (q.size() != n || qdot.size() != n) throw ConfigError("force_term: dimension mismatch");
    const std::vector<Mat> dg = sys.metric.partials_at(q);
    const Vec dv = sys.potential_gradient_at(q);

    Vec f(n, 0.0);
    for (std::size_t A = 0; A < n; ++A) {
        double s = 0.0;
        for (std::size_t B = 0; B < n; ++B)
            for (std::size_t C = 0; C < n; ++C)
                s += (dg[C](A, B) - 0.5 * dg[A](B, C)) * qdot[B] * qdot[C];
        f[A] = -s - dv[A];
    }
    return f;
}

DalembertEval dalembert_rhs(const NaturalLagrangian& sys, const ConstraintForm& a, const Vec& q,
                            const Vec& qdot) {
    const Mat g = sys.metric.at(q);
    const Cholesky gchol(g);
    const Vec av = a.at(q);
    const Vec a_up = gchol.solve(av);
    const double a2 = dot(a_up, av);
    if (a2 <= kDegenerate)
        throw NumericError("dalembert_rhs: constraint covector degenerate at q");

    const Vec f = force_term(sys, q, qdot);
    const double curv = constraint_curvature(a, q, qdot);
    DalembertEval out;
    out.lambda = -(curv + dot(a_up, f)) / a2;
    out.qddot = gchol.solve(vec_add(f, vec_scale(av, out.lambda)));
    return out;
}

VakonomicEval vakonomic_rhs(const NaturalLagrangian& sys, const ConstraintForm& a,
                            const Mat& m_at_q, const Vec& q, const Vec& qdot, double mu) {
    const Mat g = sys.metric.at(q);
    const Cholesky gchol(g);
    const Vec av = a.at(q);
    const Vec a_up = gchol.solve(av);
    const double a2 = dot(a_up, av);
    if (a2 <= kDegenerate)
        throw NumericError("vakonomic_rhs: constraint covector degenerate at q");

    Vec f = force_term(sys, q, qdot);
    vec_axpy(f, mu, mat_vec(m_at_q, qdot)); // f + mu M qdot
    const double curv = constraint_curvature(a, q, qdot);
    VakonomicEval out;
    out.mudot = -(curv + dot(a_up, f)) / a2;
    out.qddot = gchol.solve(vec_add(f, vec_scale(av, out.mudot)));
    return out;
}

DalembertEval dalembert_rhs(const NaturalLagrangian& sys, const ConstraintForm& a,
                            const State& state) {
    return dalembert_rhs(sys, a, state.q, state.qdot);
}

VakonomicEval vakonomic_rhs(const NaturalLagrangian& sys, const ConstraintForm& a,
                            const Mat& m_at_q, const State& state) {
    if (!state.mu) throw ConfigError("vakonomic_rhs: state carries no multiplier mu");
    return vakonomic_rhs(sys, a, m_at_q, state.q, state.qdot, *state.mu);
}

double energy(const NaturalLagrangian& sys, const State& state) {
    return energy(sys, state.q, state.qdot);
}

double drift(const ConstraintForm& a, const State& state) {
    return drift(a, state.q, state.qdot);
}

std::string to_string(SystemKind k) {
    return k == SystemKind::Dalembert ? "dalembert" : "vakonomic";
}

double energy(const NaturalLagrangian& sys, const Vec& q, const Vec& qdot) {
    const Mat g = sys.metric.at(q);
    return 0.5 * inner_con(g, qdot, qdot) + sys.potential_at(q);
}

double drift(const ConstraintForm& a, const Vec& q, const Vec& qdot) {
    return dot(a.at(q), qdot);
}

Trajectory integrate(const NaturalLagrangian& sys, const ConstraintForm& a, SystemKind kind,
                     const Vec& q0, const Vec& qdot0, const IntegrateOptions& opts) {
    const std::size_t n = sys.metric.dim;
    if (q0.size() != n || qdot0.size() != n) throw ConfigError("integrate: dimension mismatch");
    if (!(opts.step > 0.0)) throw ConfigError("integrate: step must be positive");
    if (!(opts.duration >= opts.step))
        throw ConfigError("integrate: duration must be >= step");

    {
        const Mat g = sys.metric.at(q0);
        const Vec av = a.at(q0);
        const double scale = std::max(norm(g, av) * norm_con(g, qdot0), 1e-300);
        if (std::abs(dot(av, qdot0)) > 1e-10 * scale)
            throw ConfigError("integrate: initial velocity violates the constraint");
    }

    const RhsContext ctx{sys, a, kind};
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(opts.duration / opts.step));
    const double h = opts.step;

    Vec y(kind == SystemKind::Vakonomic ? 2 * n + 1 : 2 * n);
    std::copy(q0.begin(), q0.end(), y.begin());
    std::copy(qdot0.begin(), qdot0.end(), y.begin() + n);
    if (kind == SystemKind::Vakonomic) y[2 * n] = opts.mu0;

    Trajectory traj;
    traj.samples.reserve(n_steps + 1);
    Vec k1, k2, k3, k4, tmp(y.size());

    auto record = [&](double t) {
        TrajectorySample s;
        s.t = t;
        s.q.assign(y.begin(), y.begin() + n);
        s.qdot.assign(y.begin() + n, y.begin() + 2 * n);
        if (kind == SystemKind::Dalembert) {
            s.multiplier = dalembert_rhs(sys, a, s.q, s.qdot).lambda;
        } else {
            const Mat m = curl(a, s.q);
            s.multiplier = vakonomic_rhs(sys, a, m, s.q, s.qdot, y[2 * n]).mudot;
        }
        s.energy = energy(sys, s.q, s.qdot);
        s.drift = drift(a, s.q, s.qdot);
        traj.samples.push_back(std::move(s));
    };

    try {
        record(0.0);
    } catch (const NumericError& err) {
        traj.aborted = true;
        traj.abort_reason = err.what();
        return traj;
    }
    for (std::size_t step = 0; step < n_steps; ++step) {
        try {
            eval_derivative(ctx, y, k1);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            eval_derivative(ctx, tmp, k2);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            eval_derivative(ctx, tmp, k3);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
            eval_derivative(ctx, tmp, k4);
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

            for (double v : y)
                if (!std::isfinite(v)) throw NumericError("integrate: state became non-finite");

            if (opts.project_velocity) {
                const Vec q(y.begin(), y.begin() + n);
                const Mat g = sys.metric.at(q);
                const Cholesky gchol(g);
                const Vec av = a.at(q);
                const Vec a_up = gchol.solve(av);
                const double a2 = dot(a_up, av);
                if (a2 > kDegenerate) {
                    Vec qdot(y.begin() + n, y.begin() + 2 * n);
                    const double corr = dot(av, qdot) / a2;
                    for (std::size_t i = 0; i < n; ++i) y[n + i] = qdot[i] - corr * a_up[i];
                }
            }

            record(static_cast<double>(step + 1) * h);
        } catch (const NumericError& err) {
            traj.aborted = true;
            traj.abort_reason = err.what();
            return traj;
        }
    }
    return traj;
}

TrajectoryComparison compare(const Trajectory& a, const Trajectory& b, const MetricField& g,
                             double threshold) {
    if (a.samples.size() != b.samples.size())
        throw ConfigError("compare: trajectories have different sample counts");
    TrajectoryComparison cmp;
    cmp.distances.reserve(a.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const TrajectorySample& sa = a.samples[i];
        const TrajectorySample& sb = b.samples[i];
        if (std::abs(sa.t - sb.t) > 1e-12 * std::max(1.0, std::abs(sa.t)))
            throw ConfigError("compare: time grids differ");
        const double d = norm_con(g.at(sa.q), vec_sub(sb.q, sa.q));
        cmp.distances.push_back(d);
        cmp.sup_distance = std::max(cmp.sup_distance, d);
        if (!cmp.first_crossing && d > threshold) cmp.first_crossing = sa.t;
    }
    return cmp;
}

} // namespace nonholo
