#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nonholo/constraint.hpp"
#include "nonholo/linalg.hpp"
#include "nonholo/tensor.hpp"

namespace nonholo {

/**
 * Natural Lagrangian L = T - V with kinetic energy T = 1/2 g_AB qdot^A qdot^B
 * and a velocity-independent potential V(q). The gradient callback is
 * optional (central differences otherwise). Velocity-dependent potentials are
 * out of scope and must be rejected by the configuration layer.
 */
struct NaturalLagrangian {
    MetricField metric;
    std::function<double(const Vec&)> potential;          // optional, V == 0 if absent
    std::function<Vec(const Vec&)> potential_gradient;    // optional

    [[nodiscard]] double potential_at(const Vec& q) const;
    [[nodiscard]] Vec potential_gradient_at(const Vec& q) const;
};

/// Generalized force covector f with g_AB qddot^B = f_A for the unconstrained
/// Euler-Lagrange equations:
///   f_A = -(dg_AB/dq^C - 1/2 dg_BC/dq^A) qdot^B qdot^C - dV/dq^A.
Vec force_term(const NaturalLagrangian& sys, const Vec& q, const Vec& qdot);

struct DalembertEval {
    Vec qddot;
    double lambda = 0.0;
};

/// d'Alembertian right-hand side: qddot = g^{-1}(f + lambda a) with the
/// multiplier solved algebraically from d/dt(a . qdot) = 0.
DalembertEval dalembert_rhs(const NaturalLagrangian& sys, const ConstraintForm& a, const Vec& q,
                            const Vec& qdot);

struct VakonomicEval {
    Vec qddot;
    double mudot = 0.0;
};

/// Variational (vakonomic) right-hand side: qddot = g^{-1}(f + mudot a +
/// mu M qdot), with mudot solved from the differentiated constraint; mu is a
/// genuine state integrated alongside (q, qdot).
VakonomicEval vakonomic_rhs(const NaturalLagrangian& sys, const ConstraintForm& a,
                            const Mat& m_at_q, const Vec& q, const Vec& qdot, double mu);

struct State {
    double t = 0.0;
    Vec q;
    Vec qdot;
    std::optional<double> mu; // variational system only
};

DalembertEval dalembert_rhs(const NaturalLagrangian& sys, const ConstraintForm& a,
                            const State& state);
/// State overload; requires state.mu to be set.
VakonomicEval vakonomic_rhs(const NaturalLagrangian& sys, const ConstraintForm& a,
                            const Mat& m_at_q, const State& state);
double energy(const NaturalLagrangian& sys, const State& state);
double drift(const ConstraintForm& a, const State& state);

struct TrajectorySample {
    double t = 0.0;
    Vec q;
    Vec qdot;
    double multiplier = 0.0; // lambda (d'Alembert) or mudot (vakonomic)
    double energy = 0.0;
    double drift = 0.0; // a(q) . qdot
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool aborted = false;
    std::string abort_reason;
};

enum class SystemKind { Dalembert, Vakonomic };

[[nodiscard]] std::string to_string(SystemKind k);

struct IntegrateOptions {
    double duration = 1.0;
    double step = 1e-3;
    double mu0 = 0.0;
    bool project_velocity = false; // re-project qdot onto the constraint plane per step
};

/**
 * Fixed-step classic 4th-order integration of either system from admissible
 * initial data (|a . qdot0| <= 1e-10 normalized; ConfigError otherwise).
 * Records multiplier, energy, and constraint drift at every step. If the
 * constraint covector degenerates mid-run the partial trajectory is returned
 * with the aborted flag set.
 */
Trajectory integrate(const NaturalLagrangian& sys, const ConstraintForm& a, SystemKind kind,
                     const Vec& q0, const Vec& qdot0, const IntegrateOptions& opts);

/// Energy first integral E = 1/2 qdot^T g qdot + V(q), shared by both systems.
double energy(const NaturalLagrangian& sys, const Vec& q, const Vec& qdot);

/// Signed constraint residual a(q) . qdot.
double drift(const ConstraintForm& a, const Vec& q, const Vec& qdot);

struct TrajectoryComparison {
    double sup_distance = 0.0;
    std::optional<double> first_crossing;   // first t with distance > threshold
    std::vector<double> distances;          // per-sample g-norm distance
};

/// Compare two trajectories on identical time grids: per-sample g-norm
/// distance between the q-curves, its supremum, and the first time it
/// exceeds the threshold.
TrajectoryComparison compare(const Trajectory& a, const Trajectory& b, const MetricField& g,
                             double threshold);

} // namespace nonholo
