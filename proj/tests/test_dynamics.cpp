#include "doctest.h"

#include <cmath>
#include <random>

#include "nonholo/dynamics.hpp"
#include "nonholo/fields.hpp"
#include "nonholo/scenario.hpp"
#include "test_support.hpp"

using namespace nonholo;
namespace ts = testsupport;

namespace {

NaturalLagrangian free_particle(std::size_t n) {
    NaturalLagrangian sys;
    sys.metric = MetricField::identity(n);
    return sys;
}

NaturalLagrangian harmonic_particle(std::size_t n) {
    NaturalLagrangian sys;
    sys.metric = MetricField::identity(n);
    const ScalarField v = harmonic_potential(n, 1.0);
    sys.potential = v.value;
    sys.potential_gradient = v.gradient;
    return sys;
}

// g = diag(1, (q1)^2, 1); SPD away from q1 = 0.
NaturalLagrangian curved_metric_particle() {
    NaturalLagrangian sys;
    sys.metric = polynomial_diagonal_metric(
        {Polynomial::constant(3, 1.0),
         Polynomial(3, {Monomial{1.0, {2, 0, 0}}}),
         Polynomial::constant(3, 1.0)});
    return sys;
}

// Independent Euler-Lagrange route along the straight-line path
// q(t) = q + qdot t with qddot = 0:
//   f_A = -[ d/dt p_A - dL/dq^A ],   p = g(q(t)) qdot,
// using only metric/potential evaluations (never their partials, which is
// what force_term consumes).
Vec force_oracle(const NaturalLagrangian& sys, const Vec& q, const Vec& qdot) {
    const std::size_t n = q.size();
    const auto lagrangian = [&](const Vec& qq) {
        return 0.5 * inner_con(sys.metric.at(qq), qdot, qdot) - sys.potential_at(qq);
    };
    const double dt = 1e-5;
    Vec q_fwd = q, q_bwd = q;
    vec_axpy(q_fwd, dt, qdot);
    vec_axpy(q_bwd, -dt, qdot);
    const Vec p_fwd = mat_vec(sys.metric.at(q_fwd), qdot);
    const Vec p_bwd = mat_vec(sys.metric.at(q_bwd), qdot);

    Vec f(n);
    for (std::size_t A = 0; A < n; ++A) {
        const double pdot = (p_fwd[A] - p_bwd[A]) / (2.0 * dt);
        const double h = 1e-6;
        Vec qp = q, qm = q;
        qp[A] += h;
        qm[A] -= h;
        const double dLdq = (lagrangian(qp) - lagrangian(qm)) / (2.0 * h);
        f[A] = -(pdot - dLdq);
    }
    return f;
}

} // namespace

TEST_CASE("force_term: free particle has no generalized force") {
    const NaturalLagrangian sys = free_particle(3);
    CHECK(max_abs(force_term(sys, {0.3, -0.2, 0.9}, {1.0, 2.0, -1.0})) == 0.0);
}

TEST_CASE("force_term: harmonic gradient") {
    const NaturalLagrangian sys = harmonic_particle(3);
    const Vec f = force_term(sys, {1.0, 0.0, 0.0}, {0.0, 0.0, 0.0});
    CHECK(f[0] == doctest::Approx(-1.0));
    CHECK(f[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(f[2] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("force_term: curved metric against the path-based EL oracle") {
    const NaturalLagrangian sys = curved_metric_particle();
    const Vec q = {1.0, 0.5, -0.2};
    const Vec qdot = {1.0, 1.0, 0.0};
    const Vec f = force_term(sys, q, qdot);
    // Hand derivation for g = diag(1, q1^2, 1), qdot = (1,1,0) at q1 = 1:
    // f_1 = 1/2 d(g22)/dq1 (qd2)^2 = q1 = 1; f_2 = -d(g22)/dq1 qd1 qd2 = -2.
    CHECK(f[0] == doctest::Approx(1.0));
    CHECK(f[1] == doctest::Approx(-2.0));
    CHECK(f[2] == doctest::Approx(0.0).scale(1.0));

    const Vec oracle = force_oracle(sys, q, qdot);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(f[i] == doctest::Approx(oracle[i]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("force_term matches the EL oracle on random states") {
    std::mt19937_64 rng(19);
    const NaturalLagrangian sys = curved_metric_particle();
    const NaturalLagrangian sys2 = harmonic_particle(3);
    for (int trial = 0; trial < 6; ++trial) {
        const Vec q = {ts::uniform(rng, 0.7, 1.6), ts::uniform(rng, -1.0, 1.0),
                       ts::uniform(rng, -1.0, 1.0)};
        const Vec qd = ts::random_vec(rng, 3);
        for (const NaturalLagrangian* s : {&sys, &sys2}) {
            const Vec f = force_term(*s, q, qd);
            const Vec oracle = force_oracle(*s, q, qd);
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(f[i] == doctest::Approx(oracle[i]).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("force_term with finite-difference metric partials (1e-5 agreement)") {
    NaturalLagrangian sys = curved_metric_particle();
    NaturalLagrangian fd = sys;
    fd.metric.partials = nullptr;
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec q = {ts::uniform(rng, 0.7, 1.6), ts::uniform(rng, -1.0, 1.0),
                       ts::uniform(rng, -1.0, 1.0)};
        const Vec qd = ts::random_vec(rng, 3);
        const Vec fa = force_term(sys, q, qd);
        const Vec ff = force_term(fd, q, qd);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(fa[i] == doctest::Approx(ff[i]).epsilon(1e-5).scale(1.0));
    }
}

TEST_CASE("dalembert_rhs closed-form multiplier for pars3") {
    const Scenario sc = Scenario::builtin("pars3");
    const ConstraintForm a = sc.constraint();
    const NaturalLagrangian sys = free_particle(3);

    SUBCASE("lambda = xd yd / (1 + y^2) at the origin") {
        const DalembertEval e = dalembert_rhs(sys, a, {0, 0, 0}, {1.0, 1.0, 0.0});
        CHECK(e.lambda == doctest::Approx(1.0));
        CHECK(e.qddot[0] == doctest::Approx(0.0).scale(1.0));
        CHECK(e.qddot[1] == doctest::Approx(0.0).scale(1.0));
        CHECK(e.qddot[2] == doctest::Approx(1.0));
    }

    SUBCASE("zero multiplier when yd = 0") {
        const DalembertEval e = dalembert_rhs(sys, a, {0, 0, 0}, {1.0, 0.0, 0.0});
        CHECK(e.lambda == doctest::Approx(0.0).scale(1.0));
        CHECK(max_abs(e.qddot) <= 1e-15);
    }

    SUBCASE("closed form at generic states") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 10; ++trial) {
            const Vec q = ts::random_vec(rng, 3);
            // admissible: zd = y xd
            Vec qd = ts::random_vec(rng, 3);
            qd[2] = q[1] * qd[0];
            const DalembertEval e = dalembert_rhs(sys, a, q, qd);
            const double expect = qd[0] * qd[1] / (1.0 + q[1] * q[1]);
            CHECK(e.lambda == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
        }
    }

    SUBCASE("harmonic potential at rest: force only") {
        const NaturalLagrangian hsys = harmonic_particle(3);
        const DalembertEval e = dalembert_rhs(hsys, a, {1.0, 0.0, 0.0}, {0.0, 0.0, 0.0});
        CHECK(e.lambda == doctest::Approx(0.0).scale(1.0));
        CHECK(e.qddot[0] == doctest::Approx(-1.0));
        CHECK(e.qddot[1] == doctest::Approx(0.0).scale(1.0));
        CHECK(e.qddot[2] == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("vakonomic_rhs hand oracles at the pars3 origin") {
    const Scenario sc = Scenario::builtin("pars3");
    const ConstraintForm a = sc.constraint();
    const NaturalLagrangian sys = free_particle(3);
    const Mat m = curl(a, {0, 0, 0});

    SUBCASE("mu = 0 coincides with d'Alembert instantaneously") {
        const VakonomicEval e = vakonomic_rhs(sys, a, m, {0, 0, 0}, {1.0, 1.0, 0.0}, 0.0);
        CHECK(e.mudot == doctest::Approx(1.0));
        CHECK(e.qddot[0] == doctest::Approx(0.0).scale(1.0));
        CHECK(e.qddot[1] == doctest::Approx(0.0).scale(1.0));
        CHECK(e.qddot[2] == doctest::Approx(1.0));
    }

    SUBCASE("mu = 1 adds the curl force") {
        // M qdot = (-1, 1, 0), a^T(M qdot) = 0, so mudot stays 1 and
        // qddot = (0,0,1) + (-1,1,0) = (-1,1,1).
        const VakonomicEval e = vakonomic_rhs(sys, a, m, {0, 0, 0}, {1.0, 1.0, 0.0}, 1.0);
        CHECK(e.mudot == doctest::Approx(1.0));
        CHECK(e.qddot[0] == doctest::Approx(-1.0));
        CHECK(e.qddot[1] == doctest::Approx(1.0));
        CHECK(e.qddot[2] == doctest::Approx(1.0));
    }
}

TEST_CASE("with exact constraints the two right-hand sides coincide for every mu") {
    const Scenario sc = Scenario::builtin("grad_sphere");
    const ConstraintForm a = sc.constraint();
    const NaturalLagrangian sys = free_particle(3);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Vec q = ts::random_vec(rng, 3);
        if (std::sqrt(dot(q, q)) < 0.3) continue;
        Vec qd = ts::random_vec(rng, 3);
        const Vec av = a.at(q);
        vec_axpy(qd, -dot(av, qd) / dot(av, av), av);

        const Mat m = curl(a, q); // identically zero
        CHECK(m.max_abs() == 0.0);
        const DalembertEval d = dalembert_rhs(sys, a, q, qd);
        for (const double mu : {0.0, 1.0, -3.5}) {
            const VakonomicEval v = vakonomic_rhs(sys, a, m, q, qd, mu);
            CHECK(v.mudot == doctest::Approx(d.lambda).epsilon(1e-14).scale(1.0));
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(v.qddot[i] == doctest::Approx(d.qddot[i]).epsilon(1e-14).scale(1.0));
        }
    }
}

TEST_CASE("vakonomic at mu = 0 equals d'Alembert at every state") {
    const Scenario sc = Scenario::builtin("genuine4");
    const ConstraintForm a = sc.constraint();
    const NaturalLagrangian sys = free_particle(4);
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec q = ts::random_vec(rng, 4);
        const Vec qd = ts::random_vec(rng, 4);
        const Mat m = curl(a, q);
        const DalembertEval d = dalembert_rhs(sys, a, q, qd);
        const VakonomicEval v = vakonomic_rhs(sys, a, m, q, qd, 0.0);
        CHECK(v.mudot == doctest::Approx(d.lambda).epsilon(1e-15));
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(v.qddot[i] == doctest::Approx(d.qddot[i]).epsilon(1e-15).scale(1.0));
    }
}

TEST_CASE("state overloads delegate to the component forms") {
    const Scenario sc = Scenario::builtin("pars3");
    const ConstraintForm a = sc.constraint();
    const NaturalLagrangian sys = free_particle(3);
    State st;
    st.q = {0.0, 0.0, 0.0};
    st.qdot = {1.0, 1.0, 0.0};
    CHECK(dalembert_rhs(sys, a, st).lambda == doctest::Approx(1.0));
    CHECK(energy(sys, st) == doctest::Approx(1.0));
    CHECK(drift(a, st) == 0.0);

    const Mat m = curl(a, st.q);
    CHECK_THROWS_AS(vakonomic_rhs(sys, a, m, st), ConfigError); // mu not set
    st.mu = 1.0;
    CHECK(vakonomic_rhs(sys, a, m, st).qddot[0] == doctest::Approx(-1.0));
}

TEST_CASE("integrate: pars3 d'Alembert matches the reduction-of-order closed form") {
    const Scenario sc = Scenario::builtin("pars3");
    const NaturalLagrangian sys = free_particle(3);
    IntegrateOptions opts;
    opts.duration = 1.0;
    opts.step = 1e-3;
    const Trajectory traj =
        integrate(sys, sc.constraint(), SystemKind::Dalembert, {0, 0, 0}, {1, 1, 0}, opts);
    REQUIRE(traj.samples.size() == 1001);
    CHECK_FALSE(traj.aborted);
    // y(t) = t and xd(t) = xd0 sqrt((1 + y0^2)/(1 + y^2))
    double worst = 0.0;
    for (const TrajectorySample& s : traj.samples) {
        const double expect = std::sqrt(1.0 / (1.0 + s.t * s.t));
        worst = std::max(worst, std::abs(s.qdot[0] - expect));
        worst = std::max(worst, std::abs(s.q[1] - s.t));
    }
    CHECK(worst <= 1e-6);
    // multiplier column carries lambda(t) = xd yd/(1+y^2)
    const TrajectorySample& last = traj.samples.back();
    CHECK(last.multiplier ==
          doctest::Approx(last.qdot[0] * last.qdot[1] / (1.0 + last.q[1] * last.q[1])));
}

TEST_CASE("integrate: holonomic surface is preserved") {
    const Scenario sc = Scenario::builtin("grad_sphere");
    const NaturalLagrangian sys = free_particle(3);
    IntegrateOptions opts;
    opts.duration = 1.0;
    opts.step = 1e-3;
    for (const SystemKind kind : {SystemKind::Dalembert, SystemKind::Vakonomic}) {
        const Trajectory traj =
            integrate(sys, sc.constraint(), kind, {1, 0, 0}, {0, 1, 0}, opts);
        double worst = 0.0;
        for (const TrajectorySample& s : traj.samples)
            worst = std::max(worst, std::abs(dot(s.q, s.q) - 1.0));
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("integrate: rest stays at rest") {
    const Scenario sc = Scenario::builtin("pars3");
    const NaturalLagrangian sys = free_particle(3);
    IntegrateOptions opts;
    opts.duration = 0.5;
    opts.step = 1e-2;
    const Trajectory traj =
        integrate(sys, sc.constraint(), SystemKind::Dalembert, {0.1, 0.2, 0.3}, {0, 0, 0}, opts);
    for (const TrajectorySample& s : traj.samples) {
        CHECK(max_abs(s.qdot) == 0.0);
        CHECK(s.q == Vec{0.1, 0.2, 0.3});
    }
}

TEST_CASE("integrate rejects inadmissible initial data and bad steps") {
    const Scenario sc = Scenario::builtin("pars3");
    const NaturalLagrangian sys = free_particle(3);
    IntegrateOptions opts;
    CHECK_THROWS_AS(
        integrate(sys, sc.constraint(), SystemKind::Dalembert, {0, 0, 0}, {0, 0, 1}, opts),
        ConfigError);
    opts.step = -1.0;
    CHECK_THROWS_AS(
        integrate(sys, sc.constraint(), SystemKind::Dalembert, {0, 0, 0}, {1, 0, 0}, opts),
        ConfigError);
}

TEST_CASE("integrate aborts with a partial trajectory at degenerate points") {
    // a = grad(q1 q2) vanishes at the origin; a straight free motion from
    // (1, 0, 0) toward it degenerates at t = 1.
    ConstraintForm a = polynomial_constraint(
        {Polynomial::linear(3, 1, 1.0), Polynomial::linear(3, 0, 1.0), Polynomial::zero(3)});
    const NaturalLagrangian sys = free_particle(3);
    IntegrateOptions opts;
    opts.duration = 2.0;
    opts.step = 1e-2;
    const Trajectory traj =
        integrate(sys, a, SystemKind::Dalembert, {1, 0, 0}, {-1, 0, 0}, opts);
    CHECK(traj.aborted);
    CHECK(!traj.abort_reason.empty());
    CHECK(traj.samples.size() > 10);
    CHECK(traj.samples.size() < 201);
}

TEST_CASE("energy values and conservation") {
    const NaturalLagrangian sys = free_particle(3);
    CHECK(energy(sys, {0, 0, 0}, {1, 1, 0}) == doctest::Approx(1.0));
    const NaturalLagrangian hsys = harmonic_particle(3);
    CHECK(energy(hsys, {1.0, 0.0, 0.0}, {0, 0, 0}) == doctest::Approx(0.5));

    const Scenario sc = Scenario::builtin("pars3");
    IntegrateOptions opts;
    opts.duration = 1.0;
    opts.step = 1e-3;
    for (const SystemKind kind : {SystemKind::Dalembert, SystemKind::Vakonomic}) {
        const Trajectory traj =
            integrate(sys, sc.constraint(), kind, {0, 0, 0}, {1, 1, 0}, opts);
        double worst = 0.0;
        for (const TrajectorySample& s : traj.samples)
            worst = std::max(worst, std::abs(s.energy - traj.samples.front().energy));
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("vakonomic integration self-converges at the expected order") {
    // No closed form pins this system, so compare against the same
    // integrator at a five-times finer step on the shared sample times.
    const Scenario sc = Scenario::builtin("pars3");
    const NaturalLagrangian sys = free_particle(3);
    IntegrateOptions coarse;
    coarse.duration = 1.0;
    coarse.step = 1e-3;
    IntegrateOptions fine = coarse;
    fine.step = 2e-4;
    const Trajectory tc =
        integrate(sys, sc.constraint(), SystemKind::Vakonomic, {0, 0, 0}, {1, 1, 0}, coarse);
    const Trajectory tf =
        integrate(sys, sc.constraint(), SystemKind::Vakonomic, {0, 0, 0}, {1, 1, 0}, fine);
    REQUIRE(tc.samples.size() == 1001);
    REQUIRE(tf.samples.size() == 5001);
    double worst = 0.0;
    for (std::size_t k = 0; k < tc.samples.size(); ++k) {
        const Vec& qc = tc.samples[k].q;
        const Vec& qf = tf.samples[5 * k].q;
        worst = std::max(worst, max_abs(vec_sub(qc, qf)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("the variational trajectory depends on mu0") {
    const Scenario sc = Scenario::builtin("pars3");
    const NaturalLagrangian sys = free_particle(3);
    IntegrateOptions opts;
    opts.duration = 1.0;
    opts.step = 1e-3;
    const Trajectory base =
        integrate(sys, sc.constraint(), SystemKind::Vakonomic, {0, 0, 0}, {1, 1, 0}, opts);
    opts.mu0 = 1.0;
    const Trajectory shifted =
        integrate(sys, sc.constraint(), SystemKind::Vakonomic, {0, 0, 0}, {1, 1, 0}, opts);
    const TrajectoryComparison cmp =
        compare(base, shifted, MetricField::identity(3), 1e-2);
    CHECK(cmp.sup_distance > 1e-2);
}

TEST_CASE("energy error drops by >= 8x when the step is halved") {
    const Scenario sc = Scenario::builtin("pars3");
    const NaturalLagrangian sys = free_particle(3);
    const auto max_energy_err = [&](double h) {
        IntegrateOptions opts;
        opts.duration = 1.0;
        opts.step = h;
        const Trajectory traj =
            integrate(sys, sc.constraint(), SystemKind::Vakonomic, {0, 0, 0}, {1, 1, 0}, opts);
        double worst = 0.0;
        for (const TrajectorySample& s : traj.samples)
            worst = std::max(worst, std::abs(s.energy - traj.samples.front().energy));
        return worst;
    };
    CHECK(max_energy_err(0.02) / max_energy_err(0.01) >= 8.0);
}

TEST_CASE("drift stays at integrator precision and has the right definition") {
    const Scenario sc = Scenario::builtin("pars3");
    const ConstraintForm a = sc.constraint();
    CHECK(drift(a, {0, 0, 0}, {1, 1, 0}) == 0.0);
    // qdot = raised a with ||a|| = 1 at the origin: drift = 1
    CHECK(drift(a, {0, 0, 0}, {0, 0, 1}) == doctest::Approx(1.0));

    const NaturalLagrangian sys = free_particle(3);
    IntegrateOptions opts;
    opts.duration = 1.0;
    opts.step = 1e-3;
    for (const SystemKind kind : {SystemKind::Dalembert, SystemKind::Vakonomic}) {
        const Trajectory traj = integrate(sys, a, kind, {0, 0, 0}, {1, 1, 0}, opts);
        double worst = 0.0;
        for (const TrajectorySample& s : traj.samples)
            worst = std::max(worst, std::abs(s.drift));
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("velocity projection keeps long runs on the constraint plane") {
    const Scenario sc = Scenario::builtin("pars3");
    const NaturalLagrangian sys = free_particle(3);
    IntegrateOptions opts;
    opts.duration = 10.0;
    opts.step = 1e-2;
    opts.project_velocity = true;
    const Trajectory traj =
        integrate(sys, sc.constraint(), SystemKind::Dalembert, {0, 0, 0}, {1, 1, 0}, opts);
    double worst = 0.0;
    for (const TrajectorySample& s : traj.samples) worst = std::max(worst, std::abs(s.drift));
    CHECK(worst <= 1e-12);
}

TEST_CASE("compare: identical trajectories, divergence, and grid mismatch") {
    const Scenario sc = Scenario::builtin("pars3");
    const NaturalLagrangian sys = free_particle(3);
    const MetricField id3 = MetricField::identity(3);
    IntegrateOptions opts;
    opts.duration = 1.0;
    opts.step = 1e-3;

    const Trajectory dal =
        integrate(sys, sc.constraint(), SystemKind::Dalembert, {0, 0, 0}, {1, 1, 0}, opts);
    const TrajectoryComparison same = compare(dal, dal, id3, 1e-2);
    CHECK(same.sup_distance == 0.0);
    CHECK_FALSE(same.first_crossing.has_value());

    const Trajectory vak =
        integrate(sys, sc.constraint(), SystemKind::Vakonomic, {0, 0, 0}, {1, 1, 0}, opts);
    const TrajectoryComparison diff = compare(dal, vak, id3, 1e-2);
    CHECK(diff.sup_distance > 1e-2);
    CHECK(diff.first_crossing.has_value());
    CHECK(diff.distances.front() == 0.0);

    IntegrateOptions shorter = opts;
    shorter.duration = 0.5;
    const Trajectory half =
        integrate(sys, sc.constraint(), SystemKind::Dalembert, {0, 0, 0}, {1, 1, 0}, shorter);
    CHECK_THROWS_AS(compare(dal, half, id3, 1e-2), ConfigError);
}
