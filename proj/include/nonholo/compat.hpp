#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nonholo/linalg.hpp"
#include "nonholo/spectral.hpp"

namespace nonholo {

/// R = sum a^A M_AB qdot^B, the projection of the curl image onto the raised
/// constraint covector.
double capital_R(const Vec& a_cov, const Mat& m, const Mat& g, const Vec& qdot);

/**
 * Residual of the pointwise compatibility equations
 *   M qdot = s * (||M qdot|| / ||a||) * a,   s in {+1, -1},
 * minimized over both signs (the derivation fixes s = +1 only for
 * convenience). Returns the g-norm of the defect. Throws NumericError when
 * ||a|| vanishes at the point.
 */
double compat_residual(const Vec& a_cov, const Mat& m, const Mat& g, const Vec& qdot);

/// N = 3 obstruction a_1 M_23 + a_2 M_31 + a_3 M_12. Nonzero certifies that
/// the compatibility equations have no admissible solution at the point.
double three_dim_obstruction(const Vec& a_cov, const Mat& m);

struct ConsistencyCounts {
    std::size_t velocity_conditions = 0;
    std::size_t orthogonality_conditions = 0;
    std::size_t total = 0;
};

/// Count the consistency conditions forced on initial data: (2p-1) velocity
/// conditions plus (N-2p) orthogonality conditions when 2p < N, or N-1
/// velocity conditions when M has full rank 2p = N; the total is N-1 either
/// way. Requires 1 <= p and 2p <= N, and full_rank consistent with (N, p).
ConsistencyCounts consistency_counts(std::size_t n, std::size_t p, bool full_rank);

/**
 * The solution family of the compatibility equations at a point, expressed in
 * the b-basis: a span-part direction (the unique solution component in the
 * range of M, per unit ||M qdot||) plus free kernel directions filtered by
 * the constraint.
 */
struct VelocityFamily {
    Vec span_direction_cov;            // per-unit-||M qdot|| coefficient of z
    std::vector<Vec> kernel_basis_cov; // b_{2p+1} .. b_N
    std::size_t admissible_kernel_dims = 0; // kernel b with |(a, b)| <= tol
    std::size_t kernel_dim = 0;             // N - 2p
};

VelocityFamily velocity_family(const Vec& a_cov, const Mat& m, const Mat& g,
                               const SkewSpectrum& spec, double tol = 1e-8);

enum class CompatCase {
    TriviallyCompatible, // M == 0 at the point: both systems coincide
    KernelCase,          // ||M qdot0|| == 0: qdot0 must lie in ker M
    SpanCase,            // ||M qdot0|| != 0
};

[[nodiscard]] std::string to_string(CompatCase c);

/**
 * Pointwise verdict at initial data (q0, qdot0).
 *
 * compatible_at_point reports only the necessary conditions checked here;
 * passing them does not guarantee coinciding solutions of the two dynamical
 * systems (necessary_conditions_only stays true on every verdict).
 */
struct CompatVerdict {
    CompatCase verdict_case = CompatCase::TriviallyCompatible;
    double constraint_residual = 0.0;     // |a . qdot0|
    double compat_residual = 0.0;         // min-over-sign residual, raw
    double ortho_residual = 0.0;          // span case: max kernel |(b, a)| / ||a||
    double representation_residual = 0.0; // kernel case: relative defect of the kernel expansion
    double condam_residual = 0.0;         // kernel case: |sum gamma_nu (a, b_nu)| normalized
    std::vector<double> kernel_coefficients; // gamma_nu, kernel case
    VelocityFamily family;                   // span data
    ConsistencyCounts counts;
    std::size_t n_velocity_conditions = 0;
    std::size_t n_total_conditions = 0;
    bool compatible_at_point = false;
    bool necessary_conditions_only = true;
};

/**
 * Classify initial data into TriviallyCompatible / KernelCase / SpanCase and
 * evaluate the applicable residuals. Preconditions: qdot0 satisfies the
 * constraint to tol (ConfigError otherwise) and ||a(q0)|| > 0 (NumericError
 * at degenerate points). qdot0 = 0 is vacuously compatible (KernelCase).
 */
CompatVerdict initial_data_verdict(const Vec& a_cov, const Mat& m, const Mat& g,
                                   const SkewSpectrum& spec, const Vec& q0, const Vec& qdot0,
                                   double tol = 1e-8);

} // namespace nonholo
