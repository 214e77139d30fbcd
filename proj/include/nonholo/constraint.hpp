#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "nonholo/linalg.hpp"
#include "nonholo/tensor.hpp"

namespace nonholo {

/**
 * The constraint one-form a_A(q) of a single Pfaffian constraint
 * sum_A a_A(q) qdot^A = 0, linear and homogeneous in the velocities.
 *
 * jacobian (d a_A / d q^B, row A, column B) is optional; central differences
 * are used when absent.
 */
struct ConstraintForm {
    std::size_t dim = 0;
    std::function<Vec(const Vec&)> eval;
    std::function<Mat(const Vec&)> jacobian; // optional

    [[nodiscard]] Vec at(const Vec& q) const;
    [[nodiscard]] Mat jacobian_at(const Vec& q) const;
};

/// Curl tensor M_AB = d a_A / d q^B - d a_B / d q^A, antisymmetric by
/// construction (upper triangle computed, lower mirrored).
Mat curl(const ConstraintForm& a, const Vec& q);

/// Number of independent integrability conditions, (N-1)(N-2)/2.
std::size_t condition_count(std::size_t n);

struct IntegrabilityReport {
    double max_closedness_residual = 0.0;   // max over samples, A<B of |M_AB|
    double max_frobenius_residual = 0.0;    // max over samples, triples of |a_A M_BC + a_B M_CA + a_C M_AB|
    double max_closedness_normalized = 0.0; // |M_AB| / max(||a||, eps)
    double max_frobenius_normalized = 0.0;  // |F_ABC| / max(||a||*||M||, eps)
    std::size_t n_conditions = 0;           // (N-1)(N-2)/2, triples evaluated per sample
    std::size_t n_samples_used = 0;
    std::size_t n_samples_skipped = 0;      // points with ||a|| < 1e-10
};

/**
 * Sample the chart on a deterministic lattice (ceil(n_samples^(1/N)) points
 * per axis) plus the chart center plus n_random seeded uniform extras, and
 * accumulate closedness and Frobenius residual statistics.
 *
 * At each sample the Frobenius expression is evaluated on the independent
 * triple set pivoted on the largest-magnitude component of a(q): exactly
 * (N-1)(N-2)/2 triples, which imply the remaining ones whenever a != 0.
 * Samples with ||a(q)|| < 1e-10 are skipped and counted separately.
 */
IntegrabilityReport integrability_report(const ConstraintForm& a, const MetricField& g,
                                         const Chart& chart, std::size_t n_samples,
                                         std::size_t n_random = 0, std::uint64_t seed = 0);

enum class ConstraintClass {
    HolonomicExact,       // M == 0 on all samples: the form is a gradient
    IntegrableWithFactor, // M != 0 but a ^ M == 0: an integrating factor exists
    GenuinelyNonholonomic,
    Indeterminate, // a vanished at every sample
};

[[nodiscard]] std::string to_string(ConstraintClass c);

struct ClassificationResult {
    ConstraintClass constraint_class = ConstraintClass::Indeterminate;
    IntegrabilityReport report;
    double tol = 0.0;
};

/**
 * Classify the constraint on the chart. Decision rule on normalized
 * residuals: closedness <= tol -> HolonomicExact; else Frobenius <= tol ->
 * IntegrableWithFactor; else GenuinelyNonholonomic. Labels are certified on
 * the sampled points only; the underlying integrability theory is exact on a
 * contractible chart but a finite sample can only establish necessity.
 */
ClassificationResult classify(const ConstraintForm& a, const MetricField& g, const Chart& chart,
                              double tol = 1e-7, std::size_t n_samples = 200,
                              std::size_t n_random = 32, std::uint64_t seed = 0);

} // namespace nonholo
