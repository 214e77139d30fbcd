#pragma once

#include <vector>

#include "nonholo/constraint.hpp"
#include "nonholo/dynamics.hpp"
#include "nonholo/polynomial.hpp"
#include "nonholo/tensor.hpp"

// Polynomial-backed field builders. Every field constructed here carries
// analytic derivatives, so the built-in scenarios never rely on finite
// differences.

namespace nonholo {

/// Constraint one-form with components a_A given as polynomials.
ConstraintForm polynomial_constraint(std::vector<Polynomial> components);

/// Diagonal metric g_AA(q) given as polynomials (SPD checked at evaluation).
MetricField polynomial_diagonal_metric(std::vector<Polynomial> diagonal);

/// Full symmetric metric from a table of polynomials; entries(i, j) with
/// j >= i are read, the lower triangle is mirrored.
MetricField polynomial_metric(std::vector<std::vector<Polynomial>> entries);

/// Scalar potential with analytic gradient.
struct ScalarField {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
};

ScalarField polynomial_potential(Polynomial v);

/// V = 1/2 * stiffness * sum (q^A)^2.
ScalarField harmonic_potential(std::size_t dim, double stiffness);

} // namespace nonholo
