#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nonholo/constraint.hpp"
#include "nonholo/dynamics.hpp"
#include "nonholo/fields.hpp"
#include "nonholo/polynomial.hpp"

#include "json.hpp"

namespace nonholo {

struct MetricSpec {
    enum class Kind { Identity, Diagonal, Table };
    Kind kind = Kind::Identity;
    std::vector<std::vector<Polynomial>> entries; // diagonal: one row

    [[nodiscard]] MetricField build(std::size_t dim) const;
};

struct PotentialSpec {
    enum class Kind { None, Harmonic, Poly };
    Kind kind = Kind::None;
    double stiffness = 1.0; // harmonic
    Polynomial poly;

    [[nodiscard]] ScalarField build(std::size_t dim) const;
};

struct RunParams {
    double duration = 1.0;
    double step = 1e-3;
    double mu0 = 0.0;
    std::uint64_t seed = 0;
    double tol_classify = 1e-7;
    double tol_compat = 1e-8;
    double tol_rank = 1e-10;
    std::size_t n_samples = 200;
    std::size_t n_random = 32;
    bool project_velocity = false;
    double compare_threshold = 1e-2;
};

/**
 * Declarative description of one experiment: the constraint covector and
 * Lagrangian as polynomial tables, the sampling chart, admissible initial
 * data, and run parameters. Loadable from JSON; the built-in registry covers
 * the standard demonstration constraints.
 */
struct Scenario {
    std::string name;
    std::size_t dim = 0;
    std::vector<Polynomial> constraint_components;
    MetricSpec metric_spec;
    PotentialSpec potential_spec;
    Chart chart;
    Vec q0;
    Vec qdot0;
    RunParams run;
    std::optional<ConstraintClass> expected_class; // stored fixture for builtins

    [[nodiscard]] ConstraintForm constraint() const;
    [[nodiscard]] MetricField metric() const;
    [[nodiscard]] NaturalLagrangian lagrangian() const;

    /// Dimension and admissibility checks. If the initial velocity violates
    /// the constraint: project it onto the constraint plane when
    /// run.project_velocity is set (returns true), otherwise throw
    /// ConfigError. Returns false when no projection was needed.
    bool validate_and_project();

    static Scenario builtin(const std::string& name);
    static const std::vector<std::string>& builtin_names();
    /// Builtin name if registered, otherwise treat the argument as a path.
    static Scenario load(const std::string& name_or_path);
    static Scenario from_json(const nlohmann::json& j);
    static Scenario from_file(const std::string& path);
    [[nodiscard]] nlohmann::json to_json() const;
};

} // namespace nonholo
