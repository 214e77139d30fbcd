#include "nonholo/scenario.hpp"

#include <cmath>
#include <fstream>

namespace nonholo {
namespace {

using nlohmann::json;

json poly_to_json(const Polynomial& p) {
    json terms = json::array();
    for (const Monomial& t : p.terms()) terms.push_back({{"coef", t.coef}, {"exps", t.exps}});
    return terms;
}

Polynomial poly_from_json(const json& j, std::size_t dim, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of monomials");
    std::vector<Monomial> terms;
    for (const json& t : j) {
        Monomial m;
        m.coef = t.at("coef").get<double>();
        m.exps = t.at("exps").get<std::vector<unsigned>>();
        if (m.exps.size() != dim)
            throw ConfigError(where + ": monomial exponent count does not match dim");
        terms.push_back(std::move(m));
    }
    return Polynomial(dim, std::move(terms));
}

Polynomial mono(std::size_t dim, double coef, std::vector<unsigned> exps) {
    return Polynomial(dim, {Monomial{coef, std::move(exps)}});
}

ConstraintClass class_from_string(const std::string& s) {
    if (s == "HolonomicExact") return ConstraintClass::HolonomicExact;
    if (s == "IntegrableWithFactor") return ConstraintClass::IntegrableWithFactor;
    if (s == "GenuinelyNonholonomic") return ConstraintClass::GenuinelyNonholonomic;
    if (s == "Indeterminate") return ConstraintClass::Indeterminate;
    throw ConfigError("unknown constraint class '" + s + "'");
}

Scenario make_pars3() {
    Scenario s;
    s.name = "pars3";
    s.dim = 3;
    s.constraint_components = {mono(3, -1.0, {0, 1, 0}), Polynomial::zero(3),
                               Polynomial::constant(3, 1.0)};
    s.chart = Chart::cube(3, -1.0, 1.0);
    s.q0 = {0.0, 0.0, 0.0};
    s.qdot0 = {1.0, 1.0, 0.0};
    s.expected_class = ConstraintClass::GenuinelyNonholonomic;
    return s;
}

Scenario make_grad_sphere() {
    Scenario s;
    s.name = "grad_sphere";
    s.dim = 3;
    s.constraint_components = {Polynomial::linear(3, 0, 2.0), Polynomial::linear(3, 1, 2.0),
                               Polynomial::linear(3, 2, 2.0)};
    s.chart = Chart::cube(3, -1.0, 1.0);
    s.q0 = {1.0, 0.0, 0.0};
    s.qdot0 = {0.0, 1.0, 0.0};
    s.expected_class = ConstraintClass::HolonomicExact;
    return s;
}

Scenario make_factor3() {
    Scenario s;
    s.name = "factor3";
    s.dim = 3;
    s.constraint_components = {mono(3, 1.0, {0, 1, 0}), mono(3, 2.0, {1, 0, 0}),
                               Polynomial::zero(3)};
    s.chart = Chart::cube(3, 1.0, 2.0);
    s.q0 = {1.5, 1.5, 1.5};
    s.qdot0 = {0.4, -0.2, 0.3};
    s.expected_class = ConstraintClass::IntegrableWithFactor;
    return s;
}

Scenario make_genuine4() {
    Scenario s;
    s.name = "genuine4";
    s.dim = 4;
    s.constraint_components = {mono(4, -1.0, {0, 1, 0, 0}), Polynomial::zero(4),
                               Polynomial::constant(4, 1.0), mono(4, -1.0, {0, 0, 1, 0})};
    s.chart = Chart::cube(4, -1.0, 1.0);
    s.q0 = {0.0, 0.0, 0.0, 0.0};
    s.qdot0 = {1.0, 0.5, 0.0, 0.5};
    s.expected_class = ConstraintClass::GenuinelyNonholonomic;
    return s;
}

Scenario make_pars4pad() {
    Scenario s;
    s.name = "pars4pad";
    s.dim = 4;
    s.constraint_components = {mono(4, -1.0, {0, 1, 0, 0}), Polynomial::zero(4),
                               Polynomial::constant(4, 1.0), Polynomial::zero(4)};
    s.chart = Chart::cube(4, -1.0, 1.0);
    s.q0 = {0.0, 0.0, 0.0, 0.0};
    s.qdot0 = {0.0, 0.0, 0.0, 1.0};
    s.expected_class = ConstraintClass::GenuinelyNonholonomic;
    return s;
}

} // namespace

MetricField MetricSpec::build(std::size_t dim) const {
    switch (kind) {
    case Kind::Identity: return MetricField::identity(dim);
    case Kind::Diagonal: {
        if (entries.size() != 1 || entries[0].size() != dim)
            throw ConfigError("metric: diagonal spec needs exactly dim entries");
        return polynomial_diagonal_metric(entries[0]);
    }
    case Kind::Table: {
        if (entries.size() != dim)
            throw ConfigError("metric: table spec needs dim x dim entries");
        return polynomial_metric(entries);
    }
    }
    throw ConfigError("metric: unknown kind");
}

ScalarField PotentialSpec::build(std::size_t dim) const {
    switch (kind) {
    case Kind::None: return ScalarField{};
    case Kind::Harmonic: return harmonic_potential(dim, stiffness);
    case Kind::Poly: return polynomial_potential(poly);
    }
    throw ConfigError("potential: unknown kind");
}

ConstraintForm Scenario::constraint() const {
    return polynomial_constraint(constraint_components);
}

MetricField Scenario::metric() const { return metric_spec.build(dim); }

NaturalLagrangian Scenario::lagrangian() const {
    NaturalLagrangian sys;
    sys.metric = metric();
    const ScalarField v = potential_spec.build(dim);
    sys.potential = v.value;
    sys.potential_gradient = v.gradient;
    return sys;
}

bool Scenario::validate_and_project() {
    if (dim < 2) throw ConfigError("scenario.dim: must be >= 2");
    if (constraint_components.size() != dim)
        throw ConfigError("scenario.constraint: component count does not match dim");
    if (chart.dim != dim) throw ConfigError("scenario.chart: dimension mismatch");
    if (q0.size() != dim) throw ConfigError("scenario.initial.q0: dimension mismatch");
    if (qdot0.size() != dim) throw ConfigError("scenario.initial.qdot0: dimension mismatch");
    if (!(run.step > 0.0)) throw ConfigError("scenario.run.h: must be positive");
    if (!(run.duration >= run.step)) throw ConfigError("scenario.run.T: must be >= h");

    const ConstraintForm a = constraint();
    const Mat g = metric().at(q0);
    const Cholesky gchol(g);
    const Vec av = a.at(q0);
    const double scale = std::max(norm(g, av) * norm_con(g, qdot0), 1e-300);
    if (std::abs(dot(av, qdot0)) <= 1e-10 * scale) return false;

    if (!run.project_velocity)
        throw ConfigError("scenario.initial.qdot0: violates the constraint at q0 "
                          "(enable --project-velocity to project it)");
    const Vec a_up = gchol.solve(av);
    const double a2 = dot(a_up, av);
    if (a2 <= 0.0) throw NumericError("scenario: constraint covector degenerate at q0");
    const double corr = dot(av, qdot0) / a2;
    for (std::size_t i = 0; i < dim; ++i) qdot0[i] -= corr * a_up[i];
    return true;
}

Scenario Scenario::builtin(const std::string& name) {
    if (name == "pars3") return make_pars3();
    if (name == "grad_sphere") return make_grad_sphere();
    if (name == "factor3") return make_factor3();
    if (name == "genuine4") return make_genuine4();
    if (name == "pars4pad") return make_pars4pad();
    throw ConfigError("unknown builtin scenario '" + name + "'");
}

const std::vector<std::string>& Scenario::builtin_names() {
    static const std::vector<std::string> names = {"pars3", "grad_sphere", "factor3", "genuine4",
                                                   "pars4pad"};
    return names;
}

Scenario Scenario::load(const std::string& name_or_path) {
    for (const std::string& n : builtin_names())
        if (n == name_or_path) return builtin(n);
    return from_file(name_or_path);
}

Scenario Scenario::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("scenario file '" + path + "': " + e.what());
    }
    return from_json(j);
}

Scenario Scenario::from_json(const json& j) {
    Scenario s;
    try {
        s.name = j.value("name", std::string("custom"));
        s.dim = j.at("dim").get<std::size_t>();
        if (s.dim < 2) throw ConfigError("scenario.dim: must be >= 2");

        const json& comps = j.at("constraint").at("components");
        if (!comps.is_array() || comps.size() != s.dim)
            throw ConfigError("scenario.constraint.components: need exactly dim entries");
        for (std::size_t i = 0; i < s.dim; ++i)
            s.constraint_components.push_back(
                poly_from_json(comps[i], s.dim, "constraint.components[" + std::to_string(i) + "]"));

        if (j.contains("metric")) {
            const json& m = j.at("metric");
            const std::string kind = m.value("kind", std::string("identity"));
            if (kind == "identity") {
                s.metric_spec.kind = MetricSpec::Kind::Identity;
            } else if (kind == "diagonal") {
                s.metric_spec.kind = MetricSpec::Kind::Diagonal;
                std::vector<Polynomial> diag;
                for (const json& e : m.at("entries"))
                    diag.push_back(poly_from_json(e, s.dim, "metric.entries"));
                s.metric_spec.entries = {std::move(diag)};
            } else if (kind == "table") {
                s.metric_spec.kind = MetricSpec::Kind::Table;
                for (const json& row : m.at("entries")) {
                    std::vector<Polynomial> r;
                    for (const json& e : row)
                        r.push_back(poly_from_json(e, s.dim, "metric.entries"));
                    s.metric_spec.entries.push_back(std::move(r));
                }
            } else {
                throw ConfigError("scenario.metric.kind: '" + kind +
                                  "' not supported (identity | diagonal | table)");
            }
        }

        if (j.contains("potential")) {
            const json& p = j.at("potential");
            const std::string kind = p.value("kind", std::string("none"));
            if (kind == "none") {
                s.potential_spec.kind = PotentialSpec::Kind::None;
            } else if (kind == "harmonic") {
                s.potential_spec.kind = PotentialSpec::Kind::Harmonic;
                s.potential_spec.stiffness = p.value("stiffness", 1.0);
            } else if (kind == "polynomial") {
                s.potential_spec.kind = PotentialSpec::Kind::Poly;
                s.potential_spec.poly = poly_from_json(p.at("terms"), s.dim, "potential.terms");
            } else {
                throw ConfigError("scenario.potential.kind: '" + kind +
                                  "' not supported (none | harmonic | polynomial); "
                                  "velocity-dependent generalised potentials are out of scope");
            }
        }

        const json& c = j.at("chart");
        const auto lower = c.at("lower").get<Vec>();
        const auto upper = c.at("upper").get<Vec>();
        if (lower.size() != s.dim || upper.size() != s.dim)
            throw ConfigError("scenario.chart: bounds dimension mismatch");
        std::vector<std::pair<double, double>> bounds;
        for (std::size_t i = 0; i < s.dim; ++i) bounds.emplace_back(lower[i], upper[i]);
        s.chart = Chart(s.dim, std::move(bounds));

        const json& init = j.at("initial");
        s.q0 = init.at("q0").get<Vec>();
        s.qdot0 = init.at("qdot0").get<Vec>();
        s.run.mu0 = init.value("mu0", 0.0);

        if (j.contains("run")) {
            const json& r = j.at("run");
            s.run.duration = r.value("T", s.run.duration);
            s.run.step = r.value("h", s.run.step);
            s.run.seed = r.value("seed", s.run.seed);
            s.run.tol_classify = r.value("tol_classify", s.run.tol_classify);
            s.run.tol_compat = r.value("tol_compat", s.run.tol_compat);
            s.run.tol_rank = r.value("tol_rank", s.run.tol_rank);
            s.run.n_samples = r.value("n_samples", s.run.n_samples);
            s.run.n_random = r.value("n_random", s.run.n_random);
            s.run.project_velocity = r.value("project_velocity", s.run.project_velocity);
            s.run.compare_threshold = r.value("compare_threshold", s.run.compare_threshold);
        }
        if (j.contains("expected_class"))
            s.expected_class = class_from_string(j.at("expected_class").get<std::string>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario json: ") + e.what());
    }
    return s;
}

json Scenario::to_json() const {
    json j;
    j["name"] = name;
    j["dim"] = dim;
    json comps = json::array();
    for (const Polynomial& p : constraint_components) comps.push_back(poly_to_json(p));
    j["constraint"] = {{"components", comps}};

    switch (metric_spec.kind) {
    case MetricSpec::Kind::Identity: j["metric"] = {{"kind", "identity"}}; break;
    case MetricSpec::Kind::Diagonal: {
        json entries = json::array();
        for (const Polynomial& p : metric_spec.entries[0]) entries.push_back(poly_to_json(p));
        j["metric"] = {{"kind", "diagonal"}, {"entries", entries}};
        break;
    }
    case MetricSpec::Kind::Table: {
        json entries = json::array();
        for (const auto& row : metric_spec.entries) {
            json r = json::array();
            for (const Polynomial& p : row) r.push_back(poly_to_json(p));
            entries.push_back(r);
        }
        j["metric"] = {{"kind", "table"}, {"entries", entries}};
        break;
    }
    }

    switch (potential_spec.kind) {
    case PotentialSpec::Kind::None: j["potential"] = {{"kind", "none"}}; break;
    case PotentialSpec::Kind::Harmonic:
        j["potential"] = {{"kind", "harmonic"}, {"stiffness", potential_spec.stiffness}};
        break;
    case PotentialSpec::Kind::Poly:
        j["potential"] = {{"kind", "polynomial"}, {"terms", poly_to_json(potential_spec.poly)}};
        break;
    }

    Vec lower(dim), upper(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        lower[i] = chart.bounds[i].first;
        upper[i] = chart.bounds[i].second;
    }
    j["chart"] = {{"lower", lower}, {"upper", upper}};
    j["initial"] = {{"q0", q0}, {"qdot0", qdot0}, {"mu0", run.mu0}};
    j["run"] = {{"T", run.duration},
                {"h", run.step},
                {"seed", run.seed},
                {"tol_classify", run.tol_classify},
                {"tol_compat", run.tol_compat},
                {"tol_rank", run.tol_rank},
                {"n_samples", run.n_samples},
                {"n_random", run.n_random},
                {"project_velocity", run.project_velocity},
                {"compare_threshold", run.compare_threshold}};
    if (expected_class) j["expected_class"] = to_string(*expected_class);
    return j;
}

} // namespace nonholo
