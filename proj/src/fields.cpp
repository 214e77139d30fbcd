#include "nonholo/fields.hpp"

#include <memory>
#include <utility>

namespace nonholo {

ConstraintForm polynomial_constraint(std::vector<Polynomial> components) {
    if (components.empty()) throw ConfigError("polynomial_constraint: no components");
    const std::size_t n = components.size();
    for (const auto& p : components)
        if (p.dim() != n) throw ConfigError("polynomial_constraint: component dim mismatch");

    auto comps = std::make_shared<std::vector<Polynomial>>(std::move(components));
    auto partials = std::make_shared<std::vector<std::vector<Polynomial>>>();
    partials->reserve(n);
    for (const auto& p : *comps) {
        std::vector<Polynomial> row;
        for (std::size_t c = 0; c < n; ++c) row.push_back(p.partial(c));
        partials->push_back(std::move(row));
    }

    ConstraintForm a;
    a.dim = n;
    a.eval = [comps, n](const Vec& q) {
        Vec out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = (*comps)[i](q);
        return out;
    };
    a.jacobian = [partials, n](const Vec& q) {
        Mat j(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < n; ++c) j(i, c) = (*partials)[i][c](q);
        return j;
    };
    return a;
}

MetricField polynomial_diagonal_metric(std::vector<Polynomial> diagonal) {
    const std::size_t n = diagonal.size();
    std::vector<std::vector<Polynomial>> table(n);
    for (std::size_t i = 0; i < n; ++i) {
        table[i].reserve(n);
        for (std::size_t j = 0; j < n; ++j)
            table[i].push_back(i == j ? diagonal[i] : Polynomial::zero(n));
    }
    return polynomial_metric(std::move(table));
}

MetricField polynomial_metric(std::vector<std::vector<Polynomial>> entries) {
    const std::size_t n = entries.size();
    if (n == 0) throw ConfigError("polynomial_metric: empty table");
    for (auto& row : entries)
        if (row.size() != n) throw ConfigError("polynomial_metric: table not square");
    // Mirror the upper triangle so the field is symmetric by construction.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) entries[i][j] = entries[j][i];

    auto table = std::make_shared<std::vector<std::vector<Polynomial>>>(std::move(entries));
    auto dtable = std::make_shared<std::vector<std::vector<std::vector<Polynomial>>>>();
    dtable->resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        (*dtable)[c].resize(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                (*dtable)[c][i].push_back((*table)[i][j].partial(c));
    }

    MetricField g;
    g.dim = n;
    g.eval = [table, n](const Vec& q) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = (*table)[i][j](q);
        return m;
    };
    g.partials = [dtable, n](const Vec& q) {
        std::vector<Mat> dg(n, Mat(n, n));
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) dg[c](i, j) = (*dtable)[c][i][j](q);
        return dg;
    };
    return g;
}

ScalarField polynomial_potential(Polynomial v) {
    const std::size_t n = v.dim();
    auto poly = std::make_shared<Polynomial>(std::move(v));
    auto grads = std::make_shared<std::vector<Polynomial>>();
    for (std::size_t c = 0; c < n; ++c) grads->push_back(poly->partial(c));

    ScalarField f;
    f.value = [poly](const Vec& q) { return (*poly)(q); };
    f.gradient = [grads, n](const Vec& q) {
        Vec g(n);
        for (std::size_t c = 0; c < n; ++c) g[c] = (*grads)[c](q);
        return g;
    };
    return f;
}

ScalarField harmonic_potential(std::size_t dim, double stiffness) {
    std::vector<Monomial> terms;
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<unsigned> e(dim, 0);
        e[c] = 2;
        terms.push_back(Monomial{0.5 * stiffness, std::move(e)});
    }
    return polynomial_potential(Polynomial(dim, std::move(terms)));
}

} // namespace nonholo
