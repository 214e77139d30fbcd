#include "nonholo/polynomial.hpp"

#include <cmath>
#include <utility>

#include "nonholo/errors.hpp"

namespace nonholo {

Polynomial::Polynomial(std::size_t dim, std::vector<Monomial> terms)
    : dim_(dim), terms_(std::move(terms)) {
    for (const auto& t : terms_)
        if (t.exps.size() != dim_)
            throw ConfigError("Polynomial: monomial exponent count does not match dim");
}

Polynomial Polynomial::constant(std::size_t dim, double c) {
    if (c == 0.0) return zero(dim);
    return Polynomial(dim, {Monomial{c, std::vector<unsigned>(dim, 0)}});
}

Polynomial Polynomial::linear(std::size_t dim, std::size_t axis, double coef) {
    std::vector<unsigned> e(dim, 0);
    e[axis] = 1;
    return Polynomial(dim, {Monomial{coef, std::move(e)}});
}

double Polynomial::operator()(const Vec& q) const {
    if (q.size() != dim_) throw ConfigError("Polynomial: point dimension mismatch");
    double sum = 0.0;
    for (const auto& t : terms_) {
        double v = t.coef;
        for (std::size_t c = 0; c < dim_; ++c)
            for (unsigned k = 0; k < t.exps[c]; ++k) v *= q[c];
        sum += v;
    }
    return sum;
}

Polynomial Polynomial::partial(std::size_t axis) const {
    std::vector<Monomial> out;
    for (const auto& t : terms_) {
        if (t.exps[axis] == 0) continue;
        Monomial d = t;
        d.coef *= static_cast<double>(t.exps[axis]);
        d.exps[axis] -= 1;
        out.push_back(std::move(d));
    }
    return Polynomial(dim_, std::move(out));
}

} // namespace nonholo
