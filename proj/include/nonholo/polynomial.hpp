#pragma once

#include <cstddef>
#include <vector>

#include "nonholo/linalg.hpp"

namespace nonholo {

struct Monomial {
    double coef = 0.0;
    std::vector<unsigned> exps; // one exponent per coordinate
};

/// Sparse multivariate polynomial with exact partial derivatives. Used to
/// define constraint covectors, metrics, and potentials declaratively, so
/// built-in scenarios carry analytic Jacobians instead of finite differences.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::size_t dim, std::vector<Monomial> terms);

    static Polynomial zero(std::size_t dim) { return Polynomial(dim, {}); }
    static Polynomial constant(std::size_t dim, double c);
    /// coef * q^axis
    static Polynomial linear(std::size_t dim, std::size_t axis, double coef);

    [[nodiscard]] double operator()(const Vec& q) const;
    [[nodiscard]] Polynomial partial(std::size_t axis) const;

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] const std::vector<Monomial>& terms() const { return terms_; }

private:
    std::size_t dim_ = 0;
    std::vector<Monomial> terms_;
};

} // namespace nonholo
