#include "nonholo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>


namespace nonholo {
namespace {

void check_skew(const Mat& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw ConfigError("skew_spectrum: matrix not square");
    const double scale = std::max(m.max_abs(), 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (std::abs(m(i, j) + m(j, i)) > 1e-10 * scale)
                throw ConfigError("skew_spectrum: input tensor is not antisymmetric");
}

Mat antisymmetrize(const Mat& m) {
    const std::size_t n = m.rows();
    Mat s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (m(i, j) - m(j, i));
            s(i, j) = v;
            s(j, i) = -v;
        }
    return s;
}

void fix_sign(Vec& v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0.0)
        for (double& x : v) x = -x;
}

double ginner(const Cholesky& gchol, const Vec& u_cov, const Vec& v_cov) {
    return dot(gchol.solve(u_cov), v_cov);
}

} // namespace

Mat skew_square(const Mat& m, const Mat& g) {
    const Cholesky gchol(g);
    const Mat m2 = mat_mul(m, gchol.solve(m));
    // Exactly symmetric storage.
    const std::size_t n = m.rows();
    Mat s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = m2(i, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (m2(i, j) + m2(j, i));
            s(i, j) = s(j, i) = v;
        }
    }
    return s;
}

SkewSpectrum skew_spectrum(const Mat& m, const Mat& g, double tol_rank) {
    check_skew(m);
    const Mat ms = antisymmetrize(m);
    const std::size_t n = ms.rows();
    if (g.rows() != n || g.cols() != n) throw ConfigError("skew_spectrum: metric shape mismatch");

    const Mat m2 = skew_square(ms, g);
    const GenSymEigen eig = generalized_eigensymm(m2, g); // values ascending = kappa descending

    SkewSpectrum spec;
    spec.dim = n;
    spec.eigenvalues.resize(n);
    spec.kappas.resize(n);
    spec.eigvecs_cov.resize(n);

    double kappa2_max = 0.0;
    for (double lam : eig.values) kappa2_max = std::max(kappa2_max, -lam);
    const double cut = tol_rank * std::max(kappa2_max, 1.0);

    std::size_t nonzero = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double lam = eig.values[k];
        if (lam > cut) throw NumericError("skew_spectrum: positive eigenvalue beyond tolerance");
        if (-lam <= cut) {
            lam = 0.0;
            spec.kappas[k] = 0.0;
        } else {
            spec.kappas[k] = std::sqrt(-lam);
            ++nonzero;
        }
        spec.eigenvalues[k] = lam;
        Vec e(n);
        for (std::size_t i = 0; i < n; ++i) e[i] = eig.vectors_cov(i, k);
        fix_sign(e);
        spec.eigvecs_cov[k] = std::move(e);
    }
    if (nonzero % 2 != 0)
        throw NumericError("skew_spectrum: odd count of nonzero eigenvalues; "
                           "rank of a skew tensor is even, adjust tol_rank");
    spec.rank = nonzero;
    return spec;
}

SkewSpectrum build_b_basis(SkewSpectrum spec, const Mat& m, const Mat& g) {
    const std::size_t n = spec.dim;
    const Mat ms = antisymmetrize(m);
    const Cholesky gchol(g);

    spec.b_cov.clear();
    spec.pair_kappas.clear();

    // Working copies of the nonzero-kappa eigenvectors, consumed greedily:
    // take the leading one as b_odd, derive b_even = M b_odd / kappa, then
    // re-orthonormalize the remainder against the new pair. One working
    // vector becomes linearly dependent per pair and is dropped.
    std::vector<std::pair<double, Vec>> working;
    for (std::size_t k = 0; k < spec.rank; ++k)
        working.emplace_back(spec.kappas[k], spec.eigvecs_cov[k]);

    while (!working.empty()) {
        const double kappa = working.front().first;
        const Vec b_odd = working.front().second;
        working.erase(working.begin());

        Vec b_even = vec_scale(mat_vec(ms, gchol.solve(b_odd)), 1.0 / kappa);
        for (const Vec& b : spec.b_cov) vec_axpy(b_even, -ginner(gchol, b, b_even), b);
        vec_axpy(b_even, -ginner(gchol, b_odd, b_even), b_odd);
        const double nrm = std::sqrt(std::max(ginner(gchol, b_even, b_even), 0.0));
        if (nrm < 0.5)
            throw NumericError("build_b_basis: degenerate pairing failed to produce an "
                               "orthogonal partner vector");
        b_even = vec_scale(b_even, 1.0 / nrm);

        spec.b_cov.push_back(b_odd);
        spec.b_cov.push_back(b_even);
        spec.pair_kappas.push_back(kappa);

        std::vector<std::pair<double, Vec>> kept;
        for (auto& [kap, e] : working) {
            vec_axpy(e, -ginner(gchol, b_odd, e), b_odd);
            vec_axpy(e, -ginner(gchol, b_even, e), b_even);
            for (const auto& [kk, prev] : kept) vec_axpy(e, -ginner(gchol, prev, e), prev);
            const double en = std::sqrt(std::max(ginner(gchol, e, e), 0.0));
            if (en < 1e-6) continue; // absorbed by the new pair
            kept.emplace_back(kap, vec_scale(e, 1.0 / en));
        }
        if (kept.size() != working.size() && kept.size() + 1 != working.size())
            throw NumericError("build_b_basis: eigenspace re-orthogonalization lost rank");
        working = std::move(kept);
    }

    if (spec.b_cov.size() != spec.rank)
        throw NumericError("build_b_basis: pairing did not exhaust the nonzero eigenspace");

    for (std::size_t k = spec.rank; k < n; ++k) spec.b_cov.push_back(spec.eigvecs_cov[k]);
    return spec;
}

BasisResiduals verify_basis(const SkewSpectrum& spec, const Mat& m, const Mat& g) {
    if (!spec.has_b_basis()) throw ConfigError("verify_basis: b-basis not built");
    const std::size_t n = spec.dim;
    const Mat ms = antisymmetrize(m);
    const Cholesky gchol(g);
    const Mat m2 = skew_square(ms, g);

    BasisResiduals r;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double delta = (i == j) ? 1.0 : 0.0;
            r.ortho = std::max(r.ortho,
                               std::abs(ginner(gchol, spec.b_cov[i], spec.b_cov[j]) - delta));
        }

    for (std::size_t nu = 0; nu < spec.p(); ++nu) {
        const double kappa = spec.pair_kappas[nu];
        const Vec& bo = spec.b_cov[2 * nu];
        const Vec& be = spec.b_cov[2 * nu + 1];
        const Vec mo = mat_vec(ms, gchol.solve(bo));
        const Vec me = mat_vec(ms, gchol.solve(be));
        r.meq_odd = std::max(r.meq_odd, max_abs(vec_sub(mo, vec_scale(be, kappa))));
        r.meq_even = std::max(r.meq_even, max_abs(vec_add(me, vec_scale(bo, kappa))));
    }

    for (std::size_t mu = 0; mu < n; ++mu) {
        const double lam = (mu < spec.rank)
                               ? -spec.pair_kappas[mu / 2] * spec.pair_kappas[mu / 2]
                               : 0.0;
        const Vec img = mat_vec(m2, gchol.solve(spec.b_cov[mu]));
        r.eigen = std::max(r.eigen, max_abs(vec_sub(img, vec_scale(spec.b_cov[mu], lam))));
    }
    return r;
}

} // namespace nonholo
