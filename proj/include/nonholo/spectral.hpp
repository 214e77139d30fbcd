#pragma once

#include <cstddef>
#include <vector>

#include "nonholo/linalg.hpp"

namespace nonholo {

/**
 * Metric-generalized spectral data of a skew tensor M_AB.
 *
 * Solves (M^2)_AB e^B = lambda g_AB e^B with (M^2)_BD = sum M_BA g^{AC} M_CD.
 * All eigenvalues are non-positive; lambda_nu = -kappa_nu^2 and the rank of M
 * is the even count 2p of nonzero eigenvalues. Eigenvectors are stored as
 * covariant components, g-orthonormal, sorted by descending kappa, with the
 * largest-magnitude component made positive for deterministic output.
 *
 * The b-basis (built separately) pairs each positive kappa with a
 * two-dimensional invariant plane: M b_odd = kappa b_even and
 * M b_even = -kappa b_odd, with kernel eigenvectors appended unchanged.
 */
struct SkewSpectrum {
    std::size_t dim = 0;
    Vec eigenvalues;               // lambda_nu, ascending (most negative first)
    Vec kappas;                    // sqrt(-lambda_nu), descending, zeros thresholded
    std::size_t rank = 0;          // 2p
    std::vector<Vec> eigvecs_cov;  // e_nu covariant components
    std::vector<Vec> b_cov;        // b_mu covariant components (after build_b_basis)
    std::vector<double> pair_kappas; // kappa per pair nu = 1..p

    [[nodiscard]] std::size_t p() const { return rank / 2; }
    [[nodiscard]] bool has_b_basis() const { return !b_cov.empty(); }
    [[nodiscard]] std::size_t kernel_dim() const { return dim - rank; }
    /// Operator norm of M in the g inner product (largest kappa).
    [[nodiscard]] double operator_norm() const { return kappas.empty() ? 0.0 : kappas.front(); }
};

/**
 * Decompose the skew tensor M against the SPD metric g.
 *
 * Eigenvalues with kappa^2 <= tol_rank * max(kappa_max^2, 1) are zeroed;
 * throws NumericError if the surviving count is odd (a skew tensor has even
 * rank, an odd count signals a misconfigured threshold) or if an eigenvalue
 * is positive beyond the same threshold.
 */
SkewSpectrum skew_spectrum(const Mat& m, const Mat& g, double tol_rank = 1e-10);

/// Construct the paired b-basis and kernel completion; returns the augmented
/// spectrum. Re-orthogonalizes within degenerate eigenspaces and throws
/// NumericError only if that fails.
SkewSpectrum build_b_basis(SkewSpectrum spec, const Mat& m, const Mat& g);

struct BasisResiduals {
    double ortho = 0.0;    // max |(b_mu, b_nu) - delta|
    double meq_odd = 0.0;  // max |M b_odd - kappa b_even|
    double meq_even = 0.0; // max |M b_even + kappa b_odd|
    double eigen = 0.0;    // max |(M^2) g^{-1} b - lambda b|
};

/// Diagnostic residuals of the constructed basis against its defining
/// identities; all should be <= 1e-10 on well-conditioned inputs.
BasisResiduals verify_basis(const SkewSpectrum& spec, const Mat& m, const Mat& g);

/// (M^2)_BD = sum_{A,C} M_BA g^{AC} M_CD, the negative-semidefinite symmetric
/// square used in the eigenproblem (M g^{-1} M in matrix notation).
Mat skew_square(const Mat& m, const Mat& g);

} // namespace nonholo
