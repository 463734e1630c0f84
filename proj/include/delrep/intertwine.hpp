#pragma once

// Numeric intertwiner machinery for finite-dimensional (projective) unitary
// representations. For a projective rep, commuting with a generating set of
// the image is the same as commuting with the whole image, because the
// cocycle scalars cancel from both sides of the intertwining relation.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace delrep {

using Cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Representation presented by matrices of a generating set; labels are
/// carried for diagnostics only.
struct MatrixRep {
    int dim = 0;
    std::vector<std::pair<std::string, CMatrix>> generators;
};

/// Orthonormal basis (Frobenius inner product) of the space of F with
/// F r1(g) = r2(g) F for every generator, found as the SVD null space of the
/// stacked constraint matrix. The null/nonnull split must be clean: if the
/// singular values around the cut are separated by less than a factor 10 a
/// domain_error is raised rather than silently choosing a side.
std::vector<CMatrix> hom_space(const MatrixRep& r1, const MatrixRep& r2,
                               double tol = 1e-9);

/// Schur criterion: self-intertwiner space has dimension exactly 1.
bool is_irreducible(const MatrixRep& r, double tol = 1e-9);

/// Polar unitarization U = theta (theta* theta)^{-1/2} of an invertible
/// intertwiner between unitary representations; U intertwines the same pair.
/// Raises domain_error if theta does not intertwine (relative residual
/// > 1e-6) or is numerically singular.
CMatrix unitarize(const CMatrix& theta, const MatrixRep& r1, const MatrixRep& r2);

/// Resolution of the identity of a Hermitian matrix: distinct eigenvalues in
/// increasing order with the cumulative spectral projections
/// E_i = sum_{lambda_j <= lambda_i} P_j. E is increasing, E_last = I, and
/// A = sum_i lambda_i (E_i - E_{i-1}).
struct SpectralResolution {
    std::vector<double> lambdas;
    std::vector<CMatrix> projections; // cumulative
};
SpectralResolution spectral_resolution(const CMatrix& a, double cluster_tol = 1e-8);

} // namespace delrep
