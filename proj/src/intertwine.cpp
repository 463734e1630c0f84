#include "delrep/intertwine.hpp"

#include <algorithm>

#include <Eigen/SVD>

#include "delrep/errors.hpp"

namespace delrep {

namespace {

// Constraint rows for F r1(g) = r2(g) F with F a d2 x d1 matrix, vectorized
// column-major: (r1(g)^T kron I_d2 - I_d1 kron r2(g)) vec(F) = 0.
CMatrix constraint_matrix(const MatrixRep& r1, const MatrixRep& r2) {
    const int d1 = r1.dim, d2 = r2.dim;
    const int n = d1 * d2;
    const int g = static_cast<int>(r1.generators.size());
    CMatrix k(g * n, n);
    for (int a = 0; a < g; ++a) {
        const CMatrix& m1 = r1.generators[a].second;
        const CMatrix& m2 = r2.generators[a].second;
        if (m1.rows() != d1 || m1.cols() != d1 || m2.rows() != d2 || m2.cols() != d2)
            throw size_error("generator matrix size does not match declared dimension");
        for (int j = 0; j < d1; ++j)      // column of F
            for (int i = 0; i < d2; ++i)  // row of F
                for (int l = 0; l < d1; ++l)
                    for (int p = 0; p < d2; ++p) {
                        // coefficient of F(p,l) in (F m1 - m2 F)(i,j)
                        Cplx c(0.0, 0.0);
                        if (p == i) c += m1(l, j);
                        if (l == j) c -= m2(i, p);
                        k(a * n + (i + d2 * j), p + d2 * l) = c;
                    }
    }
    return k;
}

} // namespace

std::vector<CMatrix> hom_space(const MatrixRep& r1, const MatrixRep& r2, double tol) {
    if (r1.generators.size() != r2.generators.size())
        throw size_error("representations present different numbers of generators");
    const int d1 = r1.dim, d2 = r2.dim;
    const int n = d1 * d2;
    if (n == 0) return {};
    if (r1.generators.empty()) {
        // No constraints: every matrix intertwines; return the standard basis.
        std::vector<CMatrix> basis;
        for (int j = 0; j < d1; ++j)
            for (int i = 0; i < d2; ++i) {
                CMatrix e = CMatrix::Zero(d2, d1);
                e(i, j) = 1.0;
                basis.push_back(e);
            }
        return basis;
    }

    CMatrix k = constraint_matrix(r1, r2);
    Eigen::JacobiSVD<CMatrix> svd(k, Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double smax = sigma.size() ? sigma(0) : 0.0;
    const double cut = tol * std::max(smax, 1.0);

    int nullity = 0;
    for (int i = sigma.size() - 1; i >= 0 && sigma(i) < cut; --i) ++nullity;
    if (nullity < sigma.size() && nullity > 0) {
        const double below = sigma(sigma.size() - nullity);      // largest "zero"
        const double above = sigma(sigma.size() - nullity - 1);  // smallest kept
        if (below > 0.0 && above / below < 10.0)
            throw domain_error("ambiguous singular value gap in intertwiner search: " +
                               std::to_string(above) + " vs " + std::to_string(below));
    }
    // With at least one generator the stacked matrix has >= n rows, so thin V
    // carries all n right singular vectors and the full null space.
    std::vector<CMatrix> basis;
    for (int c = 0; c < nullity; ++c) {
        CVector v = svd.matrixV().col(svd.matrixV().cols() - 1 - c);
        CMatrix f(d2, d1);
        for (int j = 0; j < d1; ++j)
            for (int i = 0; i < d2; ++i) f(i, j) = v(i + d2 * j);
        basis.push_back(std::move(f));
    }
    std::reverse(basis.begin(), basis.end());
    return basis;
}

bool is_irreducible(const MatrixRep& r, double tol) {
    return hom_space(r, r, tol).size() == 1;
}

CMatrix unitarize(const CMatrix& theta, const MatrixRep& r1, const MatrixRep& r2) {
    if (theta.rows() != r2.dim || theta.cols() != r1.dim)
        throw size_error("intertwiner shape does not match the representations");
    if (theta.rows() != theta.cols())
        throw domain_error("polar unitarization needs equal dimensions");
    const double scale = theta.norm();
    if (scale == 0.0) throw domain_error("zero intertwiner");
    double resid = 0.0;
    for (std::size_t a = 0; a < r1.generators.size(); ++a)
        resid = std::max(resid, (theta * r1.generators[a].second -
                                 r2.generators[a].second * theta)
                                    .norm());
    if (resid / scale > 1e-6)
        throw domain_error("matrix does not intertwine: relative residual " +
                           std::to_string(resid / scale));

    CMatrix gram = theta.adjoint() * theta;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    const auto& ev = es.eigenvalues();
    const double emax = ev(ev.size() - 1);
    if (emax <= 0.0 || ev(0) < 1e-24 * emax)
        throw domain_error("intertwiner is numerically singular");
    Eigen::VectorXd inv_sqrt = ev.array().sqrt().inverse();
    CMatrix half = es.eigenvectors() * inv_sqrt.asDiagonal() *
                   es.eigenvectors().adjoint();
    return theta * half;
}

SpectralResolution spectral_resolution(const CMatrix& a, double cluster_tol) {
    if (a.rows() != a.cols()) throw size_error("spectral resolution needs a square matrix");
    const double scale = 1.0 + a.norm();
    if ((a - a.adjoint()).norm() > 1e-10 * scale)
        throw domain_error("matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<CMatrix> es((a + a.adjoint()) / 2.0);
    const auto& ev = es.eigenvalues();
    const CMatrix& q = es.eigenvectors();
    const int n = static_cast<int>(ev.size());
    const double gap = cluster_tol * scale;

    SpectralResolution out;
    CMatrix cumulative = CMatrix::Zero(n, n);
    int i = 0;
    while (i < n) {
        int j = i;
        double sum = 0.0;
        while (j < n && (j == i || ev(j) - ev(j - 1) <= gap)) sum += ev(j++);
        for (int c = i; c < j; ++c) cumulative += q.col(c) * q.col(c).adjoint();
        out.lambdas.push_back(sum / (j - i));
        out.projections.push_back(cumulative);
        i = j;
    }
    return out;
}

} // namespace delrep
