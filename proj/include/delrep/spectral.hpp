#pragma once

// Finite spectral truncations of the mode space V = d*(A^{2k+1}) with the
// norm ||a||_V^2 = sum sqrt(lambda_j) a_j^2, the complex structure J obtained
// by normalizing Jt = *d, and the symplectic pairing (a, Jb)_V = integral of
// a ^ db. Modes are stored L2-orthonormalized; on the circle the raw
// cos/sin modes carry L2-norm sqrt(pi), and that rescaling is where the
// factors of pi go.

#include <optional>
#include <vector>

#include "delrep/rational.hpp"

namespace delrep {

/// One orthonormalized eigenmode: positive eigenvalue of the Laplacian, the
/// partner index under Jt = *d, and the sign s_j in J psi_j = s_j psi_{p(j)}.
struct SpectralMode {
    Rational eigenvalue;
    std::size_t partner = 0;
    int j_sign = 0;
};

/// Coefficients with respect to the orthonormalized eigenbasis.
using ModeVec = std::vector<double>;
using RationalModeVec = std::vector<Rational>;

class SpectralModel {
public:
    SpectralModel() = default;
    /// Validates: eigenvalues positive, partner map is a fixed-point-free
    /// involution preserving eigenvalues, and s_j s_{p(j)} = -1 (so that
    /// applying the stored pair map twice gives -lambda, i.e. Jt^2 = -Delta).
    explicit SpectralModel(std::vector<SpectralMode> modes);

    std::size_t size() const { return modes_.size(); }
    const SpectralMode& mode(std::size_t j) const { return modes_[j]; }
    double sqrt_eigenvalue(std::size_t j) const { return sqrt_[j]; }

    /// Exact sqrt(lambda_j) when every eigenvalue is a square in Q (e.g. the
    /// circle, lambda = n^2); empty otherwise.
    bool has_exact_sqrt() const { return !exact_sqrt_.empty(); }
    const Rational& exact_sqrt(std::size_t j) const;

private:
    std::vector<SpectralMode> modes_;
    std::vector<double> sqrt_;
    std::vector<Rational> exact_sqrt_; // empty when some sqrt is irrational
};

/// Circle model: modes cos(n theta), sin(n theta) for n = 1..n_max
/// (orthonormalized), eigenvalue n^2, stored as indices 2(n-1), 2(n-1)+1.
/// *d = d/dtheta gives J cos = -sin, J sin = +cos.
SpectralModel circle_model(int n_max);

/// sum_j sqrt(lambda_j) a_j b_j; symmetric, positive definite.
double v_inner(const SpectralModel& m, const ModeVec& a, const ModeVec& b);

/// Coefficientwise J: (Ja)_{p(j)} = s_j a_j. J^2 = -1 and J is a
/// v_inner-isometry.
ModeVec apply_J(const SpectralModel& m, const ModeVec& a);

/// integral of a ^ db = v_inner(a, Jb); antisymmetric, and positive as
/// symplectic(Ja, a) for a != 0.
double symplectic(const SpectralModel& m, const ModeVec& a, const ModeVec& b);

/// Exact counterparts for models with rational sqrt(lambda); domain_error
/// otherwise.
Rational v_inner_exact(const SpectralModel& m, const RationalModeVec& a,
                       const RationalModeVec& b);
RationalModeVec apply_J_exact(const SpectralModel& m, const RationalModeVec& a);
Rational symplectic_exact(const SpectralModel& m, const RationalModeVec& a,
                          const RationalModeVec& b);

} // namespace delrep
