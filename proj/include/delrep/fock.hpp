#pragma once

// Truncated symmetric-algebra (Fock) model carrying the Heisenberg action
//   rho(v) eps_xi = exp(-1/2 <v+, vbar->_k - <xi, vbar->_k) eps_{xi + v+},
// where <x,y>_k = kappa sum x_i conj(y_i) and the W-coordinates of a real
// mode vector are scaled so that the composition scalar becomes exactly
// e^{2 pi i integral nu ^ d nu'}.
//
// Two evaluation paths are kept side by side:
//  - a symbolic one on the span of coherent vectors (scalars in closed form;
//    inner products through the Gram formula <eps_xi, eps_eta> =
//    exp(kappa <xi,eta>)), where the projective relation holds to rounding;
//  - a truncated matrix-free operator path on explicit coefficient vectors,
//    which drops overflowing degrees and attaches a norm-loss estimate.

#include <complex>
#include <map>
#include <vector>

#include "delrep/rational.hpp"
#include "delrep/spectral.hpp"

namespace delrep {

using Cplx = std::complex<double>;
/// Coordinates in the W factor of V_C = W + Wbar.
using WVec = std::vector<Cplx>;

class FockSpace {
public:
    /// kappa is the convention constant of the monomial inner product
    /// <e^m, e^m> = kappa^{|m|} prod m_i!; default 2.
    FockSpace(int n_modes, int degree, Rational kappa = Rational(2));

    int n_modes() const { return n_modes_; }
    int degree() const { return degree_; }
    const Rational& kappa() const { return kappa_; }
    double kappa_d() const { return kappa_dbl_; }

    std::size_t basis_size() const { return basis_.size(); }
    const std::vector<int>& multi_at(std::size_t idx) const { return basis_[idx]; }
    std::size_t index_of(const std::vector<int>& m) const; // throws if out of range
    bool in_range(const std::vector<int>& m) const;

    double norm_sq(std::size_t idx) const { return norm_sq_[idx]; }
    /// kappa^{|m|} prod m_i!, exact; accepts multi-indices beyond the degree
    /// bound (used for loss accounting).
    Rational monomial_norm_sq_exact(const std::vector<int>& m) const;

private:
    int n_modes_, degree_;
    Rational kappa_;
    double kappa_dbl_;
    std::vector<std::vector<int>> basis_; // graded order, vacuum first
    std::map<std::vector<int>, std::size_t> index_;
    std::vector<double> norm_sq_;
};

/// Coefficients over the truncated monomial basis. `truncated` marks that
/// some content fell off the degree bound; `norm_loss` is the accumulated
/// triangle-inequality estimate of what was dropped.
struct FockVec {
    std::vector<Cplx> coeff;
    bool truncated = false;
    double norm_loss = 0.0;
};

/// A coherent parameter; materializes to coefficients prod xi^m / m!.
struct CoherentVec {
    WVec xi;
};

FockVec vacuum(const FockSpace& f);
FockVec basis_vector(const FockSpace& f, const std::vector<int>& m);
FockVec from_coherent(const FockSpace& f, const CoherentVec& c);

FockVec add(const FockVec& x, const FockVec& y);
FockVec scale(const Cplx& c, const FockVec& x);

/// Sesquilinear, linear in the first argument.
Cplx inner(const FockSpace& f, const FockVec& x, const FockVec& y);
double norm(const FockSpace& f, const FockVec& x);

/// Creation (multiplication by e_i) and its kappa-adjoint a_i e^m =
/// kappa m_i e^{m - delta_i}; a_i eps_xi = kappa xi_i eps_xi.
FockVec create(const FockSpace& f, int i, const FockVec& x);
FockVec annihilate(const FockSpace& f, int i, const FockVec& x);

/// <eps_xi, eps_eta>: closed form exp(kappa <xi,eta>_W), the value of the
/// degree-truncated series, and the analytic tail bound
/// sum_{j>D} |kappa <xi,eta>|^j / j!.
struct CoherentInner {
    Cplx closed_form;
    Cplx truncated_value;
    double tail_bound;
};
CoherentInner coherent_inner(const FockSpace& f, const WVec& xi, const WVec& eta);

/// Heisenberg action on explicit coefficients. v_plus lies in W; the Wbar
/// component is passed via its conjugate w_minus_conj in W (for real
/// arguments w_minus_conj = v_plus). Complex parameters are allowed; then
/// nothing is unitary and norms may grow.
FockVec act(const FockSpace& f, const WVec& v_plus, const WVec& w_minus_conj,
            const FockVec& x);

/// Finite combinations of coherent vectors (the dense subspace E); scalars
/// stay in closed form and truncation happens only in materialize().
struct CoherentTerm {
    Cplx coeff;
    WVec xi;
};
using CoherentCombo = std::vector<CoherentTerm>;

CoherentCombo coherent_combo(const Cplx& c, const WVec& xi);
CoherentCombo combo_add(const CoherentCombo& a, const CoherentCombo& b);
CoherentCombo combo_scale(const Cplx& c, const CoherentCombo& a);
Cplx combo_inner(const FockSpace& f, const CoherentCombo& a, const CoherentCombo& b);
double combo_norm(const FockSpace& f, const CoherentCombo& a);
FockVec materialize(const FockSpace& f, const CoherentCombo& a);

CoherentCombo act_coherent(const FockSpace& f, const WVec& v_plus,
                           const WVec& w_minus_conj, const CoherentCombo& x);

/// The central scalar with rho(v) rho(v') = scalar * rho(v + v'):
/// exp((<v+, wm'>_k - <v'+, wm>_k) / 2).
Cplx heisenberg_scalar(const FockSpace& f, const WVec& vp, const WVec& wm,
                       const WVec& vp2, const WVec& wm2);

/// Runs both sides of the projective relation on eps_xi in closed form.
struct CocycleCheck {
    CoherentCombo lhs, rhs;
    double deviation; // ||lhs - rhs|| / ||rhs||
};
CocycleCheck cocycle_check(const FockSpace& f, const WVec& vp, const WVec& wm,
                           const WVec& vp2, const WVec& wm2, const WVec& xi);
/// Real-parameter convenience: v_minus = conjugate of v_plus on both factors.
CocycleCheck cocycle_check_real(const FockSpace& f, const WVec& v, const WVec& v2,
                                const WVec& xi);

/// W-coordinates of a real mode vector: per J-pair (c, s) (c the mode with
/// sign -1), xi = g lambda^{1/4} (nu_c - i nu_s) / sqrt(2) with
/// g = 2 sqrt(pi/kappa). This normalization makes heisenberg_scalar equal
/// e^{2 pi i symplectic(nu, nu')} on real vectors.
WVec w_coords(const SpectralModel& m, const ModeVec& nu, double kappa);

/// rho_lambda(eta, nu) = e^{2 pi i sum lambda_i eta_i} rho(w_coords(nu)):
/// the G0-representation with torus character lambda.
FockVec rho_lambda(const FockSpace& f, const SpectralModel& m,
                   const std::vector<long long>& lambda, const std::vector<QmodZ>& eta,
                   const ModeVec& nu, const FockVec& x);
CoherentCombo rho_lambda_coherent(const FockSpace& f, const SpectralModel& m,
                                  const std::vector<long long>& lambda,
                                  const std::vector<QmodZ>& eta, const ModeVec& nu,
                                  const CoherentCombo& x);

} // namespace delrep
