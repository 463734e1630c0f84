#include "delrep/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "delrep/errors.hpp"

namespace delrep {

namespace {

constexpr std::size_t max_basis_size = 200000;

long long multi_degree(const std::vector<int>& m) {
    long long d = 0;
    for (int v : m) d += v;
    return d;
}

} // namespace

FockSpace::FockSpace(int n_modes, int degree, Rational kappa)
    : n_modes_(n_modes), degree_(degree), kappa_(std::move(kappa)) {
    if (n_modes < 1) throw validation_error("FockSpace: need at least one mode");
    if (degree < 0) throw validation_error("FockSpace: negative degree bound");
    if (kappa_ <= 0) throw validation_error("FockSpace: kappa must be positive");
    kappa_dbl_ = to_double(kappa_);

    // Graded enumeration, vacuum first; within a degree, lexicographic.
    std::vector<int> m(static_cast<std::size_t>(n_modes), 0);
    for (int d = 0; d <= degree; ++d) {
        std::function<void(int, int)> emit = [&](int pos, int left) {
            if (pos == n_modes - 1) {
                m[static_cast<std::size_t>(pos)] = left;
                basis_.push_back(m);
                return;
            }
            for (int v = left; v >= 0; --v) {
                m[static_cast<std::size_t>(pos)] = v;
                emit(pos + 1, left - v);
            }
            m[static_cast<std::size_t>(pos)] = 0;
        };
        emit(0, d);
        if (basis_.size() > max_basis_size)
            throw size_error("FockSpace: truncated basis exceeds " +
                             std::to_string(max_basis_size) + " monomials");
    }
    norm_sq_.reserve(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        index_[basis_[i]] = i;
        norm_sq_.push_back(to_double(monomial_norm_sq_exact(basis_[i])));
    }
}

std::size_t FockSpace::index_of(const std::vector<int>& m) const {
    auto it = index_.find(m);
    if (it == index_.end())
        throw domain_error("FockSpace: multi-index outside the truncated basis");
    return it->second;
}

bool FockSpace::in_range(const std::vector<int>& m) const {
    if (m.size() != static_cast<std::size_t>(n_modes_)) return false;
    for (int v : m)
        if (v < 0) return false;
    return multi_degree(m) <= degree_;
}

Rational FockSpace::monomial_norm_sq_exact(const std::vector<int>& m) const {
    Rational out(1);
    long long deg = 0;
    for (int v : m) {
        if (v < 0) throw domain_error("FockSpace: negative multi-index entry");
        deg += v;
        for (int j = 2; j <= v; ++j) out *= j;
    }
    for (long long j = 0; j < deg; ++j) out *= kappa_;
    return out;
}

FockVec vacuum(const FockSpace& f) {
    FockVec x;
    x.coeff.assign(f.basis_size(), Cplx(0.0));
    x.coeff[0] = Cplx(1.0);
    return x;
}

FockVec basis_vector(const FockSpace& f, const std::vector<int>& m) {
    FockVec x;
    x.coeff.assign(f.basis_size(), Cplx(0.0));
    x.coeff[f.index_of(m)] = Cplx(1.0);
    return x;
}

FockVec from_coherent(const FockSpace& f, const CoherentVec& c) {
    if (c.xi.size() != static_cast<std::size_t>(f.n_modes()))
        throw size_error("from_coherent: wrong number of W-coordinates");
    FockVec x;
    x.coeff.assign(f.basis_size(), Cplx(0.0));
    double s = 0.0;
    for (const Cplx& z : c.xi) s += std::norm(z);
    for (std::size_t idx = 0; idx < f.basis_size(); ++idx) {
        const std::vector<int>& m = f.multi_at(idx);
        Cplx v(1.0);
        for (int i = 0; i < f.n_modes(); ++i) {
            for (int j = 1; j <= m[static_cast<std::size_t>(i)]; ++j)
                v *= c.xi[static_cast<std::size_t>(i)] / static_cast<double>(j);
        }
        x.coeff[idx] = v;
    }
    // Dropped tail has norm^2 = sum_{j>D} (kappa s)^j / j! exactly.
    double t = f.kappa_d() * s;
    double tail = std::exp(t);
    double term = 1.0;
    for (int j = 0; j <= f.degree(); ++j) {
        tail -= term;
        term *= t / static_cast<double>(j + 1);
    }
    tail = std::max(tail, 0.0);
    if (tail > 0.0) {
        x.truncated = true;
        x.norm_loss = std::sqrt(tail);
    }
    return x;
}

FockVec add(const FockVec& x, const FockVec& y) {
    if (x.coeff.size() != y.coeff.size())
        throw size_error("add: mismatched Fock coefficient lengths");
    FockVec z = x;
    for (std::size_t i = 0; i < z.coeff.size(); ++i) z.coeff[i] += y.coeff[i];
    z.truncated = x.truncated || y.truncated;
    z.norm_loss = x.norm_loss + y.norm_loss;
    return z;
}

FockVec scale(const Cplx& c, const FockVec& x) {
    FockVec z = x;
    for (Cplx& v : z.coeff) v *= c;
    z.norm_loss = std::abs(c) * x.norm_loss;
    return z;
}

Cplx inner(const FockSpace& f, const FockVec& x, const FockVec& y) {
    if (x.coeff.size() != f.basis_size() || y.coeff.size() != f.basis_size())
        throw size_error("inner: coefficient length does not match the space");
    Cplx acc(0.0);
    for (std::size_t i = 0; i < f.basis_size(); ++i)
        acc += x.coeff[i] * std::conj(y.coeff[i]) * f.norm_sq(i);
    return acc;
}

double norm(const FockSpace& f, const FockVec& x) {
    return std::sqrt(std::max(0.0, inner(f, x, x).real()));
}

FockVec create(const FockSpace& f, int i, const FockVec& x) {
    if (i < 0 || i >= f.n_modes()) throw domain_error("create: mode index out of range");
    if (x.coeff.size() != f.basis_size())
        throw size_error("create: coefficient length does not match the space");
    FockVec y;
    y.coeff.assign(f.basis_size(), Cplx(0.0));
    y.truncated = x.truncated;
    y.norm_loss = x.norm_loss;
    for (std::size_t idx = 0; idx < f.basis_size(); ++idx) {
        if (x.coeff[idx] == Cplx(0.0)) continue;
        std::vector<int> m = f.multi_at(idx);
        m[static_cast<std::size_t>(i)] += 1;
        if (f.in_range(m)) {
            y.coeff[f.index_of(m)] += x.coeff[idx];
        } else {
            y.truncated = true;
            y.norm_loss += std::abs(x.coeff[idx]) *
                           std::sqrt(to_double(f.monomial_norm_sq_exact(m)));
        }
    }
    return y;
}

FockVec annihilate(const FockSpace& f, int i, const FockVec& x) {
    if (i < 0 || i >= f.n_modes()) throw domain_error("annihilate: mode index out of range");
    if (x.coeff.size() != f.basis_size())
        throw size_error("annihilate: coefficient length does not match the space");
    FockVec y;
    y.coeff.assign(f.basis_size(), Cplx(0.0));
    y.truncated = x.truncated;
    y.norm_loss = x.norm_loss;
    for (std::size_t idx = 0; idx < f.basis_size(); ++idx) {
        if (x.coeff[idx] == Cplx(0.0)) continue;
        std::vector<int> m = f.multi_at(idx);
        int mi = m[static_cast<std::size_t>(i)];
        if (mi == 0) continue;
        m[static_cast<std::size_t>(i)] = mi - 1;
        y.coeff[f.index_of(m)] += f.kappa_d() * static_cast<double>(mi) * x.coeff[idx];
    }
    return y;
}

namespace {

Cplx weighted_pairing(const FockSpace& f, const WVec& a, const WVec& b) {
    if (a.size() != b.size() || a.size() != static_cast<std::size_t>(f.n_modes()))
        throw size_error("Fock pairing: W-vector length does not match the space");
    Cplx acc(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
    return f.kappa_d() * acc;
}

// One application of the lowering field a(w) x = sum conj(w_i) a_i x.
FockVec lowering(const FockSpace& f, const WVec& w, const FockVec& x) {
    FockVec acc;
    acc.coeff.assign(f.basis_size(), Cplx(0.0));
    acc.truncated = x.truncated;
    acc.norm_loss = x.norm_loss;
    for (int i = 0; i < f.n_modes(); ++i) {
        if (w[static_cast<std::size_t>(i)] == Cplx(0.0)) continue;
        FockVec part = annihilate(f, i, x);
        Cplx c = std::conj(w[static_cast<std::size_t>(i)]);
        for (std::size_t k = 0; k < acc.coeff.size(); ++k)
            acc.coeff[k] += c * part.coeff[k];
    }
    return acc;
}

FockVec raising(const FockSpace& f, const WVec& v, const FockVec& x) {
    FockVec acc;
    acc.coeff.assign(f.basis_size(), Cplx(0.0));
    acc.truncated = x.truncated;
    acc.norm_loss = x.norm_loss;
    bool hit = false;
    for (int i = 0; i < f.n_modes(); ++i) {
        if (v[static_cast<std::size_t>(i)] == Cplx(0.0)) continue;
        FockVec part = create(f, i, x);
        Cplx c = v[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < acc.coeff.size(); ++k)
            acc.coeff[k] += c * part.coeff[k];
        if (part.truncated && !x.truncated) hit = true;
        acc.norm_loss += std::abs(c) * (part.norm_loss - x.norm_loss);
    }
    if (hit) acc.truncated = true;
    return acc;
}

bool is_zero_vec(const FockVec& x) {
    for (const Cplx& c : x.coeff)
        if (c != Cplx(0.0)) return false;
    return true;
}

// exp(step) x summed until the series dies out; on the truncated space both
// the raising and lowering series terminate after degree+1 applications.
FockVec exp_series(const FockSpace& f, const FockVec& x,
                   const std::function<FockVec(const FockVec&)>& step) {
    FockVec sum = x;
    FockVec term = x;
    // x's own loss is already in sum; the term only tracks fresh drops
    term.norm_loss = 0.0;
    term.truncated = false;
    for (int k = 1; k <= f.degree() + 1; ++k) {
        term = step(term);
        double inv = 1.0 / static_cast<double>(k);
        for (Cplx& c : term.coeff) c *= inv;
        term.norm_loss *= inv;
        sum.truncated = sum.truncated || term.truncated;
        sum.norm_loss += term.norm_loss;
        for (std::size_t j = 0; j < sum.coeff.size(); ++j) sum.coeff[j] += term.coeff[j];
        if (is_zero_vec(term) && !term.truncated) break;
        // reset the per-term bookkeeping so losses are not double counted
        term.norm_loss = 0.0;
        term.truncated = false;
    }
    return sum;
}

} // namespace

CoherentInner coherent_inner(const FockSpace& f, const WVec& xi, const WVec& eta) {
    if (xi.size() != eta.size() || xi.size() != static_cast<std::size_t>(f.n_modes()))
        throw size_error("coherent_inner: W-vector length does not match the space");
    Cplx z(0.0);
    for (std::size_t i = 0; i < xi.size(); ++i) z += xi[i] * std::conj(eta[i]);
    z *= f.kappa_d();

    CoherentInner out;
    out.closed_form = std::exp(z);
    Cplx partial(0.0), term(1.0);
    for (int j = 0; j <= f.degree(); ++j) {
        partial += term;
        term *= z / static_cast<double>(j + 1);
    }
    out.truncated_value = partial;

    double t = std::abs(z);
    double tail = std::exp(t);
    double pw = 1.0;
    for (int j = 0; j <= f.degree(); ++j) {
        tail -= pw;
        pw *= t / static_cast<double>(j + 1);
    }
    out.tail_bound = std::max(tail, 0.0);
    return out;
}

FockVec act(const FockSpace& f, const WVec& v_plus, const WVec& w_minus_conj,
            const FockVec& x) {
    if (v_plus.size() != static_cast<std::size_t>(f.n_modes()) ||
        w_minus_conj.size() != static_cast<std::size_t>(f.n_modes()))
        throw size_error("act: W-vector length does not match the space");
    Cplx scalar = std::exp(-0.5 * weighted_pairing(f, v_plus, w_minus_conj));
    FockVec y = exp_series(f, x, [&](const FockVec& t) {
        FockVec s = lowering(f, w_minus_conj, t);
        for (Cplx& c : s.coeff) c = -c;
        return s;
    });
    y = exp_series(f, y, [&](const FockVec& t) { return raising(f, v_plus, t); });
    return scale(scalar, y);
}

CoherentCombo coherent_combo(const Cplx& c, const WVec& xi) {
    return CoherentCombo{CoherentTerm{c, xi}};
}

CoherentCombo combo_add(const CoherentCombo& a, const CoherentCombo& b) {
    CoherentCombo out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

CoherentCombo combo_scale(const Cplx& c, const CoherentCombo& a) {
    CoherentCombo out = a;
    for (CoherentTerm& t : out) t.coeff *= c;
    return out;
}

Cplx combo_inner(const FockSpace& f, const CoherentCombo& a, const CoherentCombo& b) {
    Cplx acc(0.0);
    for (const CoherentTerm& s : a)
        for (const CoherentTerm& t : b)
            acc += s.coeff * std::conj(t.coeff) * coherent_inner(f, s.xi, t.xi).closed_form;
    return acc;
}

double combo_norm(const FockSpace& f, const CoherentCombo& a) {
    return std::sqrt(std::max(0.0, combo_inner(f, a, a).real()));
}

FockVec materialize(const FockSpace& f, const CoherentCombo& a) {
    FockVec out;
    out.coeff.assign(f.basis_size(), Cplx(0.0));
    for (const CoherentTerm& t : a)
        out = add(out, scale(t.coeff, from_coherent(f, CoherentVec{t.xi})));
    return out;
}

CoherentCombo act_coherent(const FockSpace& f, const WVec& v_plus,
                           const WVec& w_minus_conj, const CoherentCombo& x) {
    if (v_plus.size() != static_cast<std::size_t>(f.n_modes()) ||
        w_minus_conj.size() != static_cast<std::size_t>(f.n_modes()))
        throw size_error("act_coherent: W-vector length does not match the space");
    Cplx base = -0.5 * weighted_pairing(f, v_plus, w_minus_conj);
    CoherentCombo out;
    out.reserve(x.size());
    for (const CoherentTerm& t : x) {
        Cplx shift(0.0);
        for (std::size_t i = 0; i < t.xi.size(); ++i)
            shift += t.xi[i] * std::conj(w_minus_conj[i]);
        shift *= f.kappa_d();
        WVec moved = t.xi;
        for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += v_plus[i];
        out.push_back(CoherentTerm{t.coeff * std::exp(base - shift), std::move(moved)});
    }
    return out;
}

Cplx heisenberg_scalar(const FockSpace& f, const WVec& vp, const WVec& wm,
                       const WVec& vp2, const WVec& wm2) {
    Cplx s = 0.5 * (weighted_pairing(f, vp, wm2) - weighted_pairing(f, vp2, wm));
    return std::exp(s);
}

CocycleCheck cocycle_check(const FockSpace& f, const WVec& vp, const WVec& wm,
                           const WVec& vp2, const WVec& wm2, const WVec& xi) {
    CocycleCheck rep;
    CoherentCombo start = coherent_combo(Cplx(1.0), xi);
    rep.lhs = act_coherent(f, vp, wm, act_coherent(f, vp2, wm2, start));

    WVec vsum = vp, wsum = wm;
    for (std::size_t i = 0; i < vsum.size(); ++i) {
        vsum[i] += vp2[i];
        wsum[i] += wm2[i];
    }
    Cplx c = heisenberg_scalar(f, vp, wm, vp2, wm2);
    rep.rhs = combo_scale(c, act_coherent(f, vsum, wsum, start));

    // Both sides are multiples of the coherent vector at the same shifted
    // parameter (xi + v+ + v'+, associated differently), so the relative norm
    // distance reduces to the relative coefficient distance. Going through
    // the Gram form instead would cancel catastrophically once the entries
    // exp(kappa <mu, mu>) get large.
    rep.rhs[0].xi = rep.lhs[0].xi;
    Cplx a = rep.lhs[0].coeff;
    Cplx b = rep.rhs[0].coeff;
    double bn = std::abs(b);
    rep.deviation = bn > 0.0 ? std::abs(a - b) / bn : std::abs(a - b);
    return rep;
}

CocycleCheck cocycle_check_real(const FockSpace& f, const WVec& v, const WVec& v2,
                                const WVec& xi) {
    return cocycle_check(f, v, v, v2, v2, xi);
}

WVec w_coords(const SpectralModel& m, const ModeVec& nu, double kappa) {
    if (m.size() % 2 != 0)
        throw validation_error("w_coords: spectral truncation must pair up");
    if (nu.size() > m.size())
        throw size_error("w_coords: mode vector longer than the spectral truncation");
    if (kappa <= 0.0) throw validation_error("w_coords: kappa must be positive");
    const double g = 2.0 * std::sqrt(std::acos(-1.0) / kappa);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    auto coeff = [&](std::size_t j) {
        return j < nu.size() ? nu[j] : 0.0;
    };
    WVec out;
    out.reserve(m.size() / 2);
    for (std::size_t j = 0; j < m.size(); ++j) {
        std::size_t p = m.mode(j).partner;
        if (p < j) continue;
        std::size_t c = m.mode(j).j_sign < 0 ? j : p;
        std::size_t s = m.mode(j).j_sign < 0 ? p : j;
        double quarter = std::sqrt(m.sqrt_eigenvalue(j));
        out.push_back(g * quarter * inv_sqrt2 * Cplx(coeff(c), -coeff(s)));
    }
    return out;
}

namespace {

Cplx torus_character(const std::vector<long long>& lambda, const std::vector<QmodZ>& eta) {
    if (lambda.size() != eta.size())
        throw size_error("rho_lambda: lambda and eta have different lengths");
    QmodZ total;
    for (std::size_t i = 0; i < lambda.size(); ++i) total = total + eta[i].times(lambda[i]);
    return total.unit();
}

} // namespace

FockVec rho_lambda(const FockSpace& f, const SpectralModel& m,
                   const std::vector<long long>& lambda, const std::vector<QmodZ>& eta,
                   const ModeVec& nu, const FockVec& x) {
    WVec v = w_coords(m, nu, f.kappa_d());
    return scale(torus_character(lambda, eta), act(f, v, v, x));
}

CoherentCombo rho_lambda_coherent(const FockSpace& f, const SpectralModel& m,
                                  const std::vector<long long>& lambda,
                                  const std::vector<QmodZ>& eta, const ModeVec& nu,
                                  const CoherentCombo& x) {
    WVec v = w_coords(m, nu, f.kappa_d());
    return combo_scale(torus_character(lambda, eta), act_coherent(f, v, v, x));
}

} // namespace delrep
