#include "delrep/induced.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "delrep/errors.hpp"

namespace delrep {

namespace {

constexpr double tau_pi = 6.283185307179586476925286766559;

std::size_t b_sz(const ManifoldData& m) { return static_cast<std::size_t>(m.b); }

std::string index_str(const SlotIndex& xi) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < xi.size(); ++i) os << (i ? "," : "") << xi[i];
    os << ")";
    return os.str();
}

SlotIndex shifted(const SlotIndex& xi, const std::vector<long long>& c) {
    SlotIndex out = xi;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i];
    return out;
}

SlotIndex negated(const SlotIndex& xi) {
    SlotIndex out = xi;
    for (long long& v : out) v = -v;
    return out;
}

// sum_{i,j} c_i d_j sigma_free[i][j], exact
QmodZ sigma_pair(const ManifoldData& m, const std::vector<long long>& c,
                 const std::vector<long long>& d) {
    QmodZ acc;
    for (std::size_t i = 0; i < b_sz(m); ++i) {
        if (c[i] == 0) continue;
        for (std::size_t j = 0; j < b_sz(m); ++j) {
            if (d[j] == 0) continue;
            acc = acc + m.sigma_free[i][j].times(Int(c[i]) * Int(d[j]));
        }
    }
    return acc;
}

// eta . (P c), exact
QmodZ eta_dot_pc(const ManifoldData& m, const std::vector<QmodZ>& eta,
                 const std::vector<long long>& c) {
    QmodZ acc;
    for (std::size_t i = 0; i < b_sz(m); ++i) {
        Int pc(0);
        for (std::size_t j = 0; j < b_sz(m); ++j) pc += m.pairing.at(i, j) * Int(c[j]);
        acc = acc + eta[i].times(pc);
    }
    return acc;
}

std::vector<long long> slot_parameter(const ManifoldData& m,
                                      const std::vector<long long>& lambda,
                                      const SlotIndex& xi) {
    std::vector<long long> p = s_hom(m, xi);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = lambda[i] + 2 * p[i];
    return p;
}

bool nu_is_zero(const ModeVec& nu) {
    for (double x : nu)
        if (x != 0.0) return false;
    return true;
}

// (lambda + 2 P xi) . eta, exact
QmodZ character_phase(const ManifoldData& m, const std::vector<long long>& lambda,
                      const SlotIndex& xi, const std::vector<QmodZ>& eta) {
    std::vector<long long> p = slot_parameter(m, lambda, xi);
    QmodZ acc;
    for (std::size_t i = 0; i < eta.size(); ++i) acc = acc + eta[i].times(p[i]);
    return acc;
}

// exact slot phase of the action at the output slot xi
QmodZ action_phase(const ManifoldData& m, const std::vector<long long>& lambda,
                   const GElement& f, const SlotIndex& xi) {
    const std::vector<long long>& c = f.c_free;
    QmodZ phi = sigma_pair(m, c, xi) - eta_dot_pc(m, f.eta, c) - sigma_pair(m, c, c);
    return phi + character_phase(m, lambda, xi, f.eta);
}

FockVec apply_spectral(const InducedSpace& sp, const ModeVec& nu, const FockVec& x) {
    if (nu.empty() || nu_is_zero(nu)) return x;
    WVec w = w_coords(sp.model, nu, sp.fock.kappa_d());
    return act(sp.fock, w, w, x);
}

void check_element_shape(const InducedSpace& sp, const GElement& f, const char* who) {
    if (f.eta.size() != b_sz(sp.data) || f.c_free.size() != b_sz(sp.data))
        throw domain_error(std::string(who) + ": element coordinates do not match b");
    if (f.c_tor.residues.size() != sp.data.torsion.rank())
        throw domain_error(std::string(who) + ": torsion coordinates do not match the group");
}

FockVec materialized(const PhasedVec& pv) { return scale(pv.phase.unit(), pv.vec); }

double norm_sq_of(const FockSpace& f, const FockVec& x) {
    double n = norm(f, x);
    return n * n;
}

} // namespace

bool Window::contains(const SlotIndex& xi) const {
    if (xi.size() != static_cast<std::size_t>(b))
        throw domain_error("window: index has wrong length");
    for (long long v : xi)
        if (v < -static_cast<long long>(radius) || v > static_cast<long long>(radius))
            return false;
    return true;
}

std::vector<SlotIndex> Window::all_indices() const {
    if (b < 0 || radius < 1) throw domain_error("window: b >= 0 and radius >= 1 required");
    std::vector<SlotIndex> out;
    SlotIndex xi(static_cast<std::size_t>(b), -static_cast<long long>(radius));
    while (true) {
        out.push_back(xi);
        std::size_t pos = static_cast<std::size_t>(b);
        while (pos > 0) {
            --pos;
            if (++xi[pos] <= radius) break;
            xi[pos] = -static_cast<long long>(radius);
            if (pos == 0) return out;
        }
        if (b == 0) return out;
    }
}

std::size_t Window::size() const {
    std::size_t n = 1;
    for (int i = 0; i < b; ++i) n *= static_cast<std::size_t>(2 * radius + 1);
    return n;
}

void require_compatible(const InducedSpace& sp, const Section& s) {
    if (s.lambda.size() != b_sz(sp.data))
        throw domain_error("section: lambda length does not match b");
    for (const auto& [xi, pv] : s.slots) {
        if (!sp.window.contains(xi))
            throw window_overflow("section: slot outside the window: " + index_str(xi), xi);
        if (pv.vec.coeff.size() != sp.fock.basis_size())
            throw domain_error("section: Fock coefficient length mismatch");
    }
}

void require_compatible(const InducedSpace& sp, const FiniteProjRep& pi,
                        const FullSection& s) {
    if (s.lambda.size() != b_sz(sp.data))
        throw domain_error("section: lambda length does not match b");
    if (pi.group() != sp.data.torsion)
        throw domain_error("section: finite factor lives on a different torsion group");
    if (s.dim_v != pi.dim())
        throw domain_error("section: V dimension does not match the finite factor");
    for (const auto& [xi, comps] : s.slots) {
        if (!sp.window.contains(xi))
            throw window_overflow("section: slot outside the window: " + index_str(xi), xi);
        if (comps.size() != static_cast<std::size_t>(s.dim_v))
            throw domain_error("section: component count mismatch");
        for (const PhasedVec& pv : comps)
            if (pv.vec.coeff.size() != sp.fock.basis_size())
                throw domain_error("section: Fock coefficient length mismatch");
    }
}

double section_norm(const InducedSpace& sp, const Section& s) {
    double acc = 0.0;
    for (const auto& [xi, pv] : s.slots) acc += norm_sq_of(sp.fock, pv.vec);
    return std::sqrt(acc);
}

double section_norm(const InducedSpace& sp, const FullSection& s) {
    double acc = 0.0;
    for (const auto& [xi, comps] : s.slots)
        for (const PhasedVec& pv : comps) acc += norm_sq_of(sp.fock, pv.vec);
    return std::sqrt(acc);
}

double section_distance(const InducedSpace& sp, const Section& a, const Section& b) {
    double acc = 0.0;
    for (const auto& [xi, pv] : a.slots) {
        auto it = b.slots.find(xi);
        FockVec diff = it == b.slots.end()
                           ? materialized(pv)
                           : add(materialized(pv), scale(-1.0, materialized(it->second)));
        acc += norm_sq_of(sp.fock, diff);
    }
    for (const auto& [xi, pv] : b.slots)
        if (!a.slots.count(xi)) acc += norm_sq_of(sp.fock, pv.vec);
    return std::sqrt(acc);
}

double section_distance(const InducedSpace& sp, const FullSection& a,
                        const FullSection& b) {
    double acc = 0.0;
    for (const auto& [xi, comps] : a.slots) {
        auto it = b.slots.find(xi);
        for (std::size_t j = 0; j < comps.size(); ++j) {
            FockVec diff =
                it == b.slots.end()
                    ? materialized(comps[j])
                    : add(materialized(comps[j]), scale(-1.0, materialized(it->second[j])));
            acc += norm_sq_of(sp.fock, diff);
        }
    }
    for (const auto& [xi, comps] : b.slots)
        if (!a.slots.count(xi))
            for (const PhasedVec& pv : comps) acc += norm_sq_of(sp.fock, pv.vec);
    return std::sqrt(acc);
}

Section act_induced(const InducedSpace& sp, const GElement& f, const Section& phi) {
    check_element_shape(sp, f, "act_induced");
    if (!f.c_tor.is_zero())
        throw domain_error("act_induced: torsion part present; use act_full");
    if (phi.lambda.size() != b_sz(sp.data))
        throw domain_error("act_induced: lambda length does not match b");

    Section out;
    out.lambda = phi.lambda;
    for (const auto& [xi_src, pv] : phi.slots) {
        SlotIndex xi = shifted(xi_src, f.c_free);
        if (!sp.window.contains(xi))
            throw window_overflow("act_induced: slot escapes the window at " + index_str(xi),
                                  xi);
        PhasedVec moved;
        moved.phase = pv.phase + action_phase(sp.data, phi.lambda, f, xi);
        moved.vec = apply_spectral(sp, f.nu, pv.vec);
        out.slots.emplace(std::move(xi), std::move(moved));
    }
    return out;
}

namespace {

// pi(t) on the component vector, exact permutation when available
std::vector<PhasedVec> apply_finite(const FiniteProjRep& pi, const GroupElement& t,
                                    const std::vector<PhasedVec>& comps) {
    if (t.is_zero()) return comps;
    std::vector<PhasedVec> out(comps.size());
    if (pi.is_exact()) {
        const PhasePerm& p = pi.exact_perm(t);
        for (std::size_t j = 0; j < comps.size(); ++j) {
            out[p.row[j]].phase = comps[j].phase + p.phase[j];
            out[p.row[j]].vec = comps[j].vec;
        }
        return out;
    }
    CMatrix mt = pi.matrix(t);
    for (std::size_t k = 0; k < comps.size(); ++k) {
        FockVec acc = scale(0.0, comps[0].vec);
        for (std::size_t j = 0; j < comps.size(); ++j)
            acc = add(acc, scale(mt(k, j) * comps[j].phase.unit(), comps[j].vec));
        out[k] = PhasedVec{QmodZ(), std::move(acc)};
    }
    return out;
}

} // namespace

FullSection act_full(const InducedSpace& sp, const FiniteProjRep& pi, const GElement& f,
                     const FullSection& psi) {
    check_element_shape(sp, f, "act_full");
    require_compatible(sp, pi, psi);

    FullSection out;
    out.lambda = psi.lambda;
    out.dim_v = psi.dim_v;
    for (const auto& [xi_src, comps] : psi.slots) {
        SlotIndex xi = shifted(xi_src, f.c_free);
        if (!sp.window.contains(xi))
            throw window_overflow("act_full: slot escapes the window at " + index_str(xi), xi);
        QmodZ phase = action_phase(sp.data, psi.lambda, f, xi);
        std::vector<PhasedVec> moved(comps.size());
        for (std::size_t j = 0; j < comps.size(); ++j) {
            moved[j].phase = comps[j].phase + phase;
            moved[j].vec = apply_spectral(sp, f.nu, comps[j].vec);
        }
        out.slots.emplace(std::move(xi), apply_finite(pi, f.c_tor, moved));
    }
    return out;
}

RelationCheck projective_relation_check(const InducedSpace& sp, const FiniteProjRep& pi,
                                        const GElement& f, const GElement& g,
                                        const FullSection& psi) {
    FullSection lhs = act_full(sp, pi, f, act_full(sp, pi, g, psi));
    GElement sum = g_add(sp.data, f, g);
    CirclePhase co = cocycle(sp.data, sp.model, f, g);
    FullSection rhs = act_full(sp, pi, sum, psi);
    for (auto& [xi, comps] : rhs.slots)
        for (PhasedVec& pv : comps) pv.phase = pv.phase + co.exact();

    RelationCheck rep;
    rep.phases_match = true;
    bool content_identical = true;
    if (lhs.slots.size() != rhs.slots.size()) rep.phases_match = false;
    for (const auto& [xi, comps] : lhs.slots) {
        auto it = rhs.slots.find(xi);
        if (it == rhs.slots.end()) {
            rep.phases_match = false;
            content_identical = false;
            break;
        }
        for (std::size_t j = 0; j < comps.size(); ++j) {
            if (comps[j].phase != it->second[j].phase) rep.phases_match = false;
            if (comps[j].vec.coeff != it->second[j].vec.coeff) content_identical = false;
        }
    }

    if (rep.phases_match && content_identical && co.rest() == 0.0) {
        rep.deviation = 0.0;
        return rep;
    }

    // numeric comparison with the spectral phase folded into the right side
    Cplx rest = std::exp(Cplx(0.0, tau_pi * co.rest()));
    FullSection rhs_scaled = rhs;
    for (auto& [xi, comps] : rhs_scaled.slots)
        for (PhasedVec& pv : comps) pv.vec = scale(rest, pv.vec);
    double den = section_norm(sp, rhs_scaled);
    double num = section_distance(sp, lhs, rhs_scaled);
    rep.deviation = den > 0.0 ? num / den : num;
    return rep;
}

double branching_check(const InducedSpace& sp, const GElement& alpha, const Section& phi) {
    check_element_shape(sp, alpha, "branching_check");
    for (long long c : alpha.c_free)
        if (c != 0) throw domain_error("branching_check: alpha must have c_free = 0");
    if (!alpha.c_tor.is_zero())
        throw domain_error("branching_check: alpha must have c_tor = 0");

    Section acted = act_induced(sp, alpha, phi);
    double num = 0.0, den = 0.0;
    for (const auto& [xi, pv] : phi.slots) {
        // independent slotwise evaluation through the G0 representation
        FockVec oracle = rho_lambda(sp.fock, sp.model, slot_parameter(sp.data, phi.lambda, xi),
                                    alpha.eta, alpha.nu, materialized(pv));
        FockVec got = materialized(acted.slots.at(xi));
        num += norm_sq_of(sp.fock, add(got, scale(-1.0, oracle)));
        den += norm_sq_of(sp.fock, oracle);
    }
    num = std::sqrt(num);
    den = std::sqrt(den);
    return den > 0.0 ? num / den : num;
}

namespace {

void require_two_torsion_sigma(const ManifoldData& m, const char* who) {
    for (const auto& row : m.sigma_free)
        for (const QmodZ& s : row)
            if (!(s + s).is_zero())
                throw domain_error(std::string(who) +
                                   ": requires 2 sigma_free = 0 (normalize the splitting)");
}

} // namespace

Section equivalence_shift(const InducedSpace& sp, const SlotIndex& xi0, const Section& phi) {
    require_two_torsion_sigma(sp.data, "equivalence_shift");
    if (xi0.size() != b_sz(sp.data))
        throw domain_error("equivalence_shift: xi0 length does not match b");
    Section out;
    out.lambda = slot_parameter(sp.data, phi.lambda, xi0); // lambda + 2 P xi0
    for (const auto& [src, pv] : phi.slots) {
        SlotIndex xi = shifted(src, negated(xi0));
        if (!sp.window.contains(xi))
            throw window_overflow(
                "equivalence_shift: reindexed slot escapes the window at " + index_str(xi), xi);
        PhasedVec moved;
        moved.phase = pv.phase - sigma_pair(sp.data, xi, xi0);
        moved.vec = pv.vec;
        out.slots.emplace(std::move(xi), std::move(moved));
    }
    return out;
}

FullSection equivalence_shift(const InducedSpace& sp, const SlotIndex& xi0,
                              const FullSection& psi) {
    require_two_torsion_sigma(sp.data, "equivalence_shift");
    if (xi0.size() != b_sz(sp.data))
        throw domain_error("equivalence_shift: xi0 length does not match b");
    FullSection out;
    out.lambda = slot_parameter(sp.data, psi.lambda, xi0);
    out.dim_v = psi.dim_v;
    for (const auto& [src, comps] : psi.slots) {
        SlotIndex xi = shifted(src, negated(xi0));
        if (!sp.window.contains(xi))
            throw window_overflow(
                "equivalence_shift: reindexed slot escapes the window at " + index_str(xi), xi);
        QmodZ shift_phase = -sigma_pair(sp.data, xi, xi0);
        std::vector<PhasedVec> moved = comps;
        for (PhasedVec& pv : moved) pv.phase = pv.phase + shift_phase;
        out.slots.emplace(std::move(xi), std::move(moved));
    }
    return out;
}

std::vector<QmodZ> DecompositionChange::mu_for(const std::vector<long long>& lambda) const {
    std::vector<QmodZ> mu;
    for (const auto& row : tau) {
        QmodZ acc;
        for (std::size_t a = 0; a < row.size(); ++a) acc = acc + row[a].times(lambda[a]);
        mu.push_back(acc);
    }
    return mu;
}

DecompositionChange decomposition_change(const ManifoldData& m,
                                         const std::vector<GroupElement>& theta) {
    require_valid(m);
    DecompositionChange ch;
    ch.theta = theta;
    ch.tau = solve_tau(m, theta);
    ch.data = m;
    // sigma'(i,j) = sigma(i,j) - tau(theta_i).P e_j + tau(theta_j).P e_i
    //              + L(theta_i, theta_j)
    std::vector<std::vector<QmodZ>> tau_theta;
    for (std::size_t i = 0; i < b_sz(m); ++i) tau_theta.push_back(tau_at(m, ch.tau, theta[i]));
    for (std::size_t i = 0; i < b_sz(m); ++i)
        for (std::size_t j = 0; j < b_sz(m); ++j) {
            QmodZ delta = m.linking.eval(theta[i], theta[j]);
            for (std::size_t a = 0; a < b_sz(m); ++a)
                delta = delta - tau_theta[i][a].times(m.pairing.at(a, j)) +
                        tau_theta[j][a].times(m.pairing.at(a, i));
            ch.data.sigma_free[i][j] = m.sigma_free[i][j] + delta;
        }
    require_valid(ch.data);
    return ch;
}

namespace {

GroupElement theta_of(const ManifoldData& m, const std::vector<GroupElement>& theta,
                      const std::vector<long long>& c) {
    GroupElement acc = m.torsion.zero();
    for (std::size_t i = 0; i < theta.size(); ++i)
        acc = m.torsion.add(acc, m.torsion.scale(c[i], theta[i]));
    return acc;
}

} // namespace

GElement element_in_new_coords(const DecompositionChange& ch, const GElement& f) {
    const ManifoldData& m = ch.data;
    GElement out = f;
    std::vector<QmodZ> tau_t = tau_at(m, ch.tau, f.c_tor);
    for (std::size_t i = 0; i < out.eta.size(); ++i) out.eta[i] = f.eta[i] - tau_t[i];
    out.c_tor = m.torsion.add(f.c_tor, theta_of(m, ch.theta, f.c_free));
    return out;
}

FullSection decomposition_map(const InducedSpace& sp, const DecompositionChange& ch,
                              const FiniteProjRep& pi, const FullSection& psi) {
    require_compatible(sp, pi, psi);
    FullSection out;
    out.lambda = psi.lambda;
    out.dim_v = psi.dim_v;
    for (const auto& [xi, comps] : psi.slots) {
        GroupElement tx = theta_of(sp.data, ch.theta, xi);
        std::vector<QmodZ> tau_tx = tau_at(sp.data, ch.tau, tx);
        QmodZ r;
        for (std::size_t a = 0; a < tau_tx.size(); ++a)
            r = r + tau_tx[a].times(psi.lambda[a]);
        std::vector<PhasedVec> moved = comps;
        for (PhasedVec& pv : moved) pv.phase = pv.phase + r;
        out.slots.emplace(xi, apply_finite(pi, tx, moved));
    }
    return out;
}

bool verify_u_cocycle(const UCocycle& fam, double tol) {
    for (const auto& [key, mat] : fam.u) {
        if (mat.rows() != mat.cols()) return false;
        double udev = (mat.adjoint() * mat - CMatrix::Identity(mat.rows(), mat.cols())).norm();
        if (udev > tol * static_cast<double>(mat.rows())) return false;
    }
    for (const auto& [key1, u_e2] : fam.u) {
        const SlotIndex& xi = key1.first;
        const SlotIndex& e2 = key1.second;
        SlotIndex mid = shifted(xi, e2);
        for (const auto& [key2, u_e1] : fam.u) {
            if (key2.first != mid) continue;
            const SlotIndex& e1 = key2.second;
            auto it = fam.u.find({xi, shifted(e1, e2)});
            if (it == fam.u.end()) continue;
            double dev = (u_e1 * u_e2 - it->second).norm();
            if (dev > tol * static_cast<double>(u_e1.rows())) return false;
        }
    }
    return true;
}

TFamily build_t(const UCocycle& fam, double tol) {
    TFamily out;
    if (fam.u.empty()) return out;
    std::size_t b = fam.u.begin()->first.first.size();
    SlotIndex zero(b, 0);
    for (const auto& [key, mat] : fam.u)
        if (key.first == zero) out.t[shifted(zero, key.second)] = mat;
    out.consistent = true;
    for (const auto& [key, mat] : fam.u) {
        auto src = out.t.find(key.first);
        auto dst = out.t.find(shifted(key.first, key.second));
        if (src == out.t.end() || dst == out.t.end()) continue;
        double dev = (dst->second - mat * src->second).norm();
        if (dev > tol * static_cast<double>(mat.rows())) out.consistent = false;
    }
    return out;
}

namespace {

long long balanced_digit(long long& y, long long base) {
    long long r = ((y % base) + base + base / 2) % base - base / 2;
    y = (y - r) / base;
    return r;
}

// decodes an eigenvalue e^{2 pi i sum_j x_j / base^{j+1}} into (x_0..x_{b-1})
bool decode_eigenphase(Cplx ev, long long base, int b, std::vector<long long>& x) {
    double ph = std::atan2(ev.imag(), ev.real()) / tau_pi; // in (-1/2, 1/2]
    double scale = std::pow(static_cast<double>(base), b);
    long long y = std::llround(ph * scale);
    x.assign(static_cast<std::size_t>(b), 0);
    for (int k = b - 1; k >= 0; --k) x[static_cast<std::size_t>(k)] = balanced_digit(y, base);
    return y == 0;
}

} // namespace

RoundTripOutcome roundtrip_extraction(const ManifoldData& m,
                                      const std::vector<RepLabel>& planted,
                                      const RoundTripParams& params, std::uint64_t seed) {
    require_valid(m);
    if (m.b < 1) throw domain_error("roundtrip_extraction: needs b >= 1");
    if (planted.empty()) throw domain_error("roundtrip_extraction: nothing planted");
    std::vector<FiniteProjRep> irreps = irreps_for_cocycle(m.linking);
    for (const RepLabel& l : planted) {
        if (l.lambda.size() != b_sz(m))
            throw domain_error("roundtrip_extraction: lambda length does not match b");
        if (l.irrep_index >= irreps.size())
            throw domain_error("roundtrip_extraction: irrep index out of range");
    }

    InducedSpace sp{m, circle_model(std::max(1, params.n_modes)),
                    FockSpace(params.n_modes, params.degree), Window{m.b, params.radius}};
    const std::size_t fdim = sp.fock.basis_size();
    std::vector<std::size_t> offset;
    std::size_t total = 0;
    for (const RepLabel& l : planted) {
        offset.push_back(total);
        total += fdim * static_cast<std::size_t>(irreps[l.irrep_index].dim());
    }

    std::vector<SlotIndex> slots = sp.window.all_indices();
    SlotIndex zero(b_sz(m), 0);

    // hidden slotwise unitaries defining the conjugated representation
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::map<SlotIndex, CMatrix> conj_u;
    for (const SlotIndex& xi : slots) {
        CMatrix g(total, total);
        for (std::size_t i = 0; i < total; ++i)
            for (std::size_t j = 0; j < total; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
        Eigen::HouseholderQR<CMatrix> qr(g);
        conj_u[xi] = qr.householderQ() * CMatrix::Identity(total, total);
    }

    // block of the planted direct sum for one summand, read off act_full on
    // basis sections (columns indexed component-major: v index * fdim + fock)
    auto summand_block = [&](std::size_t i, const GElement& f, const SlotIndex& xi_in) {
        const FiniteProjRep& rep = irreps[planted[i].irrep_index];
        const std::size_t dv = static_cast<std::size_t>(rep.dim());
        CMatrix block = CMatrix::Zero(fdim * dv, fdim * dv);
        SlotIndex xi_out = shifted(xi_in, f.c_free);
        for (std::size_t j = 0; j < dv; ++j)
            for (std::size_t k = 0; k < fdim; ++k) {
                FullSection basis;
                basis.lambda = planted[i].lambda;
                basis.dim_v = static_cast<int>(dv);
                std::vector<PhasedVec> comps(dv);
                for (std::size_t j2 = 0; j2 < dv; ++j2)
                    comps[j2] = PhasedVec{QmodZ(), scale(0.0, vacuum(sp.fock))};
                comps[j].vec = basis_vector(sp.fock, sp.fock.multi_at(k));
                basis.slots.emplace(xi_in, std::move(comps));
                FullSection img = act_full(sp, rep, f, basis);
                const std::vector<PhasedVec>& outc = img.slots.at(xi_out);
                for (std::size_t j2 = 0; j2 < dv; ++j2) {
                    FockVec v = materialized(outc[j2]);
                    for (std::size_t k2 = 0; k2 < fdim; ++k2)
                        block(j2 * fdim + k2, j * fdim + k) = v.coeff[k2];
                }
            }
        return block;
    };

    auto conj_block = [&](const GElement& f, const SlotIndex& xi_in) {
        CMatrix raw = CMatrix::Zero(total, total);
        for (std::size_t i = 0; i < planted.size(); ++i) {
            std::size_t d = fdim * static_cast<std::size_t>(irreps[planted[i].irrep_index].dim());
            raw.block(offset[i], offset[i], d, d) = summand_block(i, f, xi_in);
        }
        SlotIndex xi_out = shifted(xi_in, f.c_free);
        return CMatrix(conj_u.at(xi_out) * raw * conj_u.at(xi_in).adjoint());
    };

    RoundTripOutcome out;
    out.planted = planted;

    // --- slot parameter detection -------------------------------------
    // One torus probe with base-encoded components separates the joint
    // integer parameters lambda_i + 2 P xi. The base is sized from an a
    // priori bound on the parameters (known window, canonical lambda).
    long long bound = 1;
    for (const RepLabel& l : planted)
        for (const SlotIndex& xi : slots) {
            std::vector<long long> p = slot_parameter(m, l.lambda, xi);
            for (long long v : p) bound = std::max(bound, std::llabs(v));
        }
    const long long base = 2 * bound + 3;
    GElement torus_probe = zero_element(m);
    {
        long long den = 1;
        for (std::size_t j = 0; j < b_sz(m); ++j) {
            den *= base;
            torus_probe.eta[j] = QmodZ(1, den);
        }
    }

    struct Cluster {
        std::vector<long long> x;
        CMatrix isometry;
    };
    std::map<SlotIndex, std::vector<Cluster>> detected;
    bool decode_ok = true;
    for (const SlotIndex& xi : slots) {
        CMatrix a = conj_block(torus_probe, xi);
        Eigen::ComplexSchur<CMatrix> schur(a);
        const CMatrix& q = schur.matrixU();
        std::map<std::vector<long long>, std::vector<std::size_t>> groups;
        for (std::size_t j = 0; j < total; ++j) {
            std::vector<long long> x;
            if (!decode_eigenphase(schur.matrixT()(j, j), base, m.b, x)) decode_ok = false;
            groups[x].push_back(j);
        }
        std::vector<Cluster>& cl = detected[xi];
        for (const auto& [x, cols] : groups) {
            Cluster c;
            c.x = x;
            c.isometry = CMatrix(total, cols.size());
            for (std::size_t k = 0; k < cols.size(); ++k) c.isometry.col(k) = q.col(cols[k]);
            cl.push_back(std::move(c));
        }
    }

    // across slots the detected parameter multiset must shift by 2 P xi
    out.slot_structure_ok = decode_ok;
    for (const SlotIndex& xi : slots) {
        std::multiset<std::vector<long long>> expect, got;
        for (const Cluster& c : detected.at(zero)) {
            std::vector<long long> x = c.x;
            std::vector<long long> p = s_hom(m, xi);
            for (std::size_t j = 0; j < x.size(); ++j) x[j] += 2 * p[j];
            for (long long rep = 0; rep < c.isometry.cols(); ++rep) expect.insert(x);
        }
        for (const Cluster& c : detected.at(xi))
            for (long long rep = 0; rep < c.isometry.cols(); ++rep) got.insert(c.x);
        if (expect != got) out.slot_structure_ok = false;
    }

    // --- u-harvest ------------------------------------------------------
    UCocycle fam;
    fam.window = sp.window;
    for (const SlotIndex& xi_in : slots)
        for (const SlotIndex& xi_out : slots) {
            SlotIndex e = shifted(xi_out, negated(xi_in));
            GElement tr = zero_element(m);
            tr.c_free = e;
            CMatrix raw = conj_block(tr, xi_in);
            QmodZ phi = sigma_pair(m, e, xi_out) - sigma_pair(m, e, e);
            fam.u[{xi_in, e}] = CMatrix((-phi).unit() * raw);
        }
    out.u_ok = verify_u_cocycle(fam, params.tol);
    TFamily tf = build_t(fam, params.tol);
    out.t_ok = tf.consistent && !tf.t.empty();

    // --- finite factor recovery at slot zero ----------------------------
    std::vector<GroupElement> elems = m.torsion.enumerate();
    std::vector<CMatrix> torsion_blocks;
    for (const GroupElement& t : elems) {
        GElement ft = zero_element(m);
        ft.c_tor = t;
        torsion_blocks.push_back(conj_block(ft, zero));
    }
    bool mult_ok = true;
    for (const Cluster& c : detected.at(zero)) {
        std::vector<CMatrix> restricted;
        for (const CMatrix& blockt : torsion_blocks)
            restricted.push_back(CMatrix(c.isometry.adjoint() * blockt * c.isometry));
        FiniteProjRep big = FiniteProjRep::from_dense(m.torsion, m.linking, restricted);
        std::size_t accounted = 0;
        for (std::size_t k = 0; k < irreps.size(); ++k) {
            std::size_t homdim =
                hom_space(irreps[k].generator_rep(), big.generator_rep()).size();
            if (homdim == 0) continue;
            if (homdim % fdim != 0) {
                mult_ok = false;
                continue;
            }
            std::size_t count = homdim / fdim;
            accounted += count * static_cast<std::size_t>(irreps[k].dim()) * fdim;
            for (std::size_t rep = 0; rep < count; ++rep)
                out.recovered.push_back(RepLabel{c.x, k});
        }
        if (accounted != static_cast<std::size_t>(c.isometry.cols())) mult_ok = false;
    }

    // --- label comparison ------------------------------------------------
    out.labels_ok = mult_ok && out.recovered.size() == planted.size();
    if (out.labels_ok) {
        std::vector<bool> used(out.recovered.size(), false);
        for (const RepLabel& want : planted) {
            bool found = false;
            for (std::size_t j = 0; j < out.recovered.size(); ++j) {
                if (used[j]) continue;
                if (labels_equivalent(m, 1, want, out.recovered[j])) {
                    used[j] = true;
                    found = true;
                    break;
                }
            }
            if (!found) out.labels_ok = false;
        }
    }
    return out;
}

} // namespace delrep
