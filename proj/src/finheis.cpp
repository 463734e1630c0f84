#include "delrep/finheis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "delrep/errors.hpp"

namespace delrep {

FiniteProjRep FiniteProjRep::from_exact(FinAbGroup group, LinkingForm cocycle,
                                        std::vector<PhasePerm> perms) {
    FiniteProjRep rep;
    rep.group_ = std::move(group);
    rep.cocycle_ = std::move(cocycle);
    if (perms.empty() || static_cast<long long>(perms.size()) != rep.group_.order())
        throw size_error("need one matrix per group element");
    rep.dim_ = static_cast<int>(perms[0].row.size());
    rep.exact_ = true;
    rep.perms_ = std::move(perms);
    return rep;
}

FiniteProjRep FiniteProjRep::from_dense(FinAbGroup group, LinkingForm cocycle,
                                        std::vector<CMatrix> matrices) {
    FiniteProjRep rep;
    rep.group_ = std::move(group);
    rep.cocycle_ = std::move(cocycle);
    if (matrices.empty() || static_cast<long long>(matrices.size()) != rep.group_.order())
        throw size_error("need one matrix per group element");
    rep.dim_ = static_cast<int>(matrices[0].rows());
    rep.exact_ = false;
    rep.dense_ = std::move(matrices);
    return rep;
}

CMatrix FiniteProjRep::matrix(const GroupElement& t) const {
    const long long idx = group_.index_of(t);
    if (!exact_) return dense_[static_cast<std::size_t>(idx)];
    const PhasePerm& p = perms_[static_cast<std::size_t>(idx)];
    CMatrix m = CMatrix::Zero(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
        m(static_cast<int>(p.row[j]), j) = p.phase[j].unit();
    return m;
}

const PhasePerm& FiniteProjRep::exact_perm(const GroupElement& t) const {
    if (!exact_) throw domain_error("representation has no exact phase data");
    return perms_[static_cast<std::size_t>(group_.index_of(t))];
}

std::vector<Cplx> FiniteProjRep::trace_vector() const {
    std::vector<Cplx> out;
    const long long n = group_.order();
    out.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        if (exact_) {
            const PhasePerm& p = perms_[static_cast<std::size_t>(i)];
            Cplx tr(0.0, 0.0);
            for (int j = 0; j < dim_; ++j)
                if (p.row[j] == static_cast<std::size_t>(j)) tr += p.phase[j].unit();
            out.push_back(tr);
        } else {
            out.push_back(dense_[static_cast<std::size_t>(i)].trace());
        }
    }
    return out;
}

MatrixRep FiniteProjRep::generator_rep() const {
    MatrixRep r;
    r.dim = dim_;
    for (std::size_t i = 0; i < group_.rank(); ++i)
        r.generators.emplace_back("g" + std::to_string(i), matrix(group_.generator(i)));
    return r;
}

namespace {

QmodZ beta(const LinkingForm& l, const GroupElement& t, const GroupElement& u) {
    return l.eval(t, u) - l.eval(u, t);
}

struct InductionFrame {
    std::vector<GroupElement> radical;           // beta-radical, enumeration order
    std::vector<long long> k_factors;            // invariant factors of K
    std::vector<GroupElement> k_gens;            // matching generators
    std::map<long long, std::vector<long long>> k_coords; // element index -> coords
    std::vector<GroupElement> coset_reps;        // coset_reps[0] = 0
    std::vector<long long> coset_of;             // element index -> coset
};

InductionFrame make_frame(const LinkingForm& l) {
    const FinAbGroup& t = l.group();
    if (t.order() > max_rep_group_order)
        throw size_error("group order " + std::to_string(t.order()) +
                         " exceeds the representation synthesis bound " +
                         std::to_string(max_rep_group_order));
    InductionFrame fr;
    const std::vector<GroupElement> all = t.enumerate();

    for (const GroupElement& x : all) {
        bool central = true;
        for (std::size_t j = 0; j < t.rank() && central; ++j)
            if (!beta(l, x, t.generator(j)).is_zero()) central = false;
        if (central) fr.radical.push_back(x);
    }

    // Greedy maximal beta-isotropic subgroup. Bilinearity makes the generator
    // check sufficient, and the pass cannot miss later admissible elements:
    // failing against a subgroup still fails against any enlargement.
    std::vector<GroupElement> gens;
    std::set<long long> members{t.index_of(t.zero())};
    for (const GroupElement& x : all) {
        if (members.count(t.index_of(x))) continue;
        bool commutes = true;
        for (const GroupElement& g : gens)
            if (!beta(l, x, g).is_zero()) { commutes = false; break; }
        if (!commutes) continue;
        gens.push_back(x);
        members.clear();
        for (const GroupElement& m : subgroup_elements(t, gens)) members.insert(t.index_of(m));
    }

    SubgroupPresentation sp = subgroup_presentation(t, gens);
    fr.k_factors = sp.factors;
    fr.k_gens = sp.generators;

    // Coordinates of every element of K with respect to its own generators.
    std::vector<long long> a(fr.k_factors.size(), 0);
    for (;;) {
        GroupElement e = t.zero();
        for (std::size_t i = 0; i < a.size(); ++i)
            e = t.add(e, t.scale(a[i], fr.k_gens[i]));
        fr.k_coords[t.index_of(e)] = a;
        std::size_t carry = 0;
        while (carry < a.size() && ++a[carry] == fr.k_factors[carry]) a[carry++] = 0;
        if (carry == a.size()) break;
        if (a.empty()) break;
    }
    if (fr.k_coords.empty()) fr.k_coords[t.index_of(t.zero())] = {};

    fr.coset_of.assign(static_cast<std::size_t>(t.order()), -1);
    for (const GroupElement& x : all) {
        if (fr.coset_of[static_cast<std::size_t>(t.index_of(x))] >= 0) continue;
        const long long id = static_cast<long long>(fr.coset_reps.size());
        fr.coset_reps.push_back(x);
        for (const auto& kv : fr.k_coords) {
            GroupElement shifted = t.add(x, t.element_at(kv.first));
            fr.coset_of[static_cast<std::size_t>(t.index_of(shifted))] = id;
        }
    }
    return fr;
}

long long binom2(long long m) { return m * (m - 1) / 2; }

// Exponent c0 with c0(a+b) - c0(a) - c0(b) = -L(a,b) on K, where a, b are
// K-coordinates; the defect of the quadratic part under a_i -> a_i + m_i is
// absorbed by the linear correction gamma.
struct CharacterBase {
    std::vector<std::vector<QmodZ>> b; // b[i][j] = -L(k_i, k_j), symmetric on K
    std::vector<QmodZ> gamma;

    QmodZ eval(const std::vector<long long>& a) const {
        QmodZ acc;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = i + 1; j < a.size(); ++j)
                acc = acc + b[i][j].times(Int(a[i]) * Int(a[j]));
            acc = acc + b[i][i].times(binom2(a[i])) + gamma[i].times(a[i]);
        }
        return acc;
    }
};

CharacterBase make_character_base(const LinkingForm& l, const InductionFrame& fr) {
    const std::size_t n = fr.k_gens.size();
    CharacterBase cb;
    cb.b.assign(n, std::vector<QmodZ>(n));
    cb.gamma.assign(n, QmodZ());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cb.b[i][j] = -l.eval(fr.k_gens[i], fr.k_gens[j]);
    for (std::size_t i = 0; i < n; ++i) {
        // Solve m_i * gamma = -C(m_i,2) b_ii in Q/Z. The right side lies in
        // (1/2)Z because 2 b_ii = 0, so gamma = 0 or 1/(2 m_i) works.
        QmodZ target = cb.b[i][i].times(-binom2(fr.k_factors[i]));
        if (target.is_zero())
            cb.gamma[i] = QmodZ();
        else if (target == QmodZ::half())
            cb.gamma[i] = QmodZ(1, 2 * fr.k_factors[i]);
        else
            throw domain_error("diagonal cocycle value is not 2-torsion");
    }
    return cb;
}

// chi(k) = e^{2 pi i c(k)} with c = c0 + (character selected by h).
QmodZ char_value(const CharacterBase& cb, const InductionFrame& fr,
                 const std::vector<long long>& h, const std::vector<long long>& a) {
    QmodZ v = cb.eval(a);
    for (std::size_t i = 0; i < a.size(); ++i)
        v = v + QmodZ(Rational(h[i] * a[i], fr.k_factors[i]));
    return v;
}

// Induced matrices: pi(t) v_g = alpha(t,g) alpha(g',k)^{-1} chi(k) v_{g'}
// with g' the representative of t+g and k = t + g - g'.
std::vector<PhasePerm> induce(const LinkingForm& l, const InductionFrame& fr,
                              const CharacterBase& cb, const std::vector<long long>& h) {
    const FinAbGroup& t = l.group();
    const std::size_t d = fr.coset_reps.size();
    std::vector<PhasePerm> perms(static_cast<std::size_t>(t.order()));
    for (long long e = 0; e < t.order(); ++e) {
        GroupElement x = t.element_at(e);
        PhasePerm p;
        p.row.resize(d);
        p.phase.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            const GroupElement& g = fr.coset_reps[j];
            GroupElement xg = t.add(x, g);
            const long long dest = fr.coset_of[static_cast<std::size_t>(t.index_of(xg))];
            const GroupElement& gp = fr.coset_reps[static_cast<std::size_t>(dest)];
            GroupElement k = t.sub(xg, gp);
            const auto& a = fr.k_coords.at(t.index_of(k));
            p.row[j] = static_cast<std::size_t>(dest);
            p.phase[j] = l.eval(x, g) - l.eval(gp, k) + char_value(cb, fr, h, a);
        }
        perms[static_cast<std::size_t>(e)] = std::move(p);
    }
    return perms;
}

// Central character: on the radical every matrix is the exact scalar
// e^{2 pi i c(t)}; two induced representations are equivalent iff these
// scalars agree on the whole radical.
std::vector<QmodZ> central_character(const FiniteProjRep& rep,
                                     const std::vector<GroupElement>& radical) {
    std::vector<QmodZ> key;
    key.reserve(radical.size());
    for (const GroupElement& t : radical) {
        const PhasePerm& p = rep.exact_perm(t);
        key.push_back(p.phase.empty() ? QmodZ() : p.phase[0]);
    }
    return key;
}

bool trace_less(const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
    constexpr double eps = 1e-9;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i].real() < b[i].real() - eps) return true;
        if (a[i].real() > b[i].real() + eps) return false;
        if (a[i].imag() < b[i].imag() - eps) return true;
        if (a[i].imag() > b[i].imag() + eps) return false;
    }
    return false;
}

void canonical_sort(std::vector<FiniteProjRep>& reps) {
    std::stable_sort(reps.begin(), reps.end(),
                     [](const FiniteProjRep& x, const FiniteProjRep& y) {
                         if (x.dim() != y.dim()) return x.dim() < y.dim();
                         return trace_less(x.trace_vector(), y.trace_vector());
                     });
}

} // namespace

std::vector<FiniteProjRep> irreps_for_cocycle(const LinkingForm& cocycle) {
    const FinAbGroup& t = cocycle.group();
    for (std::size_t i = 0; i < t.rank(); ++i)
        for (std::size_t j = 0; j < t.rank(); ++j) {
            if (!(cocycle.entry(i, j) + cocycle.entry(j, i)).is_zero())
                throw validation_error("cocycle exponent form is not skew");
            if (!cocycle.entry(i, j).times(t.invariant_factors()[i]).is_zero() ||
                !cocycle.entry(i, j).times(t.invariant_factors()[j]).is_zero())
                throw validation_error("cocycle exponent form is not well-defined");
        }

    InductionFrame fr = make_frame(cocycle);
    CharacterBase cb = make_character_base(cocycle, fr);

    std::map<std::vector<QmodZ>, FiniteProjRep> classes;
    std::vector<long long> h(fr.k_factors.size(), 0);
    for (;;) {
        FiniteProjRep rep =
            FiniteProjRep::from_exact(t, cocycle, induce(cocycle, fr, cb, h));
        std::vector<QmodZ> key = central_character(rep, fr.radical);
        classes.emplace(std::move(key), std::move(rep));
        std::size_t carry = 0;
        while (carry < h.size() && ++h[carry] == fr.k_factors[carry]) h[carry++] = 0;
        if (carry == h.size()) break;
        if (h.empty()) break;
    }

    std::vector<FiniteProjRep> out;
    out.reserve(classes.size());
    for (auto& kv : classes) out.push_back(std::move(kv.second));
    if (out.size() != fr.radical.size())
        throw domain_error("class count does not match the radical size");
    canonical_sort(out);
    return out;
}

std::vector<FiniteProjRep> build_irreps(const LinkingForm& l) {
    std::vector<std::string> issues = validate(l);
    if (!issues.empty()) throw validation_error("invalid linking form: " + issues.front());
    return irreps_for_cocycle(l);
}

std::vector<FiniteProjRep> irreps_by_regular_decomposition(const LinkingForm& cocycle,
                                                           std::uint64_t seed) {
    const FinAbGroup& t = cocycle.group();
    const long long n = t.order();
    if (n > 256)
        throw size_error("regular decomposition is limited to group order 256");
    const std::vector<GroupElement> all = t.enumerate();
    const int nn = static_cast<int>(n);

    std::vector<CMatrix> reg(static_cast<std::size_t>(n));
    for (long long e = 0; e < n; ++e) {
        CMatrix m = CMatrix::Zero(nn, nn);
        for (long long s = 0; s < n; ++s) {
            const long long d = t.index_of(t.add(all[static_cast<std::size_t>(e)],
                                                 all[static_cast<std::size_t>(s)]));
            m(static_cast<int>(d), static_cast<int>(s)) =
                cocycle.eval(all[static_cast<std::size_t>(e)], all[static_cast<std::size_t>(s)])
                    .unit();
        }
        reg[static_cast<std::size_t>(e)] = std::move(m);
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 4; ++attempt) {
        CMatrix h(nn, nn);
        for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j) h(i, j) = Cplx(gauss(rng), gauss(rng));
        h = (h + h.adjoint()).eval() / 2.0;

        CMatrix avg = CMatrix::Zero(nn, nn);
        for (const CMatrix& r : reg) avg += r * h * r.adjoint();
        avg /= static_cast<double>(n);

        Eigen::SelfAdjointEigenSolver<CMatrix> es(avg);
        const auto& ev = es.eigenvalues();
        const double gap = 1e-8 * (1.0 + std::abs(ev(nn - 1)) + std::abs(ev(0)));

        std::vector<FiniteProjRep> candidates;
        bool clean = true;
        int i = 0;
        while (i < nn && clean) {
            int j = i;
            while (j < nn && (j == i || ev(j) - ev(j - 1) <= gap)) ++j;
            CMatrix basis = es.eigenvectors().middleCols(i, j - i);
            std::vector<CMatrix> mats;
            mats.reserve(reg.size());
            for (const CMatrix& r : reg) {
                CMatrix small = basis.adjoint() * r * basis;
                if ((r * basis - basis * small).norm() > 1e-6) { clean = false; break; }
                mats.push_back(std::move(small));
            }
            if (clean)
                candidates.push_back(FiniteProjRep::from_dense(t, cocycle, std::move(mats)));
            i = j;
        }
        if (!clean) continue; // degenerate draw; eigenspace straddled blocks

        std::vector<FiniteProjRep> classes;
        for (auto& c : candidates) {
            bool known = false;
            for (const auto& k : classes)
                if (k.dim() == c.dim() && are_equivalent(k, c)) { known = true; break; }
            if (!known) classes.push_back(std::move(c));
        }
        canonical_sort(classes);
        return classes;
    }
    throw domain_error("regular decomposition failed to split cleanly");
}

FiniteProjRep twist(const FiniteProjRep& rep, const std::vector<QmodZ>& mu) {
    const FinAbGroup& t = rep.group();
    if (mu.size() != t.rank()) throw size_error("character data has wrong rank");
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (!mu[i].times(t.invariant_factors()[i]).is_zero())
            throw validation_error("twist data is not a character of the group");

    const long long n = t.order();
    auto mu_of = [&](const GroupElement& x) {
        QmodZ v;
        for (std::size_t i = 0; i < mu.size(); ++i) v = v + mu[i].times(x.residues[i]);
        return v;
    };
    if (rep.is_exact()) {
        std::vector<PhasePerm> perms;
        perms.reserve(static_cast<std::size_t>(n));
        for (long long e = 0; e < n; ++e) {
            GroupElement x = t.element_at(e);
            PhasePerm p = rep.exact_perm(x);
            const QmodZ shift = mu_of(x);
            for (auto& ph : p.phase) ph = ph + shift;
            perms.push_back(std::move(p));
        }
        return FiniteProjRep::from_exact(t, rep.cocycle(), std::move(perms));
    }
    std::vector<CMatrix> mats;
    mats.reserve(static_cast<std::size_t>(n));
    for (long long e = 0; e < n; ++e) {
        GroupElement x = t.element_at(e);
        mats.push_back(mu_of(x).unit() * rep.matrix(x));
    }
    return FiniteProjRep::from_dense(t, rep.cocycle(), std::move(mats));
}

bool are_equivalent(const FiniteProjRep& a, const FiniteProjRep& b, double tol) {
    if (a.group() != b.group())
        throw domain_error("representations of different groups cannot be compared");
    if (!(a.cocycle() == b.cocycle()))
        throw domain_error("representations carry different cocycles");
    if (a.dim() != b.dim()) return false;
    return !hom_space(a.generator_rep(), b.generator_rep(), tol).empty();
}

RepCheck verify_rep(const FiniteProjRep& rep) {
    const FinAbGroup& t = rep.group();
    const long long n = t.order();
    RepCheck out;
    out.relation_exact = rep.is_exact();

    std::vector<CMatrix> mats;
    mats.reserve(static_cast<std::size_t>(n));
    for (long long e = 0; e < n; ++e) mats.push_back(rep.matrix(t.element_at(e)));

    CMatrix eye = CMatrix::Identity(rep.dim(), rep.dim());
    for (long long e = 0; e < n; ++e)
        out.unitary_dev = std::max(
            out.unitary_dev,
            (mats[static_cast<std::size_t>(e)].adjoint() * mats[static_cast<std::size_t>(e)] -
             eye)
                .norm());

    for (long long e = 0; e < n; ++e) {
        GroupElement x = t.element_at(e);
        for (long long f = 0; f < n; ++f) {
            GroupElement y = t.element_at(f);
            const long long s = t.index_of(t.add(x, y));
            if (rep.is_exact()) {
                const PhasePerm& px = rep.exact_perm(x);
                const PhasePerm& py = rep.exact_perm(y);
                const PhasePerm& ps = rep.exact_perm(t.add(x, y));
                const QmodZ c = rep.cocycle().eval(x, y);
                for (std::size_t j = 0; j < py.row.size(); ++j) {
                    const std::size_t mid = py.row[j];
                    if (px.row[mid] != ps.row[j] ||
                        py.phase[j] + px.phase[mid] != c + ps.phase[j])
                        out.relation_exact = false;
                }
            }
            const double dev = (mats[static_cast<std::size_t>(e)] *
                                    mats[static_cast<std::size_t>(f)] -
                                rep.cocycle().eval(x, y).unit() *
                                    mats[static_cast<std::size_t>(s)])
                                   .norm();
            out.cocycle_dev = std::max(out.cocycle_dev, dev);
        }
    }
    return out;
}


std::size_t equivalent_index(const std::vector<FiniteProjRep>& list,
                             const FiniteProjRep& rep) {
    for (std::size_t i = 0; i < list.size(); ++i)
        if (are_equivalent(list[i], rep)) return i;
    throw domain_error("equivalent_index: no equivalent representation in the list");
}

} // namespace delrep
