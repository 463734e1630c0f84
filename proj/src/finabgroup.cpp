#include "delrep/finabgroup.hpp"

#include <numeric>

namespace delrep {

bool GroupElement::is_zero() const {
    for (long long r : residues)
        if (r != 0) return false;
    return true;
}

FinAbGroup::FinAbGroup(std::vector<long long> invariant_factors)
    : factors_(std::move(invariant_factors)) {
    long long order = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i] < 2) throw validation_error("invariant factor < 2");
        if (i + 1 < factors_.size() && factors_[i + 1] % factors_[i] != 0)
            throw validation_error("invariant factors violate divisibility chain");
        if (order > max_order / factors_[i]) throw size_error("group order exceeds desk scale");
        order *= factors_[i];
    }
}

long long FinAbGroup::order() const {
    long long n = 1;
    for (long long f : factors_) n *= f;
    return n;
}

GroupElement FinAbGroup::generator(std::size_t i) const {
    if (i >= rank()) throw domain_error("generator index out of range");
    GroupElement t = zero();
    t.residues[i] = 1;
    return t;
}

bool FinAbGroup::contains(const GroupElement& t) const {
    if (t.residues.size() != rank()) return false;
    for (std::size_t i = 0; i < rank(); ++i)
        if (t.residues[i] < 0 || t.residues[i] >= factors_[i]) return false;
    return true;
}

GroupElement FinAbGroup::reduce(const std::vector<Int>& coords) const {
    if (coords.size() != rank()) throw domain_error("coordinate length mismatch");
    GroupElement t = zero();
    for (std::size_t i = 0; i < rank(); ++i) {
        Int r = coords[i] % factors_[i];
        if (r < 0) r += factors_[i];
        t.residues[i] = to_ll(r);
    }
    return t;
}

void FinAbGroup::check(const GroupElement& t) const {
    if (!contains(t)) throw domain_error("element does not belong to the group");
}

GroupElement FinAbGroup::add(const GroupElement& a, const GroupElement& b) const {
    check(a);
    check(b);
    GroupElement t = zero();
    for (std::size_t i = 0; i < rank(); ++i)
        t.residues[i] = (a.residues[i] + b.residues[i]) % factors_[i];
    return t;
}

GroupElement FinAbGroup::sub(const GroupElement& a, const GroupElement& b) const {
    return add(a, neg(b));
}

GroupElement FinAbGroup::neg(const GroupElement& a) const {
    check(a);
    GroupElement t = zero();
    for (std::size_t i = 0; i < rank(); ++i)
        t.residues[i] = a.residues[i] == 0 ? 0 : factors_[i] - a.residues[i];
    return t;
}

GroupElement FinAbGroup::scale(long long k, const GroupElement& a) const {
    check(a);
    GroupElement t = zero();
    for (std::size_t i = 0; i < rank(); ++i) {
        long long r = (a.residues[i] % factors_[i]) * (k % factors_[i]) % factors_[i];
        if (r < 0) r += factors_[i];
        t.residues[i] = r;
    }
    return t;
}

long long FinAbGroup::element_order(const GroupElement& a) const {
    check(a);
    long long ord = 1;
    for (std::size_t i = 0; i < rank(); ++i) {
        const long long n = factors_[i];
        const long long d = std::gcd(a.residues[i], n);
        ord = std::lcm(ord, n / d);
    }
    return ord;
}

long long FinAbGroup::index_of(const GroupElement& t) const {
    check(t);
    long long idx = 0;
    for (std::size_t i = 0; i < rank(); ++i) idx = idx * factors_[i] + t.residues[i];
    return idx;
}

GroupElement FinAbGroup::element_at(long long index) const {
    GroupElement t = zero();
    for (std::size_t i = rank(); i-- > 0;) {
        t.residues[i] = index % factors_[i];
        index /= factors_[i];
    }
    if (index != 0) throw domain_error("element index out of range");
    return t;
}

std::vector<GroupElement> FinAbGroup::enumerate(long long bound) const {
    const long long n = order();
    if (n > bound) throw size_error("enumeration bound exceeded");
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) out.push_back(element_at(i));
    return out;
}

CanonicalPresentation canonicalize_presentation(const std::vector<long long>& orders) {
    const std::size_t g = orders.size();
    for (long long n : orders)
        if (n < 1) throw validation_error("presentation order < 1");

    IntMatrix rel(g, g);
    for (std::size_t i = 0; i < g; ++i) rel.at(i, i) = orders[i];
    SmithResult s = smith_normal_form(rel);

    // Z^g / rel ~ (+) Z_{d_i} under x -> U·x; keep the factors > 1.
    std::vector<long long> factors;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < g; ++i) {
        const long long d = to_ll(s.d.at(i, i));
        if (d > 1) {
            factors.push_back(d);
            kept.push_back(i);
        }
    }

    CanonicalPresentation out{FinAbGroup(factors), IntMatrix(kept.size(), g), IntMatrix(g, kept.size())};
    IntMatrix uinv = inverse_unimodular(s.u);
    for (std::size_t a = 0; a < kept.size(); ++a)
        for (std::size_t j = 0; j < g; ++j) {
            out.to_canonical.at(a, j) = s.u.at(kept[a], j);
            out.from_canonical.at(j, a) = uinv.at(j, kept[a]);
        }
    return out;
}

SubgroupPresentation subgroup_presentation(const FinAbGroup& t,
                                           const std::vector<GroupElement>& gens) {
    const std::size_t g = gens.size();
    const std::size_t l = t.rank();
    if (g == 0) return {};

    // Kernel of psi: Z^{g+l} -> Z^l, (a, b) -> Gen·a + diag(n)·b. Its
    // projection to the a-coordinates is the relation lattice of the
    // generating set in T.
    IntMatrix psi(l, g + l);
    for (std::size_t j = 0; j < g; ++j) {
        if (!t.contains(gens[j])) throw domain_error("generator does not belong to the group");
        for (std::size_t i = 0; i < l; ++i) psi.at(i, j) = gens[j].residues[i];
    }
    for (std::size_t i = 0; i < l; ++i) psi.at(i, g + i) = t.invariant_factors()[i];

    SmithResult s = smith_normal_form(psi);
    // psi has full row rank l, so kernel basis = columns l..g+l-1 of V.
    IntMatrix rel(g, g);
    for (std::size_t j = 0; j < g; ++j)
        for (std::size_t i = 0; i < g; ++i) rel.at(i, j) = s.v.at(i, l + j);

    SmithResult q = smith_normal_form(rel);
    IntMatrix uinv = inverse_unimodular(q.u);

    SubgroupPresentation out;
    for (std::size_t i = 0; i < g; ++i) {
        const long long d = to_ll(q.d.at(i, i));
        if (d <= 1) continue;
        out.factors.push_back(d);
        // Canonical generator i = sum_j uinv[j][i] · gens[j] inside T.
        std::vector<Int> coords(l, Int(0));
        for (std::size_t j = 0; j < g; ++j)
            for (std::size_t m = 0; m < l; ++m)
                coords[m] += uinv.at(j, i) * gens[j].residues[m];
        out.generators.push_back(t.reduce(coords));
    }
    return out;
}

std::vector<GroupElement> subgroup_elements(const FinAbGroup& t,
                                            const std::vector<GroupElement>& gens) {
    SubgroupPresentation p = subgroup_presentation(t, gens);
    std::vector<GroupElement> out{t.zero()};
    for (std::size_t i = 0; i < p.factors.size(); ++i) {
        std::vector<GroupElement> next;
        next.reserve(out.size() * static_cast<std::size_t>(p.factors[i]));
        GroupElement step = t.zero();
        for (long long k = 0; k < p.factors[i]; ++k) {
            for (const GroupElement& e : out) next.push_back(t.add(e, step));
            step = t.add(step, p.generators[i]);
        }
        out = std::move(next);
    }
    return out;
}

} // namespace delrep
