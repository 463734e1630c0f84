#include "delrep/linkform.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "delrep/errors.hpp"

namespace delrep {

LinkingForm::LinkingForm(FinAbGroup group, std::vector<std::vector<QmodZ>> matrix)
    : group_(std::move(group)), matrix_(std::move(matrix)) {
    const std::size_t n = group_.rank();
    if (matrix_.size() != n)
        throw size_error("linking form matrix has " + std::to_string(matrix_.size()) +
                         " rows, group has rank " + std::to_string(n));
    for (const auto& row : matrix_)
        if (row.size() != n)
            throw size_error("linking form matrix is not square");
}

QmodZ LinkingForm::eval(const GroupElement& t, const GroupElement& u) const {
    const std::size_t n = group_.rank();
    if (t.residues.size() != n || u.residues.size() != n)
        throw size_error("element rank mismatch in linking form evaluation");
    QmodZ acc;
    for (std::size_t i = 0; i < n; ++i) {
        if (t.residues[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (u.residues[j] == 0) continue;
            acc = acc + matrix_[i][j].times(Int(t.residues[i]) * Int(u.residues[j]));
        }
    }
    return acc;
}

LinkingForm LinkingForm::scaled(long long level) const {
    auto m = matrix_;
    for (auto& row : m)
        for (auto& e : row) e = e.times(Int(level));
    return LinkingForm(group_, std::move(m));
}

std::vector<std::string> validate(const LinkingForm& l) {
    std::vector<std::string> issues;
    const auto& g = l.group();
    const std::size_t n = g.rank();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!(l.entry(i, j) + l.entry(j, i)).is_zero())
                issues.push_back("not skew at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
            if (!l.entry(i, j).times(g.invariant_factors()[i]).is_zero())
                issues.push_back("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") not killed by factor " +
                                 std::to_string(g.invariant_factors()[i]));
            if (!l.entry(i, j).times(g.invariant_factors()[j]).is_zero())
                issues.push_back("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") not killed by factor " +
                                 std::to_string(g.invariant_factors()[j]));
        }
    if (!issues.empty()) return issues; // degenerate scan needs well-definedness
    const long long order = g.order();
    for (long long idx = 1; idx < order; ++idx) {
        GroupElement t = g.element_at(idx);
        bool in_radical = true;
        for (std::size_t j = 0; j < n && in_radical; ++j)
            if (!l.eval(t, g.generator(j)).is_zero()) in_radical = false;
        if (in_radical) {
            issues.push_back("degenerate: nonzero element at index " + std::to_string(idx) +
                             " pairs trivially with everything");
            break;
        }
    }
    return issues;
}

bool is_regular(const LinkingForm& l, const GroupElement& t) {
    return l.group().scale(2, t).is_zero();
}

bool regular_scan(const LinkingForm& l, const GroupElement& t) {
    const auto& g = l.group();
    // Bilinearity reduces the scan over all u to the generators.
    for (std::size_t j = 0; j < g.rank(); ++j)
        if (l.eval(t, g.generator(j)) != l.eval(g.generator(j), t)) return false;
    return true;
}

long long count_r(const LinkingForm& l) {
    long long r = 1;
    for (const auto& f : l.group().invariant_factors())
        if (f % 2 == 0) r *= 2;
    return r;
}

long long count_regular_scan(const LinkingForm& l) {
    const auto& g = l.group();
    long long count = 0;
    for (long long idx = 0; idx < g.order(); ++idx)
        if (regular_scan(l, g.element_at(idx))) ++count;
    return count;
}

LinkingForm hyperbolic_form(long long n) {
    if (n < 2) throw domain_error("hyperbolic block needs modulus >= 2");
    FinAbGroup g({n, n});
    std::vector<std::vector<QmodZ>> m(2, std::vector<QmodZ>(2));
    m[0][1] = QmodZ(Rational(1, n));
    m[1][0] = -m[0][1];
    return LinkingForm(std::move(g), std::move(m));
}

LinkingForm z2_diag_form() {
    FinAbGroup g({2});
    return LinkingForm(std::move(g), {{QmodZ(Rational(1, 2))}});
}

LinkingForm form_from_presentation(const std::vector<long long>& orders,
                                   const std::vector<std::vector<QmodZ>>& pairing) {
    const std::size_t g = orders.size();
    if (pairing.size() != g)
        throw size_error("form_from_presentation: pairing rows do not match generators");
    for (const auto& row : pairing)
        if (row.size() != g)
            throw size_error("form_from_presentation: pairing matrix not square");
    CanonicalPresentation pres = canonicalize_presentation(orders);
    const std::size_t n = pres.group.rank();
    // Pairing pushed through the change of basis: canonical generator
    // p = sum_i from_canonical(i,p) old_i.
    std::vector<std::vector<QmodZ>> m(n, std::vector<QmodZ>(n));
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            QmodZ acc;
            for (std::size_t i = 0; i < g; ++i) {
                const Int& ci = pres.from_canonical.at(i, p);
                if (ci == 0) continue;
                for (std::size_t j = 0; j < g; ++j) {
                    const Int& cj = pres.from_canonical.at(j, q);
                    if (cj == 0) continue;
                    acc = acc + pairing[i][j].times(ci * cj);
                }
            }
            m[p][q] = acc;
        }
    return LinkingForm(pres.group, std::move(m));
}

LinkingForm direct_sum(const LinkingForm& a, const LinkingForm& b) {
    std::vector<long long> orders;
    for (const auto& f : a.group().invariant_factors()) orders.push_back(f);
    for (const auto& f : b.group().invariant_factors()) orders.push_back(f);
    const std::size_t na = a.group().rank();
    const std::size_t g = orders.size();
    std::vector<std::vector<QmodZ>> block(g, std::vector<QmodZ>(g));
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) {
            if (i < na && j < na)
                block[i][j] = a.entry(i, j);
            else if (i >= na && j >= na)
                block[i][j] = b.entry(i - na, j - na);
        }
    return form_from_presentation(orders, block);
}

std::vector<LinkingForm> battery_forms(long long max_order) {
    // Partial sums of blocks, depth-first, keyed by (invariant factors, matrix)
    // so that e.g. H(2)+D and D+H(2) collapse to one entry.
    std::map<std::pair<std::vector<long long>, std::vector<std::vector<QmodZ>>>, LinkingForm>
        seen;
    std::vector<std::pair<LinkingForm, long long>> blocks; // block, order
    for (long long nn = 2; nn * nn <= max_order; ++nn)
        blocks.emplace_back(hyperbolic_form(nn), nn * nn);
    blocks.emplace_back(z2_diag_form(), 2);

    std::function<void(const LinkingForm&, long long, std::size_t)> extend =
        [&](const LinkingForm& cur, long long order, std::size_t first_block) {
            auto key = std::make_pair(cur.group().invariant_factors(), cur.matrix());
            if (seen.find(key) == seen.end()) seen.emplace(std::move(key), cur);
            for (std::size_t b = first_block; b < blocks.size(); ++b) {
                if (order * blocks[b].second > max_order) continue;
                extend(direct_sum(cur, blocks[b].first), order * blocks[b].second, b);
            }
        };
    for (std::size_t b = 0; b < blocks.size(); ++b)
        if (blocks[b].second <= max_order) extend(blocks[b].first, blocks[b].second, b);

    std::vector<LinkingForm> out;
    out.reserve(seen.size());
    for (auto& kv : seen) out.push_back(std::move(kv.second));
    return out;
}

} // namespace delrep
