#pragma once

// Finite abelian groups in invariant-factor form. Arbitrary presentations
// (factor lists without the divisibility chain, generating sets inside a
// group) are canonicalized through Smith normal form.

#include <vector>

#include "delrep/intmatrix.hpp"

namespace delrep {

struct GroupElement {
    std::vector<long long> residues; // residues[i] reduced mod n_i

    bool operator==(const GroupElement& o) const { return residues == o.residues; }
    bool operator!=(const GroupElement& o) const { return residues != o.residues; }
    bool operator<(const GroupElement& o) const { return residues < o.residues; }
    bool is_zero() const;
};

class FinAbGroup {
public:
    static constexpr long long max_order = 1'000'000;

    FinAbGroup() = default; // trivial group
    /// Requires n_1 | n_2 | ... with every factor >= 2 and order <= max_order.
    explicit FinAbGroup(std::vector<long long> invariant_factors);

    const std::vector<long long>& invariant_factors() const { return factors_; }
    std::size_t rank() const { return factors_.size(); }
    long long order() const;
    long long exponent() const { return factors_.empty() ? 1 : factors_.back(); }

    bool operator==(const FinAbGroup& o) const { return factors_ == o.factors_; }
    bool operator!=(const FinAbGroup& o) const { return factors_ != o.factors_; }

    GroupElement zero() const { return GroupElement{std::vector<long long>(rank(), 0)}; }
    GroupElement generator(std::size_t i) const;
    bool contains(const GroupElement& t) const;
    /// Reduces arbitrary integer coordinates into canonical residues.
    GroupElement reduce(const std::vector<Int>& coords) const;

    GroupElement add(const GroupElement& a, const GroupElement& b) const;
    GroupElement sub(const GroupElement& a, const GroupElement& b) const;
    GroupElement neg(const GroupElement& a) const;
    GroupElement scale(long long k, const GroupElement& a) const;
    long long element_order(const GroupElement& a) const;

    /// Mixed-radix position of t in enumeration order.
    long long index_of(const GroupElement& t) const;
    GroupElement element_at(long long index) const;

    /// All elements, identity first, each exactly once.
    std::vector<GroupElement> enumerate(long long bound = max_order) const;

private:
    void check(const GroupElement& t) const;
    std::vector<long long> factors_;
};

/// Abstract structure of the group presented as Z^g / diag(orders)·Z^g,
/// together with the coordinate change onto canonical invariant factors.
struct CanonicalPresentation {
    FinAbGroup group;
    IntMatrix to_canonical;   // rank(group) x g: canonical coords = M · old coords
    IntMatrix from_canonical; // g x rank(group): old coords = M · canonical coords
};
CanonicalPresentation canonicalize_presentation(const std::vector<long long>& orders);

/// Invariant-factor structure of the subgroup of T generated by `gens`:
/// orders d_1 | d_2 | ... (each >= 2) and matching generators inside T.
struct SubgroupPresentation {
    std::vector<long long> factors;
    std::vector<GroupElement> generators;
};
SubgroupPresentation subgroup_presentation(const FinAbGroup& t,
                                           const std::vector<GroupElement>& gens);

/// All elements of the subgroup generated by `gens`, each exactly once.
std::vector<GroupElement> subgroup_elements(const FinAbGroup& t,
                                            const std::vector<GroupElement>& gens);

} // namespace delrep
