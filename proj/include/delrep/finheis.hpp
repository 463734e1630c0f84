#pragma once

// Irreducible projective unitary representations of a finite abelian group T
// with bilinear cocycle alpha(t,u) = e^{2 pi i L(t,u)}.
//
// The construction is algebraic: pick a maximal isotropic subgroup K for the
// commutator pairing beta = L - L^T, solve the character condition on K
// exactly in Q/Z, and induce up to T. The resulting matrices are generalized
// permutations whose phases are exact rationals, so the defining relation
//   pi(t) pi(u) = e^{2 pi i L(t,u)} pi(t+u)
// can be checked with zero tolerance. A numeric alternative that decomposes
// the twisted regular representation is provided as an independent
// cross-check.
//
// The number of equivalence classes equals the number of beta-regular
// elements r, every class has dimension sqrt(|T|/r), and the dimension
// squares over one representative per class sum to |T| (semisimplicity of
// the twisted group algebra).

#include <cstdint>
#include <vector>

#include "delrep/finabgroup.hpp"
#include "delrep/intertwine.hpp"
#include "delrep/linkform.hpp"
#include "delrep/rational.hpp"

namespace delrep {

/// One generalized permutation matrix: column j has its only nonzero at
/// row[j], equal to e^{2 pi i phase[j]}.
struct PhasePerm {
    std::vector<std::size_t> row;
    std::vector<QmodZ> phase;
};

class FiniteProjRep {
public:
    FiniteProjRep() = default;

    static FiniteProjRep from_exact(FinAbGroup group, LinkingForm cocycle,
                                    std::vector<PhasePerm> perms);
    static FiniteProjRep from_dense(FinAbGroup group, LinkingForm cocycle,
                                    std::vector<CMatrix> matrices);

    const FinAbGroup& group() const { return group_; }
    const LinkingForm& cocycle() const { return cocycle_; }
    int dim() const { return dim_; }
    bool is_exact() const { return exact_; }

    /// Representing matrix of t (materialized from the exact data if present).
    CMatrix matrix(const GroupElement& t) const;
    const PhasePerm& exact_perm(const GroupElement& t) const;

    /// Traces in group enumeration order.
    std::vector<Cplx> trace_vector() const;
    /// Matrices of the group generators, for intertwiner computations.
    MatrixRep generator_rep() const;

private:
    FinAbGroup group_;
    LinkingForm cocycle_;
    int dim_ = 0;
    bool exact_ = false;
    std::vector<PhasePerm> perms_;  // by element index, if exact
    std::vector<CMatrix> dense_;    // by element index, otherwise
};

/// Largest group order accepted by the synthesis routines.
inline constexpr long long max_rep_group_order = 4096;

/// All equivalence classes of irreducible alpha-representations for the
/// cocycle exponent form `cocycle` (skew, well-defined; degeneracy allowed,
/// as needed for level-scaled forms). Exactly r classes are returned, sorted
/// by dimension and then by trace vector; matrices are exact phase
/// permutations with pi(0) = I.
std::vector<FiniteProjRep> irreps_for_cocycle(const LinkingForm& cocycle);

/// irreps_for_cocycle with the nondegeneracy of the form enforced up front
/// (validation_error otherwise).
std::vector<FiniteProjRep> build_irreps(const LinkingForm& l);

/// Independent numeric route: decompose the twisted regular representation
/// by averaging a random Hermitian matrix over the representation and
/// splitting into eigenspaces. Same classes as irreps_for_cocycle, up to
/// equivalence and basis.
std::vector<FiniteProjRep> irreps_by_regular_decomposition(const LinkingForm& cocycle,
                                                           std::uint64_t seed = 20240901);

/// Multiplies the representation by the character t -> e^{2 pi i sum t_i mu_i};
/// mu must be killed by the invariant factors. The cocycle is unchanged.
FiniteProjRep twist(const FiniteProjRep& rep, const std::vector<QmodZ>& mu);

/// True iff a nonzero intertwiner exists. Both representations must carry
/// the same group and the same cocycle exponent form.
bool are_equivalent(const FiniteProjRep& a, const FiniteProjRep& b, double tol = 1e-9);

/// Index of the unique member of `list` equivalent to `rep`; domain_error if
/// none matches.
std::size_t equivalent_index(const std::vector<FiniteProjRep>& list,
                             const FiniteProjRep& rep);

/// Diagnostic: worst deviation from the defining relation and from unitarity.
/// For exact representations `relation_exact` reports whether the relation
/// holds identically in Q/Z.
struct RepCheck {
    double cocycle_dev = 0.0;
    double unitary_dev = 0.0;
    bool relation_exact = false;
};
RepCheck verify_rep(const FiniteProjRep& rep);

} // namespace delrep
