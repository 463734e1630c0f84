#pragma once

// Linking forms: Q/Z-valued pairings on a finite abelian group, stored on
// generators and extended bilinearly. The torsion pairing of a (4k+1)-manifold
// is skew with diagonal in (1/2 Z)/Z and nondegenerate; validation is a
// diagnostic pass so that scaled (level) cocycle forms, which may be
// degenerate, can still be carried by the same type.

#include <string>
#include <vector>

#include "delrep/finabgroup.hpp"
#include "delrep/rational.hpp"

namespace delrep {

class LinkingForm {
public:
    LinkingForm() = default;
    /// matrix[i][j] = L(t_i, t_j) on the canonical generators; shape checked,
    /// structural invariants left to validate().
    LinkingForm(FinAbGroup group, std::vector<std::vector<QmodZ>> matrix);

    const FinAbGroup& group() const { return group_; }
    const std::vector<std::vector<QmodZ>>& matrix() const { return matrix_; }
    const QmodZ& entry(std::size_t i, std::size_t j) const { return matrix_[i][j]; }

    /// Bilinear extension to arbitrary elements.
    QmodZ eval(const GroupElement& t, const GroupElement& u) const;

    /// Form with every value multiplied by `level` (the level-l cocycle
    /// exponent); stays skew and well-defined but may become degenerate.
    LinkingForm scaled(long long level) const;

    bool operator==(const LinkingForm& o) const {
        return group_ == o.group_ && matrix_ == o.matrix_;
    }

private:
    FinAbGroup group_;
    std::vector<std::vector<QmodZ>> matrix_;
};

/// Empty result means valid: skew (hence diagonal in (1/2 Z)/Z), well-defined
/// against the invariant factors, and nondegenerate.
std::vector<std::string> validate(const LinkingForm& l);

/// Closed form: t is regular iff 2t = 0. Valid for nondegenerate forms; the
/// definitional scan below is the test-side oracle.
bool is_regular(const LinkingForm& l, const GroupElement& t);

/// Definitional alpha-regularity for alpha = e^{2 pi i L}: L(t,u) = L(u,t)
/// for every u, checked by exhaustive scan.
bool regular_scan(const LinkingForm& l, const GroupElement& t);

/// Number of regular elements of a valid nondegenerate form:
/// #{t : 2t = 0} = 2^(number of even invariant factors).
long long count_r(const LinkingForm& l);

/// Oracle-side count by definitional scan (works for degenerate forms too).
long long count_regular_scan(const LinkingForm& l);

/// Skew nondegenerate form ((a,b),(a',b')) -> (ab' - a'b)/n on Z_n x Z_n.
LinkingForm hyperbolic_form(long long n);

/// The form [1/2] on Z_2 (skew because 1/2 = -1/2).
LinkingForm z2_diag_form();

/// Pairing given on the generators of an arbitrary cyclic presentation
/// (orders need not form a divisibility chain), re-expressed on the canonical
/// invariant factors.
LinkingForm form_from_presentation(const std::vector<long long>& orders,
                                   const std::vector<std::vector<QmodZ>>& pairing);

/// Orthogonal direct sum, re-expressed on the canonical invariant factors of
/// the combined group.
LinkingForm direct_sum(const LinkingForm& a, const LinkingForm& b);

/// Every direct sum of hyperbolic blocks H(n) and Z_2-diagonal blocks with
/// group order <= max_order, deduplicated by (group, matrix) value.
std::vector<LinkingForm> battery_forms(long long max_order);

} // namespace delrep
