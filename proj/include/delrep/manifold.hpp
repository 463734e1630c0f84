#pragma once

// The cohomological data of a (4k+1)-manifold needed by the representation
// theory: the free Poincaré pairing P (unimodular), the torsion group with
// its linking form, and the splitting data sigma_free. Group elements are
// kept in harmonic coordinates (torus part, spectral part, free and torsion
// integer parts), where the commutator pairing S splits as
//   S(f, g) = integral nu ^ d nu'  +  eta(P c') - eta'(P c)
//             + sigma_free(c, c')  +  L(t, t'),
// with every slot except the spectral one exact in Q/Z.
//
// Torus coordinates are restricted to rational points so that all phases
// stay exact; every identity tested lives on that dense subgroup.

#include <string>
#include <vector>

#include "delrep/finabgroup.hpp"
#include "delrep/finheis.hpp"
#include "delrep/intmatrix.hpp"
#include "delrep/linkform.hpp"
#include "delrep/rational.hpp"
#include "delrep/spectral.hpp"

namespace delrep {

struct ManifoldData {
    int k = 0;
    int b = 0;
    IntMatrix pairing;   // P, b x b, |det| = 1
    FinAbGroup torsion;
    LinkingForm linking; // on the canonical invariant factors of torsion
    std::vector<std::vector<QmodZ>> sigma_free; // b x b, skew, diagonal in {0, 1/2}
    std::string name;
};

/// Empty means valid: shapes consistent, |det P| = 1, sigma_free skew with
/// diagonal in {0, 1/2}, linking valid and nondegenerate.
std::vector<std::string> validate(const ManifoldData& m);
/// Throws validation_error listing every violation.
void require_valid(const ManifoldData& m);

/// Group element of G(M) in harmonic coordinates.
struct GElement {
    std::vector<QmodZ> eta;        // b rational torus coordinates
    ModeVec nu;                    // spectral coefficients (empty = nu-free)
    std::vector<long long> c_free; // b integers
    GroupElement c_tor;            // torsion residues
};

GElement zero_element(const ManifoldData& m);
GElement g_add(const ManifoldData& m, const GElement& f, const GElement& g);
GElement g_neg(const ManifoldData& m, const GElement& f);

/// S_M in harmonic coordinates. The first overload requires nu-free inputs
/// and is exact; the second evaluates the spectral slot through the model.
CirclePhase cocycle(const ManifoldData& m, const GElement& f, const GElement& g);
CirclePhase cocycle(const ManifoldData& m, const SpectralModel& model,
                    const GElement& f, const GElement& g);

/// The covector of s(xi): eta -> integral eta ^ delta sigma(xi), i.e. P xi.
std::vector<long long> s_hom(const ManifoldData& m, const std::vector<long long>& xi);

/// One irreducible admissible representation class: the torus character
/// lambda (canonical representative with entries in [0, 2*level)) and an
/// index into the canonical irrep list of the level-scaled linking cocycle.
struct RepLabel {
    std::vector<long long> lambda;
    std::size_t irrep_index = 0;
};

struct Classification {
    long long level = 1;
    std::vector<RepLabel> labels;
    std::vector<FiniteProjRep> irreps; // canonical order, shared by all labels
    long long count() const { return static_cast<long long>(labels.size()); }
};

/// All classes at the given level: lambda over Z^b / 2*level*P(Z^b) (= the
/// cube [0, 2*level)^b since P is unimodular) times one irrep per class of
/// the cocycle e^{2 pi i * level * L}. Count = (2*level)^b * r.
Classification classify(const ManifoldData& m, long long level = 1);

/// Same class iff lambda1 - lambda2 lies in 2*level*P(Z^b) and the indexed
/// irreps are equivalent.
bool labels_equivalent(const ManifoldData& m, long long level, const RepLabel& a,
                       const RepLabel& c);

/// tau table of a decomposition change theta: Z^b -> torsion (images of the
/// free generators): row i solves P^T tau(t_i) = (L(t_i, theta(e_j)))_j on
/// the i-th torsion generator, exactly (|det P| = 1); the solve is verified
/// by substitution. tau is zero on the free part by convention.
std::vector<std::vector<QmodZ>> solve_tau(const ManifoldData& m,
                                          const std::vector<GroupElement>& theta);

/// Change of decomposition by theta: Z^b -> torsion (images of the free
/// generators). tau solves P^T tau(t) = (L(t, theta(e_j)))_j on each torsion
/// generator; mu = lambda . tau twists the irrep.
struct TransportResult {
    RepLabel label;        // same lambda; index of the equivalent canonical irrep
    FiniteProjRep twisted; // the twisted representation itself
    std::vector<std::vector<QmodZ>> tau; // per torsion generator: b-vector
    std::vector<QmodZ> mu;               // per torsion generator
};
TransportResult transport_decomposition(const ManifoldData& m,
                                        const std::vector<GroupElement>& theta,
                                        const RepLabel& label, long long level = 1);

/// tau extended from the generator table to an arbitrary torsion element.
std::vector<QmodZ> tau_at(const ManifoldData& m,
                          const std::vector<std::vector<QmodZ>>& tau,
                          const GroupElement& t);

/// sigma_free after moving the splitting by tau_f : Z^b -> torus (column i =
/// tau_f(e_i)): new(c, c') = old(c, c') + tau_f(c)(P c') - tau_f(c')(P c).
ManifoldData apply_splitting_change(const ManifoldData& m,
                                    const std::vector<std::vector<QmodZ>>& tau_f);

/// Splitting change that kills the off-diagonal of sigma_free (diagonal is
/// preserved); solvable exactly because |det P| = 1.
struct SigmaNormalization {
    ManifoldData normalized;
    std::vector<std::vector<QmodZ>> tau_f; // b x b, column i = tau_f(e_i)
};
SigmaNormalization normalize_sigma(const ManifoldData& m);

/// JSON document I/O. Fields: k, b, pairing (integer matrix), torsion
/// (cyclic orders in any presentation; canonicalized on load), linking and
/// sigma_free (rational strings "p/q"), optional name. Parse failures throw
/// validation_error naming the offending field.
ManifoldData parse_manifold(const std::string& text);
ManifoldData load_manifold(const std::string& path);
std::string manifold_json(const ManifoldData& m);

} // namespace delrep
