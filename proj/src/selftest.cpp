#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "delrep/cli.hpp"
#include "delrep/errors.hpp"
#include "delrep/finheis.hpp"
#include "delrep/fock.hpp"
#include "delrep/induced.hpp"
#include "delrep/intertwine.hpp"
#include "delrep/linkform.hpp"
#include "delrep/manifold.hpp"
#include "delrep/spectral.hpp"

namespace delrep {

namespace {

struct Reporter {
    std::ostream& out;
    const SelftestOptions& opt;
    int failures = 0;

    void report(const std::string& suite, const std::string& property, bool ok,
                const std::string& detail = "") {
        if (ok) {
            out << "ok   " << suite << ": " << property << "\n";
            return;
        }
        ++failures;
        out << "FAIL " << suite << ": " << property;
        if (!detail.empty()) out << " (" << detail << ")";
        out << "\n     reproduce: selftest --suite " << suite << " --seed " << opt.seed
            << " --trials " << opt.trials << " --tol " << opt.tol;
        if (suite == "induced")
            out << " --window " << opt.window << " --modes " << opt.modes << " --degree "
                << opt.degree;
        out << "\n";
    }
};

std::string worst_str(double worst) {
    std::ostringstream os;
    os << "worst deviation " << worst;
    return os.str();
}

WVec random_wvec(std::mt19937& rng, int n, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    WVec w;
    for (int i = 0; i < n; ++i) w.emplace_back(u(rng), u(rng));
    return w;
}

ModeVec random_modevec(std::mt19937& rng, std::size_t n, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    ModeVec v(n);
    for (double& x : v) x = u(rng);
    return v;
}

// ----------------------------------------------------------------- fock

void suite_fock(Reporter& r) {
    const SelftestOptions& opt = r.opt;
    std::mt19937 rng(static_cast<std::uint32_t>(opt.seed ^ 0xf0c5u));
    FockSpace f(2, 16);

    bool tail_ok = true;
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t) {
        CoherentInner ci = coherent_inner(f, random_wvec(rng, 2, 1.0), random_wvec(rng, 2, 1.0));
        double dev = std::abs(ci.truncated_value - ci.closed_form);
        worst = std::max(worst, dev - ci.tail_bound);
        if (dev > ci.tail_bound + 1e-12) tail_ok = false;
    }
    r.report("fock", "coherent inner products match the closed form within the tail bound",
             tail_ok, worst_str(worst));

    worst = 0.0;
    for (int t = 0; t < opt.trials; ++t) {
        WVec v = random_wvec(rng, 2, 0.3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        FockVec x = vacuum(f);
        for (std::size_t i = 0; i < x.coeff.size() && f.multi_at(i)[0] + f.multi_at(i)[1] <= 2;
             ++i)
            x.coeff[i] = Cplx(u(rng), u(rng));
        double before = norm(f, x);
        double after = norm(f, act(f, v, v, x));
        worst = std::max(worst, std::abs(after - before) / (before > 0 ? before : 1.0));
    }
    r.report("fock", "real directions act by isometries", worst <= opt.tol, worst_str(worst));

    worst = 0.0;
    for (int t = 0; t < opt.trials; ++t) {
        CocycleCheck c = cocycle_check_real(f, random_wvec(rng, 2, 1.0),
                                            random_wvec(rng, 2, 1.0), random_wvec(rng, 2, 1.0));
        worst = std::max(worst, c.deviation);
    }
    r.report("fock", "projective relation on the coherent span", worst <= opt.tol,
             worst_str(worst));
}

// -------------------------------------------------------------- spectral

void suite_spectral(Reporter& r) {
    const SelftestOptions& opt = r.opt;
    std::mt19937 rng(static_cast<std::uint32_t>(opt.seed ^ 0x59ecu));
    SpectralModel m = circle_model(16);

    bool exact_ok = true;
    std::uniform_int_distribution<long long> num(-6, 6);
    auto random_rational_vec = [&]() {
        RationalModeVec a(m.size());
        for (Rational& x : a) x = Rational(num(rng), 7);
        return a;
    };
    for (int t = 0; t < std::min(opt.trials, 100); ++t) {
        RationalModeVec a = random_rational_vec();
        RationalModeVec jja = apply_J_exact(m, apply_J_exact(m, a));
        for (std::size_t i = 0; i < a.size(); ++i)
            if (jja[i] != -a[i]) exact_ok = false;
        RationalModeVec b = random_rational_vec();
        if (symplectic_exact(m, a, b) != -symplectic_exact(m, b, a)) exact_ok = false;
        if (v_inner_exact(m, apply_J_exact(m, a), apply_J_exact(m, b)) !=
            v_inner_exact(m, a, b))
            exact_ok = false;
    }
    r.report("spectral", "J^2 = -1, antisymmetry, and J-isometry in exact arithmetic",
             exact_ok);

    bool pos_ok = true;
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t) {
        ModeVec a = random_modevec(rng, m.size(), 1.0);
        double s = symplectic(m, apply_J(m, a), a);
        if (!(s > 0.0)) pos_ok = false;
        ModeVec b = random_modevec(rng, m.size(), 1.0);
        worst = std::max(worst, std::abs(symplectic(m, a, b) - v_inner(m, a, apply_J(m, b))));
    }
    r.report("spectral", "positivity of the polarization", pos_ok);
    r.report("spectral", "pairing identity in floating point", worst <= opt.tol,
             worst_str(worst));
}

// --------------------------------------------------------------- finheis

void suite_finheis(Reporter& r) {
    const SelftestOptions& opt = r.opt;
    bool count_ok = true, dims_ok = true, distinct_ok = true;
    double worst = 0.0;
    for (const LinkingForm& form : battery_forms(12)) {
        std::vector<FiniteProjRep> irreps = irreps_for_cocycle(form);
        if (static_cast<long long>(irreps.size()) != count_regular_scan(form))
            count_ok = false;
        long long sq = 0;
        for (const FiniteProjRep& rep : irreps) {
            sq += static_cast<long long>(rep.dim()) * rep.dim();
            RepCheck rc = verify_rep(rep);
            worst = std::max(worst, std::max(rc.cocycle_dev, rc.unitary_dev));
        }
        if (sq != form.group().order()) dims_ok = false;
        for (std::size_t i = 0; i < irreps.size(); ++i)
            for (std::size_t j = i + 1; j < irreps.size(); ++j)
                if (are_equivalent(irreps[i], irreps[j])) distinct_ok = false;
    }
    r.report("finheis", "irreducible count equals the regularity scan", count_ok);
    r.report("finheis", "squared dimensions sum to the group order", dims_ok);
    r.report("finheis", "irreducibles are pairwise inequivalent", distinct_ok);
    r.report("finheis", "representations satisfy their cocycle unitarily", worst <= opt.tol,
             worst_str(worst));
}

// ------------------------------------------------------------ intertwine

void suite_intertwine(Reporter& r) {
    const SelftestOptions& opt = r.opt;
    std::mt19937 rng(static_cast<std::uint32_t>(r.opt.seed ^ 0x17e2u));
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_unitary = [&](int n) {
        CMatrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
        Eigen::HouseholderQR<CMatrix> qr(g);
        return CMatrix(qr.householderQ() * CMatrix::Identity(n, n));
    };

    std::vector<FiniteProjRep> irreps = irreps_for_cocycle(hyperbolic_form(3));
    bool schur_ok = true;
    for (const FiniteProjRep& rep : irreps) {
        MatrixRep mr = rep.generator_rep();
        if (!is_irreducible(mr)) schur_ok = false;
        std::vector<CMatrix> self = hom_space(mr, mr);
        if (self.size() != 1) schur_ok = false;
    }
    for (std::size_t i = 0; i + 1 < irreps.size(); ++i)
        if (!hom_space(irreps[i].generator_rep(), irreps[i + 1].generator_rep()).empty())
            schur_ok = false;
    r.report("intertwine", "Schur criterion on the canonical irreducibles", schur_ok);

    double worst = 0.0;
    for (int t = 0; t < std::min(opt.trials, 50); ++t) {
        MatrixRep r1 = irreps[static_cast<std::size_t>(t) % irreps.size()].generator_rep();
        int n = r1.dim;
        CMatrix w = random_unitary(n);
        MatrixRep r2 = r1;
        for (auto& [name, mat] : r2.generators) mat = w * mat * w.adjoint();
        std::uniform_real_distribution<double> c(0.5, 2.0);
        CMatrix u = unitarize(c(rng) * w, r1, r2);
        worst = std::max(worst, (u - w).norm());
        worst = std::max(worst, (unitarize(w, r1, r2) - w).norm());
    }
    r.report("intertwine", "polar unitarization recovers unitary intertwiners",
             worst <= opt.tol, worst_str(worst));

    worst = 0.0;
    bool mono_ok = true;
    for (int t = 0; t < std::min(opt.trials, 50); ++t) {
        int n = 6;
        CMatrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
        CMatrix a = 0.5 * (g + g.adjoint());
        SpectralResolution res = spectral_resolution(a);
        CMatrix rebuilt = CMatrix::Zero(n, n);
        CMatrix prev = CMatrix::Zero(n, n);
        for (std::size_t i = 0; i < res.lambdas.size(); ++i) {
            rebuilt += res.lambdas[i] * (res.projections[i] - prev);
            prev = res.projections[i];
        }
        worst = std::max(worst, (rebuilt - a).norm());
        for (std::size_t i = 0; i < res.projections.size(); ++i)
            for (std::size_t j = i; j < res.projections.size(); ++j)
                if ((res.projections[i] * res.projections[j] - res.projections[i]).norm() >
                    1e-9 * n)
                    mono_ok = false;
        if (!prev.isApprox(CMatrix::Identity(n, n), 1e-9)) mono_ok = false;
    }
    r.report("intertwine", "spectral resolutions are increasing and rebuild the operator",
             mono_ok && worst <= opt.tol, worst_str(worst));
}

// --------------------------------------------------------------- induced

ManifoldData selftest_mixed_data() {
    ManifoldData m;
    m.k = 1;
    m.b = 1;
    m.pairing = IntMatrix::from_rows({{1}});
    m.sigma_free = {{QmodZ::half()}};
    m.linking = z2_diag_form();
    m.torsion = m.linking.group();
    m.name = "selftest";
    return m;
}

void suite_induced(Reporter& r) {
    const SelftestOptions& opt = r.opt;
    std::mt19937 rng(static_cast<std::uint32_t>(opt.seed ^ 0x1d0cu));
    ManifoldData m = selftest_mixed_data();
    std::vector<FiniteProjRep> irreps = irreps_for_cocycle(m.linking);

    auto random_element = [&](bool with_torsion) {
        std::uniform_int_distribution<long long> num(0, 9);
        std::uniform_int_distribution<long long> cc(-1, 1);
        GElement f = zero_element(m);
        f.eta[0] = QmodZ(num(rng), 10);
        f.c_free[0] = cc(rng);
        if (with_torsion)
            f.c_tor = m.torsion.element_at(std::uniform_int_distribution<long long>(
                0, m.torsion.order() - 1)(rng));
        return f;
    };

    {
        InducedSpace sp{m, circle_model(opt.modes), FockSpace(opt.modes, 6),
                        Window{m.b, opt.window}};
        bool exact_ok = true;
        for (int t = 0; t < opt.trials; ++t) {
            const FiniteProjRep& pi = irreps[static_cast<std::size_t>(t) % irreps.size()];
            FullSection psi;
            psi.lambda = {t % 3};
            psi.dim_v = pi.dim();
            psi.slots[{0}] = {PhasedVec{QmodZ(t % 5, 5), vacuum(sp.fock)}};
            RelationCheck rc =
                projective_relation_check(sp, pi, random_element(true), random_element(true), psi);
            if (!rc.phases_match || rc.deviation != 0.0) exact_ok = false;
        }
        r.report("induced", "projective relation is exact without spectral content", exact_ok);
    }

    {
        InducedSpace sp{m, circle_model(opt.modes), FockSpace(opt.modes, opt.degree),
                        Window{m.b, opt.window}};
        const std::size_t nmodes = sp.model.size();
        double worst = 0.0;
        bool phase_ok = true;
        for (int t = 0; t < std::min(opt.trials, 40); ++t) {
            FullSection psi;
            psi.lambda = {t % 3};
            psi.dim_v = 1;
            psi.slots[{0}] = {PhasedVec{QmodZ(), vacuum(sp.fock)}};
            GElement f = random_element(false);
            GElement g = random_element(false);
            f.nu = random_modevec(rng, nmodes, 0.08);
            g.nu = random_modevec(rng, nmodes, 0.08);
            RelationCheck rc = projective_relation_check(sp, irreps[0], f, g, psi);
            phase_ok = phase_ok && rc.phases_match;
            worst = std::max(worst, rc.deviation);
        }
        r.report("induced", "projective relation with spectral content",
                 phase_ok && worst <= opt.tol, worst_str(worst));

        std::vector<int> occ(static_cast<std::size_t>(opt.modes), 0);
        occ[0] = 1;
        double worst_br = 0.0;
        for (int t = 0; t < std::min(opt.trials, 40); ++t) {
            Section phi;
            phi.lambda = {t % 3};
            phi.slots[{-1}] = PhasedVec{QmodZ(1, 3), vacuum(sp.fock)};
            phi.slots[{1}] = PhasedVec{QmodZ(), basis_vector(sp.fock, occ)};
            GElement alpha = zero_element(m);
            alpha.eta[0] = QmodZ(t % 7, 7);
            alpha.nu = random_modevec(rng, nmodes, 0.08);
            worst_br = std::max(worst_br, branching_check(sp, alpha, phi));
        }
        r.report("induced", "restriction to the identity component acts slotwise",
                 worst_br <= opt.tol, worst_str(worst_br));
    }

    {
        InducedSpace sp{m, circle_model(opt.modes), FockSpace(opt.modes, 6),
                        Window{m.b, opt.window}};
        std::vector<int> occ(static_cast<std::size_t>(opt.modes), 0);
        occ[0] = 1;
        bool shift_ok = true;
        Section phi;
        phi.lambda = {0};
        phi.slots[{-1}] = PhasedVec{QmodZ(1, 12), vacuum(sp.fock)};
        phi.slots[{0}] = PhasedVec{QmodZ(5, 12), basis_vector(sp.fock, occ)};
        Section shifted = equivalence_shift(sp, {1}, phi);
        for (int t = 0; t < opt.trials; ++t) {
            GElement f = random_element(false);
            Section lhs = equivalence_shift(sp, {1}, act_induced(sp, f, phi));
            Section rhs = act_induced(sp, f, shifted);
            if (lhs.lambda != rhs.lambda || lhs.slots.size() != rhs.slots.size())
                shift_ok = false;
            for (const auto& [xi, pv] : lhs.slots) {
                auto it = rhs.slots.find(xi);
                if (it == rhs.slots.end() || pv.phase != it->second.phase ||
                    pv.vec.coeff != it->second.vec.coeff)
                    shift_ok = false;
            }
        }
        r.report("induced", "window reindexing intertwines with shifted parameter", shift_ok);
    }
}

} // namespace

int run_selftest(const SelftestOptions& opt, std::ostream& out) {
    if (opt.trials < 1) throw validation_error("selftest: trials must be >= 1");
    if (!(opt.tol > 0.0)) throw validation_error("selftest: tol must be > 0");
    if (opt.window < 3) throw validation_error("selftest: window must be >= 3");
    if (opt.modes < 1) throw validation_error("selftest: modes must be >= 1");
    if (opt.degree < 1) throw validation_error("selftest: degree must be >= 1");
    static const std::vector<std::string> known{"fock",    "spectral",   "induced",
                                               "finheis", "intertwine", "all"};
    if (std::find(known.begin(), known.end(), opt.suite) == known.end())
        throw validation_error("selftest: unknown suite '" + opt.suite + "'");

    Reporter r{out, opt};
    bool all = opt.suite == "all";
    if (all || opt.suite == "fock") suite_fock(r);
    if (all || opt.suite == "spectral") suite_spectral(r);
    if (all || opt.suite == "finheis") suite_finheis(r);
    if (all || opt.suite == "intertwine") suite_intertwine(r);
    if (all || opt.suite == "induced") suite_induced(r);

    if (r.failures == 0) {
        out << "selftest: all properties hold (suite " << opt.suite << ", seed " << opt.seed
            << ")\n";
        return 0;
    }
    out << "selftest: " << r.failures << " propert" << (r.failures == 1 ? "y" : "ies")
        << " failed\n";
    return 2;
}

} // namespace delrep
