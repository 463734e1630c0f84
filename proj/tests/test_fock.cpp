#include "delrep/fock.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "delrep/errors.hpp"
#include "delrep/spectral.hpp"
#include "doctest.h"

using namespace delrep;

namespace {

const double pi = std::acos(-1.0);

WVec random_wvec(std::mt19937& rng, int n, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    WVec v(static_cast<std::size_t>(n));
    for (Cplx& z : v) z = Cplx(u(rng), u(rng));
    return v;
}

ModeVec random_modevec(std::mt19937& rng, std::size_t n, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    ModeVec v(n);
    for (double& x : v) x = u(rng);
    return v;
}

// Random vector supported in degrees <= cap, normalized.
FockVec random_low_degree(const FockSpace& f, std::mt19937& rng, int cap) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FockVec x;
    x.coeff.assign(f.basis_size(), Cplx(0.0));
    for (std::size_t i = 0; i < f.basis_size(); ++i) {
        int deg = 0;
        for (int v : f.multi_at(i)) deg += v;
        if (deg <= cap) x.coeff[i] = Cplx(u(rng), u(rng));
    }
    double n = norm(f, x);
    for (Cplx& c : x.coeff) c /= n;
    return x;
}

double coeff_distance(const FockVec& a, const FockVec& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.coeff.size(); ++i) d += std::norm(a.coeff[i] - b.coeff[i]);
    return std::sqrt(d);
}

} // namespace

TEST_CASE("truncated basis enumeration and exact monomial norms") {
    FockSpace f(2, 3);
    CHECK(f.basis_size() == 10); // C(2+3, 3)
    CHECK(f.multi_at(0) == std::vector<int>{0, 0});
    for (std::size_t i = 0; i < f.basis_size(); ++i)
        CHECK(f.index_of(f.multi_at(i)) == i);
    CHECK(f.in_range({1, 2}));
    CHECK_FALSE(f.in_range({2, 2}));
    CHECK_THROWS_AS(f.index_of({2, 2}), domain_error);

    // kappa^{|m|} prod m_i! at kappa = 2: m = (2,1) -> 2^3 * 2 = 16.
    CHECK(f.monomial_norm_sq_exact({2, 1}) == Rational(16));
    FockSpace g(2, 3, Rational(3, 2));
    CHECK(g.monomial_norm_sq_exact({2, 1}) == Rational(27, 4)); // (3/2)^3 * 2
    CHECK(g.monomial_norm_sq_exact({0, 0}) == Rational(1));

    CHECK_THROWS_AS(FockSpace(0, 3), validation_error);
    CHECK_THROWS_AS(FockSpace(2, -1), validation_error);
    CHECK_THROWS_AS(FockSpace(2, 3, Rational(0)), validation_error);
}

TEST_CASE("creation and annihilation are exactly adjoint in rational arithmetic") {
    // <a e_i x, y> = <x, a_i y> with a_i e^n = kappa n_i e^{n - delta_i}:
    // both sides reduce to rational expressions in kappa and factorials,
    // compared here with zero tolerance.
    FockSpace f(2, 4, Rational(5, 3));
    for (std::size_t mi = 0; mi < f.basis_size(); ++mi) {
        for (std::size_t ni = 0; ni < f.basis_size(); ++ni) {
            const auto& m = f.multi_at(mi);
            const auto& n = f.multi_at(ni);
            for (int i = 0; i < 2; ++i) {
                std::vector<int> up = m;
                up[static_cast<std::size_t>(i)] += 1;
                Rational lhs = (up == n) ? f.monomial_norm_sq_exact(n) : Rational(0);
                Rational rhs(0);
                if (n[static_cast<std::size_t>(i)] > 0) {
                    std::vector<int> down = n;
                    down[static_cast<std::size_t>(i)] -= 1;
                    if (down == m)
                        rhs = f.kappa() * n[static_cast<std::size_t>(i)] *
                              f.monomial_norm_sq_exact(m);
                }
                CHECK(lhs == rhs);
            }
        }
    }

    // The floating-point operators agree with the rational identity.
    std::mt19937 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<std::size_t> pick(0, f.basis_size() - 1);
        FockVec em = basis_vector(f, f.multi_at(pick(rng)));
        FockVec en = basis_vector(f, f.multi_at(pick(rng)));
        for (int i = 0; i < 2; ++i) {
            Cplx lhs = inner(f, create(f, i, em), en);
            Cplx rhs = inner(f, em, annihilate(f, i, en));
            CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("annihilation has coherent vectors as eigenvectors") {
    FockSpace f(2, 12);
    std::mt19937 rng(72);
    for (int trial = 0; trial < 10; ++trial) {
        WVec xi = random_wvec(rng, 2, 0.8);
        FockVec eps = from_coherent(f, CoherentVec{xi});
        for (int i = 0; i < 2; ++i) {
            FockVec lhs = annihilate(f, i, eps);
            FockVec rhs = scale(f.kappa_d() * xi[static_cast<std::size_t>(i)], eps);
            // agreement below the top degree, where truncation interferes
            for (std::size_t k = 0; k < f.basis_size(); ++k) {
                int deg = 0;
                for (int v : f.multi_at(k)) deg += v;
                if (deg >= f.degree()) continue;
                CHECK(std::abs(lhs.coeff[k] - rhs.coeff[k]) < 1e-12);
            }
        }
    }
}

TEST_CASE("coherent inner product: closed form, truncated series, tail bound") {
    FockSpace f(2, 16);
    std::mt19937 rng(73);
    for (int trial = 0; trial < 50; ++trial) {
        WVec xi = random_wvec(rng, 2, 0.8);
        WVec eta = random_wvec(rng, 2, 0.8);
        CoherentInner ci = coherent_inner(f, xi, eta);
        Cplx z(0.0);
        for (int i = 0; i < 2; ++i)
            z += xi[static_cast<std::size_t>(i)] * std::conj(eta[static_cast<std::size_t>(i)]);
        CHECK(std::abs(ci.closed_form - std::exp(f.kappa_d() * z)) < 1e-12);
        CHECK(std::abs(ci.closed_form - ci.truncated_value) <= ci.tail_bound + 1e-12);

        // materialized coherent vectors realize exactly the truncated series
        FockVec fx = from_coherent(f, CoherentVec{xi});
        FockVec fy = from_coherent(f, CoherentVec{eta});
        CHECK(std::abs(inner(f, fx, fy) - ci.truncated_value) < 1e-10);

        // the recorded loss is exactly the dropped mass:
        // ||fx||^2 + loss^2 = e^{kappa ||xi||^2}
        double s = std::norm(xi[0]) + std::norm(xi[1]);
        double total = std::exp(f.kappa_d() * s);
        double kept = inner(f, fx, fx).real();
        CHECK(std::abs(kept + fx.norm_loss * fx.norm_loss - total) < 1e-9 * total);
    }

    // a parameter big enough that the tail is solid
    FockVec big = from_coherent(f, CoherentVec{WVec{Cplx(1.2), Cplx(0.0, 0.9)}});
    CHECK(big.truncated);
    CHECK(big.norm_loss > 1e-4);
    CHECK(big.norm_loss < 1.0);

    FockVec v0 = from_coherent(f, CoherentVec{WVec{Cplx(0.0), Cplx(0.0)}});
    CHECK_FALSE(v0.truncated);
    CHECK(coeff_distance(v0, vacuum(f)) == 0.0);
}

TEST_CASE("inner product is linear in the first argument") {
    FockSpace f(2, 6);
    std::mt19937 rng(74);
    FockVec x = random_low_degree(f, rng, 6);
    FockVec y = random_low_degree(f, rng, 6);
    FockVec z = random_low_degree(f, rng, 6);
    Cplx c(0.7, -1.3);
    Cplx lhs = inner(f, add(scale(c, x), y), z);
    Cplx rhs = c * inner(f, x, z) + inner(f, y, z);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    // conjugate-linear in the second
    Cplx lhs2 = inner(f, z, scale(c, x));
    CHECK(std::abs(lhs2 - std::conj(c) * inner(f, z, x)) < 1e-12);
}

TEST_CASE("action on explicit coefficients matches the coherent closed form") {
    FockSpace f(2, 16);
    std::mt19937 rng(75);
    for (int trial = 0; trial < 25; ++trial) {
        WVec vp = random_wvec(rng, 2, 0.5);
        WVec wm = random_wvec(rng, 2, 0.5);
        WVec xi = random_wvec(rng, 2, 0.5);
        CoherentCombo sym = act_coherent(f, vp, wm, coherent_combo(Cplx(1.0), xi));
        FockVec direct = act(f, vp, wm, from_coherent(f, CoherentVec{xi}));
        FockVec reference = materialize(f, sym);
        // compare away from the top degrees, where the truncated operator
        // path necessarily deviates
        for (std::size_t k = 0; k < f.basis_size(); ++k) {
            int deg = 0;
            for (int v : f.multi_at(k)) deg += v;
            if (deg > f.degree() - 4) continue;
            CHECK(std::abs(direct.coeff[k] - reference.coeff[k]) < 1e-8);
        }
    }
}

TEST_CASE("pure creation action computes the explicit exponential") {
    FockSpace f(1, 2);
    WVec vp{Cplx(0.4, 0.1)};
    WVec zero{Cplx(0.0)};
    FockVec y = act(f, vp, zero, vacuum(f));
    CHECK(std::abs(y.coeff[f.index_of({0})] - Cplx(1.0)) < 1e-15);
    CHECK(std::abs(y.coeff[f.index_of({1})] - vp[0]) < 1e-15);
    CHECK(std::abs(y.coeff[f.index_of({2})] - 0.5 * vp[0] * vp[0]) < 1e-15);
    CHECK(y.truncated); // the degree-3 part of eps_{v} fell off
    CHECK(y.norm_loss > 0.0);

    // pure annihilation fixes the vacuum exactly
    FockVec z = act(f, zero, WVec{Cplx(0.3, -0.2)}, vacuum(f));
    CHECK(coeff_distance(z, vacuum(f)) == 0.0);
    CHECK_FALSE(z.truncated);
}

TEST_CASE("truncation overflow raises the flag, not an error") {
    FockSpace f(1, 3);
    FockVec top = basis_vector(f, {3});
    FockVec y = create(f, 0, top);
    CHECK(y.truncated);
    CHECK(y.norm_loss > 0.0);
    for (const Cplx& c : y.coeff) CHECK(c == Cplx(0.0));

    FockVec moved = act(f, WVec{Cplx(0.5)}, WVec{Cplx(0.5)}, top);
    CHECK(moved.truncated);
    CHECK(moved.norm_loss > 0.0);
}

TEST_CASE("real-argument action is unitary") {
    FockSpace f(2, 16);
    std::mt19937 rng(76);
    for (int trial = 0; trial < 40; ++trial) {
        WVec v = random_wvec(rng, 2, 0.5);
        // closed form: <rho(v) eps_xi, rho(v) eps_eta> = <eps_xi, eps_eta>
        WVec xi = random_wvec(rng, 2, 0.7);
        WVec eta = random_wvec(rng, 2, 0.7);
        CoherentCombo ax = act_coherent(f, v, v, coherent_combo(Cplx(1.0), xi));
        CoherentCombo ay = act_coherent(f, v, v, coherent_combo(Cplx(1.0), eta));
        Cplx moved = combo_inner(f, ax, ay);
        Cplx still = coherent_inner(f, xi, eta).closed_form;
        CHECK(std::abs(moved - still) < 1e-12 * (1.0 + std::abs(still)));

        // operator path: norm preservation within truncation error; the
        // displacement is kept small enough that the mass pushed past the
        // degree bound stays negligible
        WVec vs = random_wvec(rng, 2, 0.3);
        FockVec x = random_low_degree(f, rng, 2);
        FockVec mx = act(f, vs, vs, x);
        CHECK(std::abs(delrep::norm(f, mx) - delrep::norm(f, x)) < 1e-8);
    }
}

TEST_CASE("projective relation holds in closed form") {
    FockSpace f(2, 16);
    std::mt19937 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        WVec v = random_wvec(rng, 2, 1.0);
        WVec v2 = random_wvec(rng, 2, 1.0);
        WVec xi = random_wvec(rng, 2, 1.0);
        CocycleCheck rep = cocycle_check_real(f, v, v2, xi);
        CHECK(rep.deviation <= 1e-10);
    }
    // complexified arguments: same identity on the coherent span
    for (int trial = 0; trial < 100; ++trial) {
        WVec vp = random_wvec(rng, 2, 1.0);
        WVec wm = random_wvec(rng, 2, 1.0);
        WVec vp2 = random_wvec(rng, 2, 1.0);
        WVec wm2 = random_wvec(rng, 2, 1.0);
        CocycleCheck rep = cocycle_check(f, vp, wm, vp2, wm2, random_wvec(rng, 2, 1.0));
        CHECK(rep.deviation <= 1e-10);
    }
}

TEST_CASE("distinct coherent vectors stay linearly independent") {
    FockSpace f(3, 8);
    std::mt19937 rng(78);
    for (int trial = 0; trial < 10; ++trial) {
        int k = 2 + static_cast<int>(rng() % 5); // up to 6 vectors
        std::vector<WVec> xs;
        for (int i = 0; i < k; ++i) xs.push_back(random_wvec(rng, 3, 1.0));
        Eigen::MatrixXcd gram(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                gram(i, j) = coherent_inner(f, xs[static_cast<std::size_t>(i)],
                                            xs[static_cast<std::size_t>(j)])
                                 .closed_form;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
        REQUIRE(es.info() == Eigen::Success);
        CHECK(es.eigenvalues().minCoeff() > 1e-10 * es.eigenvalues().maxCoeff());
    }
}

TEST_CASE("W-coordinates make the composition scalar the wedge phase") {
    SpectralModel circle = circle_model(4);
    std::mt19937 rng(79);
    for (double kappa : {1.0, 2.0, 3.0}) {
        FockSpace f(4, 6, Rational(static_cast<long long>(kappa)));
        for (int trial = 0; trial < 30; ++trial) {
            ModeVec nu = random_modevec(rng, circle.size(), 0.7);
            ModeVec nu2 = random_modevec(rng, circle.size(), 0.7);
            WVec w1 = w_coords(circle, nu, kappa);
            WVec w2 = w_coords(circle, nu2, kappa);
            Cplx got = heisenberg_scalar(f, w1, w1, w2, w2);
            double s = symplectic(circle, nu, nu2);
            Cplx want = std::exp(Cplx(0.0, 2.0 * pi * s));
            CHECK(std::abs(got - want) < 1e-10);
            CHECK(std::abs(std::abs(got) - 1.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS(w_coords(circle, ModeVec(circle.size() + 1, 0.0), 2.0),
                    size_error);
}

TEST_CASE("rho_lambda: torus character and Heisenberg composition") {
    SpectralModel circle = circle_model(2);
    FockSpace f(2, 20);
    std::vector<long long> lambda{3, -2};

    // nu = 0: pure phase e^{2 pi i (3/4 - 2/3)} = e^{2 pi i / 12}, exactly
    std::vector<QmodZ> eta{QmodZ(1, 4), QmodZ(1, 3)};
    FockVec x = basis_vector(f, {1, 2});
    FockVec y = rho_lambda(f, circle, lambda, eta, ModeVec(circle.size(), 0.0), x);
    Cplx expect = QmodZ(1, 12).unit();
    CHECK(coeff_distance(y, scale(expect, x)) < 1e-15);

    // composition: rho(f1) rho(f2) = e^{2 pi i integral nu ^ d nu'} rho(f1 f2)
    std::mt19937 rng(80);
    for (int trial = 0; trial < 20; ++trial) {
        // the W-coordinate scale 2 sqrt(pi/kappa) amplifies mode vectors, so
        // keep them small to stay clear of the degree bound
        ModeVec nu = random_modevec(rng, circle.size(), 0.12);
        ModeVec nu2 = random_modevec(rng, circle.size(), 0.12);
        std::vector<QmodZ> eta1{QmodZ(1, 8), QmodZ(5, 6)};
        std::vector<QmodZ> eta2{QmodZ(3, 8), QmodZ(1, 2)};
        FockVec x0 = random_low_degree(f, rng, 3);

        FockVec lhs = rho_lambda(f, circle, lambda, eta1, nu,
                                 rho_lambda(f, circle, lambda, eta2, nu2, x0));
        std::vector<QmodZ> eta_sum{eta1[0] + eta2[0], eta1[1] + eta2[1]};
        ModeVec nu_sum(circle.size());
        for (std::size_t i = 0; i < nu_sum.size(); ++i) nu_sum[i] = nu[i] + nu2[i];
        Cplx phase = std::exp(Cplx(0.0, 2.0 * pi * symplectic(circle, nu, nu2)));
        FockVec rhs = scale(phase, rho_lambda(f, circle, lambda, eta_sum, nu_sum, x0));
        CHECK(coeff_distance(lhs, rhs) < 1e-8);
    }

    CHECK_THROWS_AS(rho_lambda(f, circle, lambda, std::vector<QmodZ>{QmodZ(1, 4)},
                               ModeVec(circle.size(), 0.0), x),
                    size_error);
}
