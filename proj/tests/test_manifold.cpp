#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "delrep/errors.hpp"
#include "delrep/manifold.hpp"

using namespace delrep;

namespace {

QmodZ qz(const std::string& s) { return QmodZ(parse_rational(s)); }

std::string data_path(const std::string& name) {
    return std::string(DELREP_DATA_DIR) + "/" + name;
}

std::vector<std::vector<QmodZ>> sigma_of(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<QmodZ>> out;
    for (const auto& r : rows) {
        std::vector<QmodZ> row;
        for (const auto& s : r) row.push_back(qz(s));
        out.push_back(row);
    }
    return out;
}

ManifoldData circle_data() {
    ManifoldData m;
    m.k = 0;
    m.b = 1;
    m.pairing = IntMatrix::from_rows({{1}});
    m.sigma_free = sigma_of({{"1/2"}});
    m.name = "circle";
    return m;
}

ManifoldData shear_data() {
    // b = 2, P = [[1,1],[0,1]], sigma off-diagonal 1/3, torsion Z_2.
    ManifoldData m;
    m.k = 1;
    m.b = 2;
    m.pairing = IntMatrix::from_rows({{1, 1}, {0, 1}});
    m.sigma_free = sigma_of({{"0", "1/3"}, {"2/3", "0"}});
    m.linking = z2_diag_form();
    m.torsion = m.linking.group();
    m.name = "shear";
    return m;
}

ManifoldData mixed_data() {
    // b = 1, P = [1], torsion Z_2 with the half form: the transport example.
    ManifoldData m;
    m.k = 1;
    m.b = 1;
    m.pairing = IntMatrix::from_rows({{1}});
    m.sigma_free = sigma_of({{"0"}});
    m.linking = z2_diag_form();
    m.torsion = m.linking.group();
    m.name = "mixed";
    return m;
}

IntMatrix random_unimodular(std::size_t n, std::mt19937& rng) {
    IntMatrix p = IntMatrix::identity(n);
    if (n < 2) return p;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (int step = 0; step < 6; ++step) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        if (step % 2 == 0)
            p.add_row(i, j, Int(coeff(rng)));
        else
            p.add_col(i, j, Int(coeff(rng)));
    }
    return p;
}

std::vector<std::vector<QmodZ>> random_sigma(std::size_t n, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(0, 11);
    std::uniform_int_distribution<int> diag(0, 1);
    std::vector<std::vector<QmodZ>> s(n, std::vector<QmodZ>(n));
    for (std::size_t i = 0; i < n; ++i) {
        s[i][i] = diag(rng) ? QmodZ::half() : QmodZ();
        for (std::size_t j = i + 1; j < n; ++j) {
            s[i][j] = QmodZ(num(rng), 12);
            s[j][i] = -s[i][j];
        }
    }
    return s;
}

GElement random_lattice_element(const ManifoldData& m, std::mt19937& rng) {
    std::uniform_int_distribution<long long> num(0, 9);
    std::uniform_int_distribution<long long> cc(-4, 4);
    GElement f = zero_element(m);
    for (int i = 0; i < m.b; ++i) {
        f.eta[i] = QmodZ(num(rng), 10);
        f.c_free[i] = cc(rng);
    }
    if (m.torsion.rank() > 0)
        f.c_tor = m.torsion.element_at(
            std::uniform_int_distribution<long long>(0, m.torsion.order() - 1)(rng));
    return f;
}

} // namespace

TEST_CASE("manifold validation catches shape and structure violations") {
    CHECK(validate(circle_data()).empty());
    CHECK(validate(shear_data()).empty());

    ManifoldData bad = circle_data();
    bad.pairing = IntMatrix::from_rows({{2}});
    auto v = validate(bad);
    REQUIRE(!v.empty());
    CHECK(v[0].find("det") != std::string::npos);
    CHECK_THROWS_AS(require_valid(bad), validation_error);

    bad = circle_data();
    bad.sigma_free = sigma_of({{"1/4"}});
    v = validate(bad);
    REQUIRE(!v.empty());
    CHECK(v[0].find("diagonal") != std::string::npos);

    bad = shear_data();
    bad.sigma_free[1][0] = qz("1/3"); // breaks skewness
    v = validate(bad);
    REQUIRE(!v.empty());
    CHECK(v[0].find("skew") != std::string::npos);

    // bad shapes are reported rather than crashing
    bad = shear_data();
    bad.sigma_free.pop_back();
    CHECK(!validate(bad).empty());
    bad = shear_data();
    bad.pairing = IntMatrix::from_rows({{1}});
    CHECK(!validate(bad).empty());

    // degenerate linking: L = [1/2] on Z_4 kills 2t
    ManifoldData torbad = mixed_data();
    torbad.linking = LinkingForm(FinAbGroup({4}), {{QmodZ::half()}});
    torbad.torsion = torbad.linking.group();
    v = validate(torbad);
    REQUIRE(!v.empty());
    CHECK(v[0].find("linking:") != std::string::npos);

    // torsion group must agree with the form's group
    torbad = mixed_data();
    torbad.torsion = FinAbGroup({4});
    CHECK(!validate(torbad).empty());
}

TEST_CASE("group operations are componentwise with exact torus wrap") {
    ManifoldData m = shear_data();
    GElement f = zero_element(m);
    GElement g = zero_element(m);
    f.eta = {qz("3/4"), qz("1/2")};
    g.eta = {qz("1/2"), qz("2/3")};
    f.c_free = {2, -1};
    g.c_free = {-3, 4};
    f.c_tor = m.torsion.generator(0);
    g.c_tor = m.torsion.generator(0);
    f.nu = {1.0, 2.0};
    g.nu = {0.5, -1.0, 3.0};

    GElement h = g_add(m, f, g);
    CHECK(h.eta[0] == qz("1/4"));
    CHECK(h.eta[1] == qz("1/6"));
    CHECK(h.c_free == std::vector<long long>{-1, 3});
    CHECK(h.c_tor.is_zero());
    REQUIRE(h.nu.size() == 3);
    CHECK(h.nu[0] == doctest::Approx(1.5));
    CHECK(h.nu[2] == doctest::Approx(3.0));

    GElement back = g_add(m, h, g_neg(m, g));
    CHECK(back.eta[0] == f.eta[0]);
    CHECK(back.eta[1] == f.eta[1]);
    CHECK(back.c_free == f.c_free);
    CHECK(back.c_tor == f.c_tor);

    GElement z = g_add(m, f, zero_element(m));
    CHECK(z.eta[0] == f.eta[0]);
    CHECK(z.c_free == f.c_free);

    GElement wrong = zero_element(m);
    wrong.eta.pop_back();
    CHECK_THROWS_AS(g_add(m, f, wrong), domain_error);
}

TEST_CASE("lattice cocycle slots match a longhand oracle") {
    ManifoldData m = shear_data();
    GElement f = zero_element(m);
    GElement g = zero_element(m);
    f.eta = {qz("1/5"), QmodZ()};
    f.c_free = {2, 1};
    f.c_tor = m.torsion.generator(0);
    g.eta = {QmodZ(), qz("1/7")};
    g.c_free = {1, 1};
    g.c_tor = m.torsion.generator(0);

    // P c' = (2,1), P c = (3,1);
    // eta(Pc') = 2/5, eta'(Pc) = 1/7,
    // sigma(c,c') = 2*1*(1/3) + 1*1*(2/3) = 4/3, L(t,t') = 1/2;
    // total = 2/5 - 1/7 + 1/3 + 1/2 = 19/210 mod 1.
    CirclePhase c = cocycle(m, f, g);
    CHECK(c.is_exact());
    CHECK(c.exact() == QmodZ(19, 210));
}

TEST_CASE("cocycle is skew with two-torsion diagonal and biadditive") {
    std::mt19937 rng(4457);
    for (ManifoldData m : {shear_data(), mixed_data(), circle_data()}) {
        for (int trial = 0; trial < 40; ++trial) {
            GElement f = random_lattice_element(m, rng);
            GElement g = random_lattice_element(m, rng);
            GElement h = random_lattice_element(m, rng);

            CHECK((cocycle(m, f, g) + cocycle(m, g, f)).exact().is_zero());
            QmodZ d = cocycle(m, f, f).exact();
            CHECK((d + d).is_zero());
            CHECK(cocycle(m, g_add(m, f, h), g).exact() ==
                  cocycle(m, f, g).exact() + cocycle(m, h, g).exact());
            CHECK(cocycle(m, zero_element(m), g).exact().is_zero());
        }
    }
}

TEST_CASE("spectral slot rides in the float component") {
    ManifoldData m = circle_data();
    SpectralModel model = circle_model(4);
    GElement f = zero_element(m);
    GElement g = zero_element(m);
    f.eta = {qz("1/3")};
    f.c_free = {1};
    f.nu.assign(model.size(), 0.0);
    g.nu.assign(model.size(), 0.0);
    f.nu[0] = 1.0;
    f.nu[2] = 0.5;
    g.nu[0] = 0.25;
    g.nu[1] = -1.0;
    g.eta = {qz("1/4")};
    g.c_free = {2};

    CirclePhase c = cocycle(m, model, f, g);
    CHECK(c.rest() == symplectic(model, f.nu, g.nu));
    // exact slot agrees with the nu-free cocycle of the same lattice data
    GElement f0 = f, g0 = g;
    f0.nu.clear();
    g0.nu.clear();
    CHECK(c.exact() == cocycle(m, f0, g0).exact());

    // the nu-free overload refuses spectral content
    CHECK_THROWS_AS(cocycle(m, f, g), domain_error);
}

TEST_CASE("s_hom applies the pairing matrix") {
    ManifoldData m = shear_data();
    CHECK(s_hom(m, {1, 2}) == std::vector<long long>{3, 2});
    CHECK(s_hom(m, {0, 0}) == std::vector<long long>{0, 0});
    CHECK_THROWS_AS(s_hom(m, {1}), domain_error);
}

TEST_CASE("circle classification counts two classes per level unit") {
    ManifoldData m = circle_data();
    Classification c1 = classify(m);
    CHECK(c1.count() == 2);
    REQUIRE(c1.irreps.size() == 1);
    CHECK(c1.irreps[0].dim() == 1);
    CHECK(c1.labels[0].lambda == std::vector<long long>{0});
    CHECK(c1.labels[1].lambda == std::vector<long long>{1});

    CHECK(classify(m, 2).count() == 4);
    CHECK(classify(m, 3).count() == 6);
    CHECK_THROWS_AS(classify(m, 0), validation_error);
}

TEST_CASE("torsion-free counts are two to the b") {
    std::mt19937 rng(9001);
    for (int b = 0; b <= 4; ++b) {
        ManifoldData m;
        m.k = 1;
        m.b = b;
        m.pairing = random_unimodular(static_cast<std::size_t>(b), rng);
        m.sigma_free = random_sigma(static_cast<std::size_t>(b), rng);
        m.name = "synthetic b=" + std::to_string(b);
        CHECK(classify(m).count() == (1LL << b));
    }
}

TEST_CASE("classification count matches the regularity scan on torsion batteries") {
    std::mt19937 rng(311);
    for (const LinkingForm& l : battery_forms(16)) {
        for (int b = 0; b <= 2; ++b) {
            for (long long level = 1; level <= 2; ++level) {
                ManifoldData m;
                m.k = 1;
                m.b = b;
                m.pairing = random_unimodular(static_cast<std::size_t>(b), rng);
                m.sigma_free = random_sigma(static_cast<std::size_t>(b), rng);
                m.linking = l;
                m.torsion = l.group();

                Classification c = classify(m, level);
                long long side = 1;
                for (int i = 0; i < b; ++i) side *= 2 * level;
                long long r = count_regular_scan(l.scaled(level));
                CHECK(c.count() == side * r);
                CHECK(static_cast<long long>(c.irreps.size()) == r);
                long long dimsq = 0;
                for (const FiniteProjRep& rep : c.irreps)
                    dimsq += static_cast<long long>(rep.dim()) * rep.dim();
                CHECK(dimsq == m.torsion.order());
            }
        }
    }
}

TEST_CASE("label equivalence is the coset test plus irrep matching") {
    ManifoldData s1 = circle_data();
    CHECK(labels_equivalent(s1, 1, {{0}, 0}, {{2}, 0}));
    CHECK(!labels_equivalent(s1, 1, {{0}, 0}, {{1}, 0}));
    CHECK(labels_equivalent(s1, 1, {{0}, 0}, {{0}, 0}));
    CHECK(labels_equivalent(s1, 2, {{0}, 0}, {{4}, 0}));
    CHECK(!labels_equivalent(s1, 2, {{0}, 0}, {{2}, 0}));

    ManifoldData m = shear_data();
    // difference must land in 2 P(Z^2)
    CHECK(labels_equivalent(m, 1, {{0, 0}, 0}, {{2, 0}, 0}));
    CHECK(labels_equivalent(m, 1, {{0, 0}, 0}, {{4, 2}, 0}));
    CHECK(!labels_equivalent(m, 1, {{0, 0}, 0}, {{1, 1}, 0}));
    // same lambda, inequivalent irreps of the Z_2 half form
    Classification c = classify(m);
    REQUIRE(c.irreps.size() == 2);
    CHECK(!labels_equivalent(m, 1, {{0, 0}, 0}, {{0, 0}, 1}));

    // the classification is one representative per class
    Classification cs = classify(s1, 2);
    for (std::size_t i = 0; i < cs.labels.size(); ++i)
        for (std::size_t j = i + 1; j < cs.labels.size(); ++j)
            CHECK(!labels_equivalent(s1, 2, cs.labels[i], cs.labels[j]));

    CHECK_THROWS_AS(labels_equivalent(s1, 1, {{0, 0}, 0}, {{0}, 0}), domain_error);
    CHECK_THROWS_AS(labels_equivalent(s1, 1, {{0}, 5}, {{0}, 0}), domain_error);
    CHECK_THROWS_AS(labels_equivalent(s1, 0, {{0}, 0}, {{0}, 0}), validation_error);
}

TEST_CASE("decomposition transport twists by the linking pairing") {
    ManifoldData m = mixed_data();
    std::vector<GroupElement> theta = {m.torsion.generator(0)};
    Classification c = classify(m);
    REQUIRE(c.irreps.size() == 2);

    RepLabel label{{1}, 0};
    TransportResult tr = transport_decomposition(m, theta, label);
    REQUIRE(tr.tau.size() == 1);
    CHECK(tr.tau[0][0] == QmodZ::half()); // P^{-T} L(t, theta(e_1)) = 1/2
    CHECK(tr.mu[0] == QmodZ::half());     // lambda = 1
    CHECK(tr.label.lambda == label.lambda);
    CHECK(tr.label.irrep_index == 1);     // the twist sends pi(1) -> -pi(1)
    CMatrix flipped = tr.twisted.matrix(m.torsion.generator(0)) +
                      c.irreps[0].matrix(m.torsion.generator(0));
    CHECK(flipped.norm() < 1e-12);

    // even lambda leaves the class alone; so does theta = 0
    CHECK(transport_decomposition(m, theta, RepLabel{{2}, 0}).label.irrep_index == 0);
    CHECK(transport_decomposition(m, {m.torsion.zero()}, label).label.irrep_index == 0);

    // applying the same change twice is the identity on classes
    TransportResult twice = transport_decomposition(m, theta, tr.label);
    CHECK(twice.label.irrep_index == label.irrep_index);

    CHECK_THROWS_AS(transport_decomposition(m, {}, label), domain_error);
    CHECK_THROWS_AS(transport_decomposition(m, theta, RepLabel{{0}, 7}), domain_error);
    CHECK_THROWS_AS(transport_decomposition(m, {GroupElement{{0, 0}}}, label), domain_error);
}

TEST_CASE("transport tau solves the pairing constraint on every generator") {
    // Z_4 x Z_4 hyperbolic torsion under a shear pairing matrix.
    ManifoldData m;
    m.k = 1;
    m.b = 2;
    m.pairing = IntMatrix::from_rows({{1, 1}, {0, 1}});
    m.sigma_free = sigma_of({{"0", "0"}, {"0", "0"}});
    m.linking = hyperbolic_form(4);
    m.torsion = m.linking.group();

    std::vector<GroupElement> theta = {m.torsion.generator(0),
                                       m.torsion.add(m.torsion.generator(0),
                                                     m.torsion.generator(1))};
    TransportResult tr = transport_decomposition(m, theta, RepLabel{{1, 2}, 0});

    for (std::size_t i = 0; i < m.torsion.rank(); ++i) {
        GroupElement ti = m.torsion.generator(i);
        for (std::size_t j = 0; j < 2; ++j) {
            QmodZ lhs; // (P^T tau(t_i))_j
            for (std::size_t a = 0; a < 2; ++a)
                lhs = lhs + tr.tau[i][a].times(m.pairing.at(a, j));
            CHECK(lhs == m.linking.eval(ti, theta[j]));
        }
    }

    // tau_at extends linearly over the residues
    GroupElement t = m.torsion.add(m.torsion.generator(0),
                                   m.torsion.scale(3, m.torsion.generator(1)));
    std::vector<QmodZ> at = tau_at(m, tr.tau, t);
    for (std::size_t a = 0; a < 2; ++a)
        CHECK(at[a] == tr.tau[0][a] + tr.tau[1][a].times(3));

    // mu is lambda . tau
    for (std::size_t i = 0; i < m.torsion.rank(); ++i)
        CHECK(tr.mu[i] == tr.tau[i][0].times(1) + tr.tau[i][1].times(2));
}

TEST_CASE("splitting changes shift sigma by a coboundary and can kill the off-diagonal") {
    ManifoldData m = shear_data();

    SigmaNormalization norm = normalize_sigma(m);
    CHECK(norm.normalized.sigma_free[0][1].is_zero());
    CHECK(norm.normalized.sigma_free[1][0].is_zero());
    CHECK(norm.normalized.sigma_free[0][0] == m.sigma_free[0][0]);
    CHECK(norm.normalized.sigma_free[1][1] == m.sigma_free[1][1]);
    CHECK(validate(norm.normalized).empty());

    // the change really is apply_splitting_change with the reported tau_f
    ManifoldData redo = apply_splitting_change(m, norm.tau_f);
    CHECK(redo.sigma_free == norm.normalized.sigma_free);

    // inverting the change restores the original splitting data
    std::vector<std::vector<QmodZ>> neg = norm.tau_f;
    for (auto& col : neg)
        for (auto& x : col) x = -x;
    CHECK(apply_splitting_change(norm.normalized, neg).sigma_free == m.sigma_free);

    // a diagonal-only sigma is already normalized
    ManifoldData diag = circle_data();
    SigmaNormalization id = normalize_sigma(diag);
    CHECK(id.normalized.sigma_free == diag.sigma_free);
    CHECK(id.tau_f[0][0].is_zero());

    // diagonal entries survive arbitrary changes of splitting
    std::mt19937 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        ManifoldData r;
        r.k = 1;
        r.b = 3;
        r.pairing = random_unimodular(3, rng);
        r.sigma_free = random_sigma(3, rng);
        std::uniform_int_distribution<int> num(0, 5);
        std::vector<std::vector<QmodZ>> tau(3, std::vector<QmodZ>(3));
        for (auto& col : tau)
            for (auto& x : col) x = QmodZ(num(rng), 6);
        ManifoldData moved = apply_splitting_change(r, tau);
        for (int i = 0; i < 3; ++i)
            CHECK(moved.sigma_free[i][i] == r.sigma_free[i][i]);
        CHECK(validate(moved).empty());

        SigmaNormalization n3 = normalize_sigma(r);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) CHECK(n3.normalized.sigma_free[i][j].is_zero());
        CHECK(validate(n3.normalized).empty());
    }
}

TEST_CASE("JSON corpus loads and round-trips") {
    ManifoldData s1 = load_manifold(data_path("s1.json"));
    CHECK(s1.name == "S^1");
    CHECK(s1.k == 0);
    CHECK(s1.b == 1);
    CHECK(s1.sigma_free[0][0] == QmodZ::half());
    CHECK(validate(s1).empty());
    CHECK(classify(s1).count() == 2);

    ManifoldData rp5 = load_manifold(data_path("rp5.json"));
    CHECK(rp5.b == 0);
    CHECK(rp5.torsion.invariant_factors() == std::vector<long long>{2});
    CHECK(rp5.linking.entry(0, 0) == QmodZ::half());
    CHECK(classify(rp5).count() == 2);

    ManifoldData s2 = load_manifold(data_path("s2xs3.json"));
    CHECK(validate(s2).empty());
    CHECK(classify(s2).count() == 2);

    ManifoldData mix = load_manifold(data_path("rp5xS.json"));
    CHECK(validate(mix).empty());
    CHECK(classify(mix).count() == 4); // 2^1 * r with r = 2

    for (const ManifoldData& m : {s1, rp5, mix}) {
        ManifoldData again = parse_manifold(manifold_json(m));
        CHECK(again.k == m.k);
        CHECK(again.b == m.b);
        CHECK(again.name == m.name);
        CHECK(again.pairing == m.pairing);
        CHECK(again.torsion.invariant_factors() == m.torsion.invariant_factors());
        CHECK(again.linking == m.linking);
        CHECK(again.sigma_free == m.sigma_free);
    }
}

TEST_CASE("JSON rejection diagnostics name the offending field") {
    auto message_of = [](const std::string& text) {
        try {
            parse_manifold(text);
        } catch (const validation_error& e) {
            return std::string(e.what());
        }
        return std::string("(no error)");
    };

    CHECK(message_of("{ not json") .find("manifold document") != std::string::npos);
    CHECK(message_of("[1,2]").find("expected an object") != std::string::npos);
    CHECK(message_of(R"({"k":0,"b":1,"torsion":[],"linking":[],"sigma_free":[["0"]]})")
              .find("pairing") != std::string::npos);

    std::string base = R"({"k":0,"b":1,"pairing":[[1]],"torsion":[],"linking":[],)";
    CHECK(message_of(base + R"("sigma_free":[["1/0"]]})").find("sigma_free[0][0]") !=
          std::string::npos);
    CHECK(message_of(base + R"("sigma_free":[["2/4x"]]})").find("sigma_free[0][0]") !=
          std::string::npos);
    CHECK(message_of(base + R"("sigma_free":[[true]]})").find("sigma_free[0][0]") !=
          std::string::npos);
    CHECK(message_of(base + R"("sigma_free":[["0","0"]]})").find("sigma_free[0]") !=
          std::string::npos);

    CHECK(message_of(R"({"k":0,"b":1,"pairing":[["x"]],"torsion":[],"linking":[],"sigma_free":[["0"]]})")
              .find("pairing") != std::string::npos);
    CHECK(message_of(R"({"k":0,"b":0,"pairing":[],"torsion":[0],"linking":[[]],"sigma_free":[]})")
              .find("torsion") != std::string::npos);
    CHECK(message_of(R"({"k":0,"b":0,"pairing":[],"torsion":[2],"linking":[],"sigma_free":[]})")
              .find("linking") != std::string::npos);
}

TEST_CASE("arbitrary torsion presentations are canonicalized") {
    // [2,3] is not a divisibility chain; canonical form is Z_6
    ManifoldData m = parse_manifold(
        R"({"k":1,"b":0,"pairing":[],"torsion":[2,3],)"
        R"("linking":[["0","0"],["0","0"]],"sigma_free":[]})");
    CHECK(m.torsion.invariant_factors() == std::vector<long long>{6});

    // order-1 factors are dropped together with their pairing rows
    m = parse_manifold(
        R"({"k":1,"b":0,"pairing":[],"torsion":[1,2],)"
        R"("linking":[["0","0"],["0","1/2"]],"sigma_free":[]})");
    CHECK(m.torsion.invariant_factors() == std::vector<long long>{2});
    CHECK(m.linking.entry(0, 0) == QmodZ::half());
    CHECK(validate(m).empty());

    // a chain presentation passes through unchanged
    m = parse_manifold(
        R"({"k":1,"b":0,"pairing":[],"torsion":[4,4],)"
        R"("linking":[["0","1/4"],["3/4","0"]],"sigma_free":[]})");
    CHECK(m.torsion.invariant_factors() == std::vector<long long>{4, 4});
    CHECK(m.linking == hyperbolic_form(4));
    CHECK(validate(m).empty());
}
