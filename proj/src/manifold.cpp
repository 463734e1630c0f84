#include "delrep/manifold.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "delrep/errors.hpp"
#include "json.hpp"

namespace delrep {

namespace {

std::size_t b_sz(const ManifoldData& m) { return static_cast<std::size_t>(m.b); }

void check_element(const ManifoldData& m, const GElement& f, const char* who) {
    if (f.eta.size() != b_sz(m) || f.c_free.size() != b_sz(m))
        throw domain_error(std::string(who) + ": free-part coordinates do not match b");
    if (f.c_tor.residues.size() != m.torsion.rank())
        throw domain_error(std::string(who) + ": torsion coordinates do not match the group");
}

// eta . (P c), exact.
QmodZ torus_pairing(const ManifoldData& m, const std::vector<QmodZ>& eta,
                    const std::vector<long long>& c) {
    QmodZ acc;
    for (std::size_t i = 0; i < b_sz(m); ++i) {
        Int pc(0);
        for (std::size_t j = 0; j < b_sz(m); ++j)
            pc += m.pairing.at(i, j) * Int(c[j]);
        acc = acc + eta[i].times(pc);
    }
    return acc;
}

QmodZ sigma_pairing(const ManifoldData& m, const std::vector<long long>& c,
                    const std::vector<long long>& d) {
    QmodZ acc;
    for (std::size_t i = 0; i < b_sz(m); ++i) {
        if (c[i] == 0) continue;
        for (std::size_t j = 0; j < b_sz(m); ++j) {
            if (d[j] == 0) continue;
            acc = acc + m.sigma_free[i][j].times(Int(c[i]) * Int(d[j]));
        }
    }
    return acc;
}

QmodZ exact_cocycle(const ManifoldData& m, const GElement& f, const GElement& g) {
    QmodZ acc = torus_pairing(m, f.eta, g.c_free) - torus_pairing(m, g.eta, f.c_free);
    acc = acc + sigma_pairing(m, f.c_free, g.c_free);
    acc = acc + m.linking.eval(f.c_tor, g.c_tor);
    return acc;
}

} // namespace

std::vector<std::string> validate(const ManifoldData& m) {
    std::vector<std::string> out;
    if (m.k < 0) out.push_back("k is negative");
    if (m.b < 0) out.push_back("b is negative");
    if (m.pairing.rows() != b_sz(m) || m.pairing.cols() != b_sz(m)) {
        out.push_back("pairing matrix is not b x b");
        return out;
    }
    if (m.sigma_free.size() != b_sz(m)) {
        out.push_back("sigma_free is not b x b");
        return out;
    }
    for (const auto& row : m.sigma_free)
        if (row.size() != b_sz(m)) {
            out.push_back("sigma_free is not b x b");
            return out;
        }
    if (m.b > 0 && !is_unimodular(m.pairing))
        out.push_back("pairing matrix has |det| != 1");
    for (std::size_t i = 0; i < b_sz(m); ++i) {
        if (!(m.sigma_free[i][i] + m.sigma_free[i][i]).is_zero())
            out.push_back("sigma_free diagonal entry " + std::to_string(i) +
                          " is not in {0, 1/2}");
        for (std::size_t j = i + 1; j < b_sz(m); ++j)
            if (!(m.sigma_free[i][j] + m.sigma_free[j][i]).is_zero())
                out.push_back("sigma_free is not skew at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
    }
    if (m.linking.group().invariant_factors() != m.torsion.invariant_factors())
        out.push_back("linking form group differs from the torsion group");
    for (const std::string& v : delrep::validate(m.linking)) out.push_back("linking: " + v);
    return out;
}

void require_valid(const ManifoldData& m) {
    std::vector<std::string> violations = validate(m);
    if (violations.empty()) return;
    std::string msg = "invalid manifold data";
    if (!m.name.empty()) msg += " (" + m.name + ")";
    for (const std::string& v : violations) msg += "; " + v;
    throw validation_error(msg);
}

GElement zero_element(const ManifoldData& m) {
    GElement f;
    f.eta.assign(b_sz(m), QmodZ());
    f.c_free.assign(b_sz(m), 0);
    f.c_tor = m.torsion.zero();
    return f;
}

GElement g_add(const ManifoldData& m, const GElement& f, const GElement& g) {
    check_element(m, f, "g_add");
    check_element(m, g, "g_add");
    GElement h;
    h.eta.reserve(b_sz(m));
    for (std::size_t i = 0; i < b_sz(m); ++i) h.eta.push_back(f.eta[i] + g.eta[i]);
    h.nu.assign(std::max(f.nu.size(), g.nu.size()), 0.0);
    for (std::size_t i = 0; i < f.nu.size(); ++i) h.nu[i] += f.nu[i];
    for (std::size_t i = 0; i < g.nu.size(); ++i) h.nu[i] += g.nu[i];
    h.c_free.reserve(b_sz(m));
    for (std::size_t i = 0; i < b_sz(m); ++i) h.c_free.push_back(f.c_free[i] + g.c_free[i]);
    h.c_tor = m.torsion.add(f.c_tor, g.c_tor);
    return h;
}

GElement g_neg(const ManifoldData& m, const GElement& f) {
    check_element(m, f, "g_neg");
    GElement h;
    h.eta.reserve(b_sz(m));
    for (const QmodZ& e : f.eta) h.eta.push_back(-e);
    h.nu.reserve(f.nu.size());
    for (double x : f.nu) h.nu.push_back(-x);
    h.c_free.reserve(b_sz(m));
    for (long long c : f.c_free) h.c_free.push_back(-c);
    h.c_tor = m.torsion.neg(f.c_tor);
    return h;
}

CirclePhase cocycle(const ManifoldData& m, const GElement& f, const GElement& g) {
    check_element(m, f, "cocycle");
    check_element(m, g, "cocycle");
    if (!f.nu.empty() || !g.nu.empty())
        throw domain_error("cocycle: spectral parts present; pass a SpectralModel");
    return CirclePhase(exact_cocycle(m, f, g), 0.0);
}

CirclePhase cocycle(const ManifoldData& m, const SpectralModel& model, const GElement& f,
                    const GElement& g) {
    check_element(m, f, "cocycle");
    check_element(m, g, "cocycle");
    double spectral = 0.0;
    if (!f.nu.empty() && !g.nu.empty()) spectral = symplectic(model, f.nu, g.nu);
    return CirclePhase(exact_cocycle(m, f, g), spectral);
}

std::vector<long long> s_hom(const ManifoldData& m, const std::vector<long long>& xi) {
    if (xi.size() != b_sz(m)) throw domain_error("s_hom: wrong length");
    std::vector<long long> out(b_sz(m), 0);
    for (std::size_t i = 0; i < b_sz(m); ++i) {
        Int acc(0);
        for (std::size_t j = 0; j < b_sz(m); ++j) acc += m.pairing.at(i, j) * Int(xi[j]);
        out[i] = to_ll(acc);
    }
    return out;
}

Classification classify(const ManifoldData& m, long long level) {
    require_valid(m);
    if (level < 1) throw validation_error("classify: level must be >= 1");
    Classification out;
    out.level = level;
    out.irreps = irreps_for_cocycle(m.linking.scaled(level));

    // P is unimodular, so 2*level*P(Z^b) = 2*level*Z^b and the cube
    // [0, 2*level)^b is a canonical transversal.
    const long long side = 2 * level;
    std::vector<long long> lambda(b_sz(m), 0);
    while (true) {
        for (std::size_t i = 0; i < out.irreps.size(); ++i)
            out.labels.push_back(RepLabel{lambda, i});
        std::size_t pos = 0;
        while (pos < b_sz(m)) {
            if (++lambda[pos] < side) break;
            lambda[pos] = 0;
            ++pos;
        }
        if (pos == b_sz(m)) break;
    }
    return out;
}

bool labels_equivalent(const ManifoldData& m, long long level, const RepLabel& a,
                       const RepLabel& c) {
    require_valid(m);
    if (level < 1) throw validation_error("labels_equivalent: level must be >= 1");
    if (a.lambda.size() != b_sz(m) || c.lambda.size() != b_sz(m))
        throw domain_error("labels_equivalent: lambda length does not match b");

    // lambda difference in 2*level*P(Z^b) <=> P^{-1}(diff) divisible by 2*level
    if (m.b > 0) {
        IntMatrix inv = inverse_unimodular(m.pairing);
        for (std::size_t i = 0; i < b_sz(m); ++i) {
            Int acc(0);
            for (std::size_t j = 0; j < b_sz(m); ++j)
                acc += inv.at(i, j) * Int(a.lambda[j] - c.lambda[j]);
            if (acc % (2 * level) != 0) return false;
        }
    }

    std::vector<FiniteProjRep> irreps = irreps_for_cocycle(m.linking.scaled(level));
    if (a.irrep_index >= irreps.size() || c.irrep_index >= irreps.size())
        throw domain_error("labels_equivalent: irrep index out of range");
    if (a.irrep_index == c.irrep_index) return true;
    return are_equivalent(irreps[a.irrep_index], irreps[c.irrep_index]);
}

std::vector<QmodZ> tau_at(const ManifoldData& m,
                          const std::vector<std::vector<QmodZ>>& tau,
                          const GroupElement& t) {
    if (tau.size() != m.torsion.rank() || t.residues.size() != m.torsion.rank())
        throw domain_error("tau_at: shape mismatch");
    std::vector<QmodZ> out(b_sz(m));
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (tau[i].size() != b_sz(m)) throw domain_error("tau_at: shape mismatch");
        for (std::size_t a = 0; a < b_sz(m); ++a)
            out[a] = out[a] + tau[i][a].times(t.residues[i]);
    }
    return out;
}

std::vector<std::vector<QmodZ>> solve_tau(const ManifoldData& m,
                                          const std::vector<GroupElement>& theta) {
    if (theta.size() != b_sz(m))
        throw domain_error("solve_tau: theta needs one image per free generator");
    for (const GroupElement& t : theta)
        if (!m.torsion.contains(t))
            throw domain_error("solve_tau: theta image outside the torsion group");

    // tau(t_i) = P^{-T} (L(t_i, theta(e_j)))_j, exact because |det P| = 1;
    // well-defined mod 1 since the order of t_i kills the right-hand side.
    std::vector<std::vector<QmodZ>> tau;
    IntMatrix inv_pt;
    if (m.b > 0) inv_pt = inverse_unimodular(m.pairing.transpose());
    for (std::size_t i = 0; i < m.torsion.rank(); ++i) {
        GroupElement ti = m.torsion.generator(i);
        std::vector<QmodZ> rhs(b_sz(m));
        for (std::size_t j = 0; j < b_sz(m); ++j) rhs[j] = m.linking.eval(ti, theta[j]);
        std::vector<QmodZ> ti_tau(b_sz(m));
        for (std::size_t a = 0; a < b_sz(m); ++a)
            for (std::size_t j = 0; j < b_sz(m); ++j)
                ti_tau[a] = ti_tau[a] + rhs[j].times(inv_pt.at(a, j));
        // consistency of the solve: P^T tau(t_i) must reproduce the pairing row
        for (std::size_t j = 0; j < b_sz(m); ++j) {
            QmodZ back;
            for (std::size_t a = 0; a < b_sz(m); ++a)
                back = back + ti_tau[a].times(m.pairing.at(a, j));
            if (back != rhs[j])
                throw domain_error("solve_tau: tau solve inconsistent");
        }
        tau.push_back(std::move(ti_tau));
    }
    return tau;
}

TransportResult transport_decomposition(const ManifoldData& m,
                                        const std::vector<GroupElement>& theta,
                                        const RepLabel& label, long long level) {
    require_valid(m);
    if (label.lambda.size() != b_sz(m))
        throw domain_error("transport_decomposition: lambda length does not match b");

    std::vector<FiniteProjRep> irreps = irreps_for_cocycle(m.linking.scaled(level));
    if (label.irrep_index >= irreps.size())
        throw domain_error("transport_decomposition: irrep index out of range");

    TransportResult out;
    out.tau = solve_tau(m, theta);
    for (std::size_t i = 0; i < m.torsion.rank(); ++i) {
        QmodZ mu_i;
        for (std::size_t a = 0; a < b_sz(m); ++a)
            mu_i = mu_i + out.tau[i][a].times(label.lambda[a]);
        out.mu.push_back(mu_i);
    }

    out.twisted = twist(irreps[label.irrep_index], out.mu);
    out.label.lambda = label.lambda;
    out.label.irrep_index = equivalent_index(irreps, out.twisted);
    return out;
}

ManifoldData apply_splitting_change(const ManifoldData& m,
                                    const std::vector<std::vector<QmodZ>>& tau_f) {
    if (tau_f.size() != b_sz(m))
        throw domain_error("apply_splitting_change: tau_f is not b x b");
    for (const auto& col : tau_f)
        if (col.size() != b_sz(m))
            throw domain_error("apply_splitting_change: tau_f is not b x b");
    ManifoldData out = m;
    for (std::size_t i = 0; i < b_sz(m); ++i)
        for (std::size_t j = 0; j < b_sz(m); ++j) {
            QmodZ delta;
            for (std::size_t a = 0; a < b_sz(m); ++a)
                delta = delta + tau_f[i][a].times(m.pairing.at(a, j)) -
                        tau_f[j][a].times(m.pairing.at(a, i));
            out.sigma_free[i][j] = m.sigma_free[i][j] + delta;
        }
    return out;
}

SigmaNormalization normalize_sigma(const ManifoldData& m) {
    require_valid(m);
    // Want tau_f with tau_f(e_i)(P e_j) - tau_f(e_j)(P e_i) = -old(i,j) for
    // i != j. With y_i := P^T tau_f(e_i) this reads (y_i)_j - (y_j)_i =
    // -old(i,j); pick (y_i)_j = -old(i,j) for j > i and 0 otherwise, then
    // pull back through the unimodular P^T.
    SigmaNormalization out;
    out.tau_f.assign(b_sz(m), std::vector<QmodZ>(b_sz(m)));
    if (m.b > 0) {
        IntMatrix inv_pt = inverse_unimodular(m.pairing.transpose());
        for (std::size_t i = 0; i < b_sz(m); ++i) {
            std::vector<QmodZ> y(b_sz(m));
            for (std::size_t j = i + 1; j < b_sz(m); ++j) y[j] = -m.sigma_free[i][j];
            for (std::size_t a = 0; a < b_sz(m); ++a)
                for (std::size_t j = 0; j < b_sz(m); ++j)
                    out.tau_f[i][a] = out.tau_f[i][a] + y[j].times(inv_pt.at(a, j));
        }
    }
    out.normalized = apply_splitting_change(m, out.tau_f);
    for (std::size_t i = 0; i < b_sz(m); ++i)
        for (std::size_t j = 0; j < b_sz(m); ++j) {
            if (i == j) continue;
            if (!out.normalized.sigma_free[i][j].is_zero())
                throw domain_error("normalize_sigma: off-diagonal entry survived");
        }
    return out;
}

namespace {

using nlohmann::json;

QmodZ parse_qmodz_field(const json& v, const std::string& where) {
    try {
        if (v.is_number_integer()) return QmodZ(Rational(v.get<long long>()));
        if (v.is_string()) return QmodZ(parse_rational(v.get<std::string>()));
    } catch (const std::exception& e) {
        throw validation_error(where + ": " + e.what());
    }
    throw validation_error(where + ": expected a rational string \"p/q\" or an integer");
}

const json& field(const json& doc, const char* name) {
    auto it = doc.find(name);
    if (it == doc.end())
        throw validation_error(std::string(name) + ": missing field");
    return *it;
}

std::vector<std::vector<QmodZ>> parse_qmodz_matrix(const json& v, const std::string& where,
                                                   std::size_t rows, std::size_t cols) {
    if (!v.is_array() || v.size() != rows)
        throw validation_error(where + ": expected " + std::to_string(rows) + " rows");
    std::vector<std::vector<QmodZ>> out;
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = v[i];
        if (!row.is_array() || row.size() != cols)
            throw validation_error(where + "[" + std::to_string(i) + "]: expected " +
                                   std::to_string(cols) + " entries");
        std::vector<QmodZ> r;
        for (std::size_t j = 0; j < cols; ++j)
            r.push_back(parse_qmodz_field(
                row[j], where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

ManifoldData parse_manifold(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("manifold document: ") + e.what());
    }
    if (!doc.is_object()) throw validation_error("manifold document: expected an object");

    ManifoldData m;
    try {
        m.k = field(doc, "k").get<int>();
        m.b = field(doc, "b").get<int>();
    } catch (const json::exception& e) {
        throw validation_error(std::string("k/b: ") + e.what());
    }
    if (m.b < 0) throw validation_error("b: negative");
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw validation_error("name: expected a string");
        m.name = doc.at("name").get<std::string>();
    }

    const json& pj = field(doc, "pairing");
    if (!pj.is_array() || pj.size() != static_cast<std::size_t>(m.b))
        throw validation_error("pairing: expected " + std::to_string(m.b) + " rows");
    std::vector<std::vector<long long>> prows;
    for (std::size_t i = 0; i < pj.size(); ++i) {
        const json& row = pj[i];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(m.b))
            throw validation_error("pairing[" + std::to_string(i) + "]: expected " +
                                   std::to_string(m.b) + " integers");
        std::vector<long long> r;
        for (const json& v : row) {
            if (!v.is_number_integer())
                throw validation_error("pairing[" + std::to_string(i) + "]: entries must be integers");
            r.push_back(v.get<long long>());
        }
        prows.push_back(std::move(r));
    }
    m.pairing = m.b > 0 ? IntMatrix::from_rows(prows) : IntMatrix(0, 0);

    std::vector<long long> orders;
    const json& tj = field(doc, "torsion");
    if (!tj.is_array()) throw validation_error("torsion: expected an array of cyclic orders");
    for (const json& v : tj) {
        if (!v.is_number_integer() || v.get<long long>() < 1)
            throw validation_error("torsion: orders must be positive integers");
        if (v.get<long long>() > 1) orders.push_back(v.get<long long>());
    }

    const json& lj = field(doc, "linking");
    std::vector<std::vector<QmodZ>> lmat =
        parse_qmodz_matrix(lj, "linking", tj.size(), tj.size());
    // drop rows/columns of order-1 factors in step with the orders filter
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < tj.size(); ++i)
        if (tj[i].get<long long>() > 1) keep.push_back(i);
    std::vector<std::vector<QmodZ>> filtered;
    for (std::size_t i : keep) {
        std::vector<QmodZ> row;
        for (std::size_t j : keep) row.push_back(lmat[i][j]);
        filtered.push_back(std::move(row));
    }
    m.linking = form_from_presentation(orders, filtered);
    m.torsion = m.linking.group();

    m.sigma_free = parse_qmodz_matrix(field(doc, "sigma_free"), "sigma_free", b_sz(m), b_sz(m));
    return m;
}

ManifoldData load_manifold(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open manifold file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifold(ss.str());
}

std::string manifold_json(const ManifoldData& m) {
    json doc;
    doc["k"] = m.k;
    doc["b"] = m.b;
    if (!m.name.empty()) doc["name"] = m.name;
    json pj = json::array();
    for (std::size_t i = 0; i < b_sz(m); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < b_sz(m); ++j) row.push_back(to_ll(m.pairing.at(i, j)));
        pj.push_back(row);
    }
    doc["pairing"] = pj;
    doc["torsion"] = m.torsion.invariant_factors();
    json lj = json::array();
    for (std::size_t i = 0; i < m.torsion.rank(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.torsion.rank(); ++j)
            row.push_back(m.linking.entry(i, j).str());
        lj.push_back(row);
    }
    doc["linking"] = lj;
    json sj = json::array();
    for (std::size_t i = 0; i < b_sz(m); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < b_sz(m); ++j) row.push_back(m.sigma_free[i][j].str());
        sj.push_back(row);
    }
    doc["sigma_free"] = sj;
    return doc.dump(2) + "\n";
}

} // namespace delrep
