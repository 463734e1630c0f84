#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "delrep/cli.hpp"
#include "delrep/errors.hpp"
#include "delrep/manifold.hpp"

namespace delrep {

namespace {

std::string join_ll(const std::vector<long long>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

long long parse_ll(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw validation_error(std::string(what) + ": not an integer: '" + s + "'");
    }
}

// "l1,l2,...:index"
RepLabel parse_label(const std::string& s, int b) {
    std::size_t colon = s.rfind(':');
    if (colon == std::string::npos)
        throw validation_error("label: expected \"l1,l2,...:index\", got '" + s + "'");
    RepLabel label;
    std::string head = s.substr(0, colon);
    if (b > 0) {
        for (const std::string& part : split(head, ','))
            label.lambda.push_back(parse_ll(part, "label"));
    } else if (!head.empty()) {
        throw validation_error("label: lambda must be empty when b = 0");
    }
    if (static_cast<int>(label.lambda.size()) != b)
        throw validation_error("label: expected " + std::to_string(b) + " lambda entries");
    long long idx = parse_ll(s.substr(colon + 1), "label index");
    if (idx < 0) throw validation_error("label index: must be >= 0");
    label.irrep_index = static_cast<std::size_t>(idx);
    return label;
}

// rows per free generator separated by ';', residues comma-separated
std::vector<GroupElement> parse_theta(const std::string& s, const ManifoldData& m) {
    std::vector<GroupElement> theta;
    std::vector<std::string> rows = s.empty() ? std::vector<std::string>() : split(s, ';');
    if (static_cast<int>(rows.size()) != m.b)
        throw validation_error("theta: expected " + std::to_string(m.b) +
                               " rows (one torsion element per free generator)");
    for (const std::string& row : rows) {
        std::vector<std::string> parts =
            row.empty() ? std::vector<std::string>() : split(row, ',');
        if (parts.size() != m.torsion.rank())
            throw validation_error("theta: each row needs " +
                                   std::to_string(m.torsion.rank()) + " residues");
        std::vector<Int> res;
        for (const std::string& part : parts) res.emplace_back(parse_ll(part, "theta"));
        theta.push_back(m.torsion.reduce(res));
    }
    return theta;
}

int cmd_classify(const std::string& path, long long level, bool json, std::ostream& out) {
    ManifoldData m = load_manifold(path);
    Classification cl = classify(m, level);
    if (json) {
        nlohmann::json doc;
        doc["manifold"] = nlohmann::json::parse(manifold_json(m));
        doc["level"] = level;
        doc["count"] = cl.count();
        doc["classes"] = nlohmann::json::array();
        for (const RepLabel& l : cl.labels)
            doc["classes"].push_back(
                {{"lambda", l.lambda},
                 {"irrep_index", l.irrep_index},
                 {"irrep_dim", cl.irreps[l.irrep_index].dim()}});
        out << doc.dump(2) << "\n";
        return 0;
    }
    out << "manifold: " << m.name << "\n";
    out << "level: " << level << "\n";
    out << "count: " << cl.count() << "\n";
    out << "lambda\tirrep\tdim\n";
    for (const RepLabel& l : cl.labels)
        out << join_ll(l.lambda) << "\t" << l.irrep_index << "\t"
            << cl.irreps[l.irrep_index].dim() << "\n";
    return 0;
}

int cmd_irreps(const std::string& path, bool json, std::ostream& out) {
    ManifoldData m = load_manifold(path);
    std::vector<FiniteProjRep> irreps = irreps_for_cocycle(m.linking);
    if (json) {
        nlohmann::json doc;
        doc["manifold"] = nlohmann::json::parse(manifold_json(m));
        doc["count"] = irreps.size();
        doc["irreps"] = nlohmann::json::array();
        for (std::size_t i = 0; i < irreps.size(); ++i)
            doc["irreps"].push_back(
                {{"index", i}, {"dim", irreps[i].dim()}, {"exact", irreps[i].is_exact()}});
        out << doc.dump(2) << "\n";
        return 0;
    }
    out << "manifold: " << m.name << "\n";
    out << "count: " << irreps.size() << "\n";
    out << "index\tdim\texact\n";
    for (std::size_t i = 0; i < irreps.size(); ++i)
        out << i << "\t" << irreps[i].dim() << "\t" << (irreps[i].is_exact() ? "yes" : "no")
            << "\n";
    return 0;
}

int cmd_equiv(const std::string& path, const std::string& s1, const std::string& s2,
              long long level, std::ostream& out) {
    ManifoldData m = load_manifold(path);
    RepLabel l1 = parse_label(s1, m.b);
    RepLabel l2 = parse_label(s2, m.b);
    std::vector<FiniteProjRep> irreps = irreps_for_cocycle(m.linking.scaled(level));
    if (l1.irrep_index >= irreps.size() || l2.irrep_index >= irreps.size())
        throw validation_error("label index: out of range (have " +
                               std::to_string(irreps.size()) + " irreducibles)");
    bool eq = labels_equivalent(m, level, l1, l2);
    out << "manifold: " << m.name << "\n";
    out << "level: " << level << "\n";
    out << "label1: " << join_ll(l1.lambda) << ":" << l1.irrep_index << "\n";
    out << "label2: " << join_ll(l2.lambda) << ":" << l2.irrep_index << "\n";
    out << "equivalent: " << (eq ? "yes" : "no") << "\n";
    return 0;
}

int cmd_transport(const std::string& path, const std::string& theta_str, std::ostream& out) {
    ManifoldData m = load_manifold(path);
    std::vector<GroupElement> theta = parse_theta(theta_str, m);
    Classification cl = classify(m, 1);
    out << "manifold: " << m.name << "\n";
    out << "tau (per torsion generator):\n";
    for (const auto& row : solve_tau(m, theta)) {
        out << " ";
        for (const QmodZ& q : row) out << " " << q.str();
        out << "\n";
    }
    out << "labels (lambda : irrep -> irrep', mu):\n";
    for (const RepLabel& l : cl.labels) {
        TransportResult tr = transport_decomposition(m, theta, l);
        out << join_ll(l.lambda) << " : " << l.irrep_index << " -> " << tr.label.irrep_index
            << "  mu =";
        for (const QmodZ& q : tr.mu) out << " " << q.str();
        out << "\n";
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"classification of projective unitary representations attached to "
                 "(4k+1)-manifold cohomology data"};
    app.name("delrep");
    app.require_subcommand(1);

    std::string path, label1, label2, theta;
    long long level = 1;
    bool as_json = false;
    SelftestOptions st;
    if (const char* env = std::getenv("DELREP_SEED"))
        st.seed = static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));

    std::function<int()> action;

    CLI::App* c = app.add_subcommand("classify", "List the classes of irreducible "
                                                 "admissible representations");
    c->add_option("file", path, "manifold data (JSON)")->required();
    c->add_option("--level", level, "cocycle level (>= 1)")->capture_default_str();
    c->add_flag("--json", as_json, "machine-readable output");
    c->callback([&]() { action = [&]() { return cmd_classify(path, level, as_json, out); }; });

    CLI::App* i = app.add_subcommand("irreps", "List the irreducible projective "
                                               "representations of the torsion part");
    i->add_option("file", path, "manifold data (JSON)")->required();
    i->add_flag("--json", as_json, "machine-readable output");
    i->callback([&]() { action = [&]() { return cmd_irreps(path, as_json, out); }; });

    CLI::App* e = app.add_subcommand("equiv", "Decide equivalence of two class labels");
    e->add_option("file", path, "manifold data (JSON)")->required();
    e->add_option("--label1", label1, "first label as l1,l2,...:index")->required();
    e->add_option("--label2", label2, "second label as l1,l2,...:index")->required();
    e->add_option("--level", level, "cocycle level (>= 1)")->capture_default_str();
    e->callback(
        [&]() { action = [&]() { return cmd_equiv(path, label1, label2, level, out); }; });

    CLI::App* t = app.add_subcommand("transport", "Re-express the decomposition after a "
                                                  "change of free/torsion splitting");
    t->add_option("file", path, "manifold data (JSON)")->required();
    t->add_option("--theta", theta,
                  "torsion elements, one row per free generator: r1,r2;r1,r2;...")
        ->required();
    t->callback([&]() { action = [&]() { return cmd_transport(path, theta, out); }; });

    CLI::App* s = app.add_subcommand("selftest", "Run the property batteries");
    s->add_option("--suite", st.suite, "fock|spectral|induced|finheis|intertwine|all")
        ->capture_default_str();
    s->add_option("--seed", st.seed, "battery seed")->capture_default_str();
    s->add_option("--trials", st.trials, "trials per battery")->capture_default_str();
    s->add_option("--tol", st.tol, "numeric tolerance")->capture_default_str();
    s->add_option("--window", st.window, "induced suite: window radius")->capture_default_str();
    s->add_option("--modes", st.modes, "induced suite: harmonic mode count")
        ->capture_default_str();
    s->add_option("--degree", st.degree, "induced suite: Fock truncation degree")
        ->capture_default_str();
    s->callback([&]() { action = [&]() { return run_selftest(st, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& pe) {
        err << "error: " << pe.what() << "\n";
        return 1;
    }

    try {
        return action();
    } catch (const window_overflow& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    } catch (const validation_error& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    } catch (const domain_error& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    } catch (const size_error& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }
}

} // namespace delrep
