#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "delrep/cli.hpp"
#include "delrep/manifold.hpp"

using namespace delrep;

namespace {

std::string data_path(const std::string& name) {
    return std::string(DELREP_DATA_DIR) + "/" + name;
}

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    CliResult r;
    r.code = run_cli(args, o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("classify prints the class listing and the exact counts") {
    CliResult r = run({"classify", data_path("s1.json")});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "manifold: S^1"));
    CHECK(contains(r.out, "count: 2"));

    CliResult r2 = run({"classify", data_path("s1.json"), "--level", "3"});
    CHECK(r2.code == 0);
    CHECK(contains(r2.out, "count: 6"));

    CliResult r3 = run({"classify", data_path("rp5.json")});
    CHECK(r3.code == 0);
    CHECK(contains(r3.out, "count: 2"));

    CliResult r4 = run({"classify", data_path("rp5xS.json")});
    CHECK(r4.code == 0);
    CHECK(contains(r4.out, "count: 4"));

    // identical invocations produce identical bytes
    CHECK(run({"classify", data_path("s1.json")}).out == r.out);
}

TEST_CASE("classify --json emits a document whose manifold round-trips") {
    CliResult r = run({"classify", data_path("rp5xS.json"), "--json", "--level", "2"});
    REQUIRE(r.code == 0);
    nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("level").get<long long>() == 2);
    CHECK(doc.at("count").get<long long>() == 8);
    CHECK(doc.at("classes").size() == 8);
    for (const auto& cls : doc.at("classes")) {
        CHECK(cls.at("lambda").is_array());
        CHECK(cls.at("irrep_dim").get<int>() >= 1);
    }
    ManifoldData echoed = parse_manifold(doc.at("manifold").dump());
    ManifoldData loaded = load_manifold(data_path("rp5xS.json"));
    CHECK(manifold_json(echoed) == manifold_json(loaded));
}

TEST_CASE("irreps lists one row per irreducible of the torsion cocycle") {
    CliResult r = run({"irreps", data_path("rp5.json")});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "count: 2"));
    CHECK(contains(r.out, "0\t1\tyes"));
    CHECK(contains(r.out, "1\t1\tyes"));

    CliResult rj = run({"irreps", data_path("rp5.json"), "--json"});
    REQUIRE(rj.code == 0);
    nlohmann::json doc = nlohmann::json::parse(rj.out);
    CHECK(doc.at("count").get<int>() == 2);
    CHECK(doc.at("irreps").size() == 2);
    CHECK(doc.at("irreps")[0].at("dim").get<int>() == 1);
    ManifoldData echoed = parse_manifold(doc.at("manifold").dump());
    CHECK(manifold_json(echoed) == manifold_json(load_manifold(data_path("rp5.json"))));
}

TEST_CASE("equiv answers the coset question for label pairs") {
    CliResult yes = run({"equiv", data_path("s1.json"), "--label1", "0:0", "--label2", "2:0"});
    CHECK(yes.code == 0);
    CHECK(contains(yes.out, "equivalent: yes"));

    CliResult no = run({"equiv", data_path("s1.json"), "--label1", "0:0", "--label2", "1:0"});
    CHECK(no.code == 0);
    CHECK(contains(no.out, "equivalent: no"));

    // at level 2 the lattice is 4Z, so 0 and 2 separate
    CliResult lvl = run({"equiv", data_path("s1.json"), "--label1", "0:0", "--label2", "2:0",
                         "--level", "2"});
    CHECK(lvl.code == 0);
    CHECK(contains(lvl.out, "equivalent: no"));

    CliResult bad = run({"equiv", data_path("s1.json"), "--label1", "x:0", "--label2", "0:0"});
    CHECK(bad.code == 1);
    CHECK(contains(bad.err, "error:"));

    CliResult range =
        run({"equiv", data_path("s1.json"), "--label1", "0:7", "--label2", "0:0"});
    CHECK(range.code == 1);
    CHECK(contains(range.err, "out of range"));
}

TEST_CASE("transport prints tau and the twisted labels") {
    CliResult r = run({"transport", data_path("rp5xS.json"), "--theta", "1"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "tau (per torsion generator):"));
    CHECK(contains(r.out, "1/2"));
    CHECK(contains(r.out, "0 : 0 -> 0  mu = 0"));
    CHECK(contains(r.out, "1 : 0 -> 1  mu = 1/2"));
    CHECK(contains(r.out, "1 : 1 -> 0  mu = 1/2"));

    CliResult bad = run({"transport", data_path("rp5xS.json"), "--theta", "1;1"});
    CHECK(bad.code == 1);
    CHECK(contains(bad.err, "theta"));
}

TEST_CASE("selftest is deterministic, reports, and honors the exit contract") {
    CliResult ok = run({"selftest", "--suite", "finheis", "--seed", "7"});
    CHECK(ok.code == 0);
    CHECK(contains(ok.out, "all properties hold"));
    CHECK(run({"selftest", "--suite", "finheis", "--seed", "7"}).out == ok.out);

    CliResult fail = run({"selftest", "--suite", "fock", "--trials", "20", "--tol", "1e-30"});
    CHECK(fail.code == 2);
    CHECK(contains(fail.out, "FAIL"));
    CHECK(contains(fail.out, "reproduce: selftest --suite fock"));

    CliResult bad = run({"selftest", "--suite", "nosuch"});
    CHECK(bad.code == 1);
    CHECK(contains(bad.err, "unknown suite"));

    CliResult geom = run({"selftest", "--suite", "induced", "--trials", "20", "--window", "4",
                          "--modes", "2", "--degree", "12"});
    CHECK(geom.code == 0);
    CHECK(contains(geom.out, "all properties hold"));

    CliResult thin = run({"selftest", "--suite", "induced", "--window", "2"});
    CHECK(thin.code == 1);
    CHECK(contains(thin.err, "window"));
}

TEST_CASE("input problems exit with code 1 and a diagnostic") {
    CliResult missing = run({"classify", data_path("absent.json")});
    CHECK(missing.code == 1);
    CHECK(contains(missing.err, "error:"));

    std::string bad_path = data_path("../build/bad_manifold.json");
    {
        std::ofstream f(bad_path);
        f << "{\"k\":0,\"b\":1,\"pairing\":[[2]],\"torsion\":[],\"linking\":[],"
             "\"sigma_free\":[[\"1/2\"]]}";
    }
    CliResult invalid = run({"classify", bad_path});
    CHECK(invalid.code == 1);
    CHECK(contains(invalid.err, "det"));
    std::remove(bad_path.c_str());

    CliResult lvl = run({"classify", data_path("s1.json"), "--level", "0"});
    CHECK(lvl.code == 1);
    CHECK(contains(lvl.err, "level"));

    CliResult flag = run({"classify", data_path("s1.json"), "--nosuchflag"});
    CHECK(flag.code == 1);

    CliResult help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(contains(help.out, "Usage"));

    CliResult nosub = run({});
    CHECK(nosub.code == 1);
}
