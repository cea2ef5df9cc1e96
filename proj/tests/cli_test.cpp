#include "ilat/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "ilat/bernoulli.hpp"
#include "ilat/iwasawa.hpp"
#include "ilat/kubota_leopoldt.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = ilat::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json out_json(const RunResult& r) {
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

/// Fresh per-process scratch directory for rep files and caches.
const std::filesystem::path& scratch() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("ilat_cli_test_" + std::to_string(::getpid()));
        std::filesystem::remove_all(d);
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    const auto path = scratch() / name;
    std::ofstream f(path);
    f << content;
    f.close();
    return path.string();
}

long count_occurrences(const std::string& text, const std::string& needle) {
    long n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

const char* kOrd2Rep = R"({"p": 5, "N": 5, "g0": 0, "generators": [
    {"label": "s", "matrix": [[2, 0], [0, 3]]},
    {"label": "t", "matrix": [[1, 1], ["25", 4]]}]})";

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("usage errors exit with 2 and name the offending flag") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"no-such-command"}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);

    const RunResult missing = run_cli({"irregular-pairs"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("--pmax") != std::string::npos);

    CHECK(run_cli({"irregular-pairs", "--pmax", "0"}).code == 2);
    CHECK(run_cli({"irregular-pairs", "--pmax", "-7"}).code == 2);
    CHECK(run_cli({"irregular-pairs", "--pmax", "50", "--bogus"}).code == 2);

    const RunResult bad_p = run_cli({"kl", "--p", "4", "--chi-omega-exp", "1"});
    CHECK(bad_p.code == 2);
    CHECK(bad_p.err.find("--p") != std::string::npos);

    CHECK(run_cli({"dvr"}).code == 2);   // needs the analyze subcommand
    CHECK(run_cli({"delta"}).code == 2); // needs the check subcommand
}

TEST_CASE("irregular-pairs reports the scan and agrees with the library") {
    const json rep =
        out_json(run_cli({"irregular-pairs", "--pmax", "691", "--json"}));
    CHECK(rep["schema_version"] == 1);
    CHECK(rep["command"] == "irregular-pairs");

    const auto pairs = ilat::scan_irregular_pairs(691);
    REQUIRE(rep["pairs"].size() == pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        CHECK(rep["pairs"][i]["p"] == pairs[i].first);
        CHECK(rep["pairs"][i]["k"] == pairs[i].second);
    }
    bool found = false;
    for (const json& row : rep["pairs"])
        found = found || (row["p"] == 691 && row["k"] == 12);
    CHECK(found);

    const RunResult human = run_cli({"irregular-pairs", "--pmax", "691"});
    CHECK(human.code == 0);
    CHECK(human.out.find("(691, 12)") != std::string::npos);
}

TEST_CASE("kl emits the series, invariants, and verification rows") {
    const json rep = out_json(run_cli({"kl", "--p", "5", "--chi-omega-exp",
                                       "1", "--prec-p", "2", "--prec-t", "3",
                                       "--verify", "--json"}));
    CHECK(rep["schema_version"] == 1);
    CHECK(rep["guaranteed_N"] == 2);
    CHECK(rep["construction"] == "interpolation-solve");

    // c0 is the weight-2 value L_p(-1, omega^2) = 1/3, which is 2 mod 5.
    const long c0 = std::stol(rep["series"]["coefficients"][0].get<std::string>());
    CHECK(c0 % 5 == 2);

    const ilat::KLSeries direct = ilat::kl_series(5, 1, 2, 3);
    REQUIRE(rep["series"]["coefficients"].size() ==
            direct.series.coefficients().size());
    for (std::size_t i = 0; i < direct.series.coefficients().size(); ++i)
        CHECK(rep["series"]["coefficients"][i].get<std::string>() ==
              direct.series.coefficients()[i].get_str());

    CHECK(rep["verification"]["all_ok"] == true);
    CHECK(rep["verification"]["rows"].size() == 7); // weights 2..8
    for (const json& row : rep["verification"]["rows"])
        CHECK(row["ok"] == true);

    const RunResult human = run_cli({"kl", "--p", "5", "--chi-omega-exp", "1",
                                     "--prec-p", "2", "--prec-t", "3",
                                     "--verify"});
    CHECK(human.code == 0);
    CHECK(human.out.find("7/7 interpolation rows ok") != std::string::npos);
}

TEST_CASE("kl maps domain failures to exit 1 with a structured error") {
    const RunResult even = run_cli({"kl", "--p", "7", "--chi-omega-exp", "2"});
    CHECK(even.code == 1);
    const json err = json::parse(even.err);
    CHECK(err["schema_version"] == 1);
    CHECK(err["error"]["code"] == "EvenCharacter");
    CHECK(err["error"]["message"].get<std::string>().size() > 0);
}

TEST_CASE("kl cache runs are byte-identical and corruption-proof") {
    const auto cache = (scratch() / "klcache").string();
    const std::vector<std::string> args = {
        "kl",       "--p",    "5", "--chi-omega-exp", "1",
        "--prec-p", "3",      "--prec-t", "4",        "--cache-dir",
        cache,      "--json"};
    const RunResult cold = run_cli(args);
    REQUIRE(cold.code == 0);
    const auto entry =
        std::filesystem::path(cache) / "kl-p5-j1-N3-M4.v1.txt";
    CHECK(std::filesystem::exists(entry));

    const RunResult warm = run_cli(args);
    REQUIRE(warm.code == 0);
    CHECK(cold.out == warm.out);

    // A corrupt entry is ignored and recomputed, never trusted.
    std::ofstream(entry) << "not a cache entry";
    const RunResult recomputed = run_cli(args);
    REQUIRE(recomputed.code == 0);
    CHECK(recomputed.out == cold.out);
    const RunResult rewarmed = run_cli(args);
    CHECK(rewarmed.out == cold.out);
}

TEST_CASE("ILAT_CACHE_DIR overrides the --cache-dir flag") {
    const auto env_dir = (scratch() / "envcache").string();
    const auto flag_dir = (scratch() / "flagcache").string();
    REQUIRE(::setenv("ILAT_CACHE_DIR", env_dir.c_str(), 1) == 0);
    const RunResult r = run_cli({"kl", "--p", "7", "--chi-omega-exp", "3",
                                 "--prec-p", "2", "--prec-t", "2",
                                 "--cache-dir", flag_dir, "--json"});
    ::unsetenv("ILAT_CACHE_DIR");
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists(std::filesystem::path(env_dir) /
                                  "kl-p7-j3-N2-M2.v1.txt"));
    CHECK(!std::filesystem::exists(std::filesystem::path(flag_dir) /
                                   "kl-p7-j3-N2-M2.v1.txt"));
}

TEST_CASE("weierstrass reports the preparation and specializations") {
    const json rep = out_json(run_cli({"weierstrass", "--p", "5", "--coeffs",
                                       "50,30,2,5,1", "--prec-p", "4",
                                       "--prec-t", "6", "--specialize", "3",
                                       "--json"}));
    CHECK(rep["mu"] == 0);
    CHECK(rep["lambda"] == 2);
    CHECK(rep["guaranteed_N"] == 4);
    REQUIRE(rep["distinguished"].size() == 3);
    CHECK(rep["distinguished"][2] == "1"); // monic

    const ilat::IwasawaSeries f(5, 4, 6, {50, 30, 2, 5, 1});
    REQUIRE(rep["specializations"].size() == 1);
    CHECK(rep["specializations"][0]["weight"] == 3);
    CHECK(rep["specializations"][0]["value"].get<std::string>() ==
          f.specialize(3).residue().get_str());

    CHECK(run_cli({"weierstrass", "--p", "5", "--coeffs", "1,x"}).code == 2);
    CHECK(run_cli({"weierstrass", "--p", "5", "--coeffs", "1,2",
                   "--specialize", "3", "--u", "7"})
              .code == 2);
    // The zero series has no preparation: a domain error, not a crash.
    const RunResult zero =
        run_cli({"weierstrass", "--p", "5", "--coeffs", "0,0"});
    CHECK(zero.code == 1);
    CHECK(json::parse(zero.err)["error"].contains("code"));
}

TEST_CASE("lattice-count handles synthetic factor lists and kl input") {
    const json cube = out_json(run_cli({"lattice-count", "--mu", "0",
                                        "--factors", "T+686:1,T+5:1,T+10:1",
                                        "--json"}));
    CHECK(cube["count_free"] == 8);
    CHECK(cube["exponents"] == json::array({1, 1, 1}));
    CHECK(cube["source"]["kind"] == "synthetic");
    CHECK(cube["source"]["factor_provenance"] == "asserted");
    CHECK(cube["asserted_hypotheses"]["gorenstein"] == true);
    CHECK(cube["asserted_hypotheses"]["residually_reducible"] == true);

    const json boxed = out_json(run_cli(
        {"lattice-count", "--mu", "2", "--factors", "T+25:3", "--p", "5",
         "--json"}));
    CHECK(boxed["count_free"] == (2 + 1) * (3 + 1));

    const json pure_mu =
        out_json(run_cli({"lattice-count", "--mu", "4", "--json"}));
    CHECK(pure_mu["count_free"] == 5);
    CHECK(pure_mu["exponents"].empty());

    const auto cache = (scratch() / "klcache691").string();
    const json from_kl = out_json(run_cli({"lattice-count", "--from-kl",
                                           "691,11,3,3", "--cache-dir", cache,
                                           "--json"}));
    CHECK(from_kl["count_free"] == 2);
    CHECK(from_kl["source"]["kind"] == "kl");
    CHECK(from_kl["source"]["factor_provenance"] == "computed");
    CHECK(from_kl["factorization"]["certified"] == true);

    CHECK(run_cli({"lattice-count"}).code == 2);           // no source
    CHECK(run_cli({"lattice-count", "--mu", "1", "--from-kl", "5,1,2,2"})
              .code == 2);                                 // exclusive inputs
    CHECK(run_cli({"lattice-count", "--factors", "2*T+5:1"}).code == 2);
    CHECK(run_cli({"lattice-count", "--factors", "7:1"}).code == 2);
    CHECK(run_cli({"lattice-count", "--factors", "T+5:0"}).code == 2);
    CHECK(run_cli({"lattice-count", "--factors", "T+5#1"}).code == 2);
}

TEST_CASE("lattice-graph emits the cube as DOT and JSON") {
    const std::vector<std::string> base = {"lattice-graph", "--mu", "0",
                                           "--factors", "T+686:1,T+5:1,T+10:1"};

    auto with = [&base](std::initializer_list<std::string> extra) {
        std::vector<std::string> v = base;
        v.insert(v.end(), extra.begin(), extra.end());
        return v;
    };

    const RunResult dot = run_cli(with({"--dot", "-"}));
    REQUIRE(dot.code == 0);
    CHECK(count_occurrences(dot.out, "label=") == 8);
    CHECK(count_occurrences(dot.out, " -- ") == 12);
    CHECK(count_occurrences(dot.out, "doublecircle") == 2);
    CHECK(dot.out.find("T_min") != std::string::npos);
    CHECK(dot.out.find("T_max") != std::string::npos);

    const RunResult js = run_cli(with({"--json", "-"}));
    REQUIRE(js.code == 0);
    const json rep = json::parse(js.out);
    CHECK(rep["vertex_count"] == 8);
    CHECK(rep["edge_count"] == 12);
    CHECK(rep["vertices"].size() == 8);
    CHECK(rep["edges"].size() == 12);

    // both file outputs at once, neither on stdout
    const auto dot_path = (scratch() / "cube.dot").string();
    const auto json_path = (scratch() / "cube.json").string();
    const RunResult files =
        run_cli(with({"--dot", dot_path, "--json", json_path}));
    REQUIRE(files.code == 0);
    CHECK(files.out.empty());
    std::ifstream df(dot_path);
    const std::string dot_file((std::istreambuf_iterator<char>(df)),
                               std::istreambuf_iterator<char>());
    CHECK(dot_file == dot.out);
    std::ifstream jf(json_path);
    CHECK(json::parse(jf)["vertex_count"] == 8);

    CHECK(run_cli(with({"--dot", "-", "--json", "-"})).code == 2);

    // a single factor of multiplicity e gives a path graph
    const RunResult path = run_cli({"lattice-graph", "--mu", "0", "--factors",
                                    "T+5:4", "--p", "5", "--json", "-"});
    const json prep = json::parse(path.out);
    CHECK(prep["vertex_count"] == 5);
    CHECK(prep["edge_count"] == 4);

    const RunResult human = run_cli(base);
    CHECK(human.code == 0);
    CHECK(human.out.find("8 vertices, 12 edges") != std::string::npos);
}

TEST_CASE("dvr analyze reports order, classes, characters, and the chain") {
    const std::string path = write_file("ord2.json", kOrd2Rep);
    const json rep = out_json(
        run_cli({"dvr", "analyze", "--rep", path, "--chain", "--json"}));
    CHECK(rep["command"] == "dvr-analyze");
    CHECK(rep["p"] == 5);
    CHECK(rep["g0"] == "s");
    CHECK(rep["eigenvalues"]["lambda_1"] == "2");
    CHECK(rep["eigenvalues"]["lambda_2"] == "3");
    CHECK(rep["reducibility"]["ord"] == 2);
    CHECK(rep["reducibility"]["min_val_b"] == 0);
    CHECK(rep["reducibility"]["min_val_c"] == 2);
    CHECK(rep["reducibility"]["saturation"] == "stable");
    CHECK(rep["reducibility"]["ord_is_lower_bound"] == false);
    CHECK(rep["count_classes"] == 3);
    CHECK(rep["hypotheses"]["local_characters_distinct"] == true);
    CHECK(rep["hypotheses"]["residually_reducible"] == true);

    CHECK(rep["residual_characters"]["modulus_exponent"] == 2);
    CHECK(rep["residual_characters"]["theta_1"]["s"] == "2");
    CHECK(rep["residual_characters"]["theta_1"]["t"] == "1");
    CHECK(rep["residual_characters"]["theta_2"]["s"] == "3");
    CHECK(rep["residual_characters"]["theta_2"]["t"] == "4");

    REQUIRE(rep["chain"]["length"] == 3);
    CHECK(rep["chain"]["quotient_type"] == "theta_1");
    for (const json& s : rep["chain"]["stability"])
        CHECK(s == "verified");
}

TEST_CASE("dvr analyze reports reducible representations as infinite") {
    const std::string path = write_file("split.json",
                                        R"({"p": 5, "N": 4, "generators": [
        {"label": "a", "matrix": [[2, 0], [0, 3]]},
        {"label": "b", "matrix": [[7, 0], [0, 11]]}]})");
    const json rep = out_json(run_cli({"dvr", "analyze", "--rep", path,
                                       "--json"}));
    CHECK(rep["reducible_within_precision"] == true);
    CHECK(!rep.contains("count_classes"));
    CHECK(rep["note"].get<std::string>().find("infinite") !=
          std::string::npos);
    CHECK(rep["hypotheses"]["residually_reducible"] == true);

    const RunResult human = run_cli({"dvr", "analyze", "--rep", path});
    CHECK(human.code == 0);
    CHECK(human.out.find("infinite") != std::string::npos);
}

TEST_CASE("dvr analyze surfaces saturation and input problems") {
    const std::string path = write_file("ord2b.json", kOrd2Rep);
    const json bounded = out_json(
        run_cli({"dvr", "analyze", "--rep", path, "--word-bound", "1",
                 "--json"}));
    CHECK(bounded["reducibility"]["saturation"] == "bound-hit");
    CHECK(bounded["reducibility"]["ord_is_lower_bound"] == true);
    CHECK(!bounded.contains("count_classes"));
    CHECK(bounded["note"].get<std::string>().find("--word-bound") !=
          std::string::npos);

    CHECK(run_cli({"dvr", "analyze", "--rep",
                   (scratch() / "missing.json").string()})
              .code == 2);
    const std::string bad = write_file("bad.json", "{not json");
    CHECK(run_cli({"dvr", "analyze", "--rep", bad}).code == 2);
    const std::string shape =
        write_file("shape.json", R"({"p": 5, "N": 3, "generators": [
            {"label": "g", "matrix": [[1, 2, 3], [4, 5, 6]]}]})");
    CHECK(run_cli({"dvr", "analyze", "--rep", shape}).code == 2);

    const std::string repeated =
        write_file("repeated.json", R"({"p": 5, "N": 3, "generators": [
            {"label": "g", "matrix": [[1, 1], [0, 1]]}]})");
    const RunResult r = run_cli({"dvr", "analyze", "--rep", repeated});
    CHECK(r.code == 1);
    CHECK(json::parse(r.err)["error"]["code"] == "EigenvaluesNotDistinctModP");
}

TEST_CASE("delta check lists congruence rows with generator valuations") {
    const json rep =
        out_json(run_cli({"delta", "check", "--lmax", "20", "--json"}));
    CHECK(rep["modulus"] == 691);
    CHECK(rep["all_congruent"] == true);
    REQUIRE(rep["rows"].size() == 8); // primes up to 20
    CHECK(rep["rows"][0]["l"] == 2);
    CHECK(rep["rows"][0]["tau"] == "-24");
    CHECK(rep["rows"][0]["valuation"] == 1);
    CHECK(rep["j_generator_min_valuation"] == 1);
    CHECK(rep["p_generator_valuation"] == 1);

    const RunResult human = run_cli({"delta", "check", "--lmax", "20"});
    CHECK(human.code == 0);
    CHECK(human.out.find("l = 19") != std::string::npos);
    CHECK(human.out.find("val(tau(691) - 1) = 1") != std::string::npos);
}

TEST_CASE("showcase-691 walks every stage and honors --unit-base") {
    const auto cache = (scratch() / "klcache691").string();
    const json rep = out_json(run_cli({"showcase-691", "--prec-p", "3",
                                       "--prec-t", "3", "--cache-dir", cache,
                                       "--unit-base", "--json"}));
    const json& st = rep["stages"];
    CHECK(st["delta_congruences"]["all_congruent"] == true);
    CHECK(st["delta_congruences"]["j_generator_min_valuation"] == 1);
    CHECK(st["delta_congruences"]["p_generator_valuation"] == 1);
    CHECK(st["kl_series"]["mu"] == 0);
    CHECK(st["kl_series"]["lambda"] == 1);
    CHECK(st["weight_12"]["valuation"] == 1);
    CHECK(st["weight_12"]["matches_bernoulli_oracle"] == true);
    CHECK(st["lattice_count"]["count_free"] == 2);
    CHECK(st["variation"]["odd"]["size"] == 1);
    CHECK(st["variation"]["even"]["size"] == 2);
    REQUIRE(st["unit_base_conclusion"]["size"] == 2);
    CHECK(st["unit_base_conclusion"]["set"][0] == "1");
    CHECK(st["unit_base_conclusion"]["set"][1].get<std::string>().substr(
              0, 3) == "(T ");
    CHECK(rep["asserted_hypotheses"]["unit_base_holds"] == true);

    const json plain = out_json(run_cli({"showcase-691", "--prec-p", "3",
                                         "--prec-t", "3", "--cache-dir",
                                         cache, "--json"}));
    CHECK(!plain["stages"].contains("unit_base_conclusion"));
    CHECK(plain["asserted_hypotheses"]["unit_base_holds"] == false);

    const RunResult human = run_cli({"showcase-691", "--prec-p", "3",
                                     "--prec-t", "3", "--cache-dir", cache,
                                     "--unit-base"});
    CHECK(human.code == 0);
    CHECK(human.out.find("free stable lattice classes: 2") !=
          std::string::npos);

    // Stage failures carry the stage name.
    const RunResult fail = run_cli({"showcase-691", "--prec-p", "3",
                                    "--prec-t", "3", "--lmax", "20", "--nmax",
                                    "100", "--cache-dir", cache});
    CHECK(fail.code == 1);
    const json err = json::parse(fail.err);
    CHECK(err["error"]["code"] == "StageFailure");
    CHECK(err["error"]["stage"] == "delta-congruences");
}

TEST_CASE("every JSON report carries the schema version") {
    const std::string path = write_file("ord2c.json", kOrd2Rep);
    const auto cache = (scratch() / "klcache691").string();
    const std::vector<std::vector<std::string>> invocations = {
        {"irregular-pairs", "--pmax", "40", "--json"},
        {"kl", "--p", "5", "--chi-omega-exp", "1", "--prec-p", "2", "--prec-t",
         "2", "--json"},
        {"weierstrass", "--p", "5", "--coeffs", "5,1", "--json"},
        {"lattice-count", "--mu", "1", "--json"},
        {"dvr", "analyze", "--rep", path, "--json"},
        {"delta", "check", "--lmax", "10", "--json"},
        {"showcase-691", "--prec-p", "3", "--prec-t", "3", "--cache-dir",
         cache, "--unit-base", "--json"},
    };
    for (const auto& args : invocations) {
        const json rep = out_json(run_cli(args));
        CHECK(rep["schema_version"] == 1);
        CHECK(rep.contains("command"));
    }
    const RunResult graph = run_cli({"lattice-graph", "--mu", "1", "--json",
                                     "-"});
    CHECK(json::parse(graph.out)["schema_version"] == 1);
}

TEST_SUITE_END();
