#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "yuancert/cli.hpp"
#include "yuancert/errors.hpp"

using namespace yuancert;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(YUANCERT_FIXTURES_DIR) + "/" + name + ".json"; }

struct RunResult {
    int code;
    std::string out, err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("yuancert_test_" + name);
    std::ofstream(path) << text;
    return path.string();
}

}  // namespace

TEST_CASE("exit codes on fixtures") {
    CHECK(run({"certify", fixture("example1")}).code == cli::kExitOk);
    CHECK(run({"certify", fixture("example2")}).code == cli::kExitOk);
    for (const char* pair : {"example2_pair12", "example2_pair13", "example2_pair23"})
        CHECK(run({"yuan2", fixture(pair)}).code == cli::kExitRefuted);
    CHECK(run({"certify", fixture("counterexample")}).code == cli::kExitInput);
    CHECK(run({"rank", fixture("counterexample")}).code == cli::kExitOk);
    CHECK(run({"quad", fixture("example1_quad")}).code == cli::kExitOk);
    CHECK(run({"quad", fixture("rank3_quad")}).code == cli::kExitHypothesis);
    CHECK(run({"vertices", fixture("example1_kkt")}).code == cli::kExitOk);
    CHECK(run({"soc", fixture("example1_kkt")}).code == cli::kExitOk);
    CHECK(run({"oracle", fixture("example2")}).code == cli::kExitOk);
    CHECK(run({"certify", fixture("example1"), "--cone", fixture("ray_cone")}).code == cli::kExitOk);
    CHECK(run({"yuan2", fixture("example2")}).code == cli::kExitInput);
    CHECK(run({"certify", fixture("does_not_exist")}).code == cli::kExitInput);
    CHECK(run({"bogus"}).code == cli::kExitInput);
}

TEST_CASE("json reports") {
    const RunResult r = run({"certify", fixture("example1"), "--json"});
    const json rep = json::parse(r.out);
    CHECK(rep["verdict"] == "certified");
    CHECK(rep["lambda_min"].get<double>() == doctest::Approx(0.04).epsilon(1e-6));
    CHECK(rep.contains("cone"));
    CHECK(rep["input_digest"].get<std::string>().size() == 64);

    const json rk = json::parse(run({"rank", fixture("counterexample"), "--json"}).out);
    CHECK(rk["rank"] == 3);

    const json rf = json::parse(run({"yuan2", fixture("example2_pair12"), "--json"}).out);
    CHECK(rf["verdict"] == "refuted");
}

TEST_CASE("human output") {
    const RunResult r = run({"certify", fixture("example1")});
    CHECK(r.out.find("verdict: certified") != std::string::npos);
}

TEST_CASE("parse errors carry positions") {
    try {
        cli::parse_instance("{\n  \"schema_version\": \"1\",\n  \"kind\": ,\n}", "bad.json");
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("bad.json:3:") != std::string::npos);
    }
    try {
        const auto inst = cli::parse_instance(
            R"({"schema_version": "1", "kind": "family", "payload": {"matrices": [[[1, 0], [0, 1]], [[1, "x"], [0, 1]]]}})",
            "bad.json");
        cli::family_from_json(inst.payload);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("/matrices/1") != std::string::npos);
    }
    CHECK_THROWS_AS(cli::parse_instance(R"({"schema_version": "2", "kind": "family", "payload": {}})"), InputError);
    CHECK_THROWS_AS(cli::parse_instance(R"({"schema_version": "1", "kind": "nope", "payload": {}})"), InputError);

    const std::string bad = write_temp("syntax.json", "{ \"schema_version\": ");
    const RunResult r = run({"certify", bad});
    CHECK(r.code == cli::kExitInput);
    CHECK(r.err.find(bad) != std::string::npos);
}

TEST_CASE("round trip") {
    for (const char* name : {"example1", "example2", "counterexample", "example1_quad", "example1_kkt", "ray_cone"}) {
        const cli::Instance a = cli::read_instance(fixture(name));
        const std::string text = cli::serialize_instance(a);
        const cli::Instance b = cli::parse_instance(text);
        CHECK(a.kind == b.kind);
        CHECK(a.payload == b.payload);
        CHECK(cli::serialize_instance(b) == text);
    }
    const cli::FamilyPayload fam = cli::family_from_json(cli::read_instance(fixture("example2")).payload);
    CHECK(cli::family_from_json(cli::to_json(fam)).matrices.size() == 3);
}

TEST_CASE("digest") {
    CHECK(cli::digest("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("verify-report") {
    for (const auto& [cmd, name] : std::vector<std::pair<std::string, std::string>>{
             {"certify", "example1"}, {"certify", "example2"}, {"yuan2", "example2_pair12"}, {"quad", "example1_quad"}}) {
        const RunResult r = run({cmd, fixture(name), "--json"});
        const std::string report = write_temp(cmd + "_" + name + ".json", r.out);
        CHECK(run({"verify-report", report, fixture(name)}).code == cli::kExitOk);
    }

    json rep = json::parse(run({"certify", fixture("example1"), "--json"}).out);
    rep["weights"] = json::array({1.0, 0.0, 0.0});
    const std::string tampered = write_temp("tampered.json", rep.dump());
    CHECK(run({"verify-report", tampered, fixture("example1")}).code == cli::kExitNumerical);

    const std::string good = write_temp("good.json", run({"certify", fixture("example1"), "--json"}).out);
    CHECK(run({"verify-report", good, fixture("example2")}).code == cli::kExitNumerical);
}
