#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include <qsl/verify.hpp>

using namespace qsl;

namespace {

struct cli_result {
    int exit_code = -1;
    std::string output;
};

cli_result invoke(const std::string& args) {
    std::string cmd = std::string(QSL_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    cli_result res;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string temp_file(const std::string& name, const std::string& content) {
    std::string path = "cli_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("run emits a parseable trace with the configured choice") {
    auto res = invoke("run --algo grover --n 2 --b 01 --mode relativized --seed 5");
    REQUIRE(res.exit_code == 0);
    json doc = json::parse(res.output);
    CHECK(doc["config"]["algo"] == "grover");
    CHECK(doc["config"]["b"] == "01");
    CHECK(doc["config"]["seed"] == 5);
    // the relativized trace ends in the sharp correlated state
    auto& last = doc["stages"].back();
    CHECK(last["stage"] == "B projection");
    CHECK(std::abs(last["entropy_b"].get<double>()) < 1e-9);
    CHECK(doc["measurements"].back()["selected"] == "01");
}

TEST_CASE("serialized states re-parse to the library state within 1e-15") {
    auto res = invoke("run --algo dj --n 2 --b 0011 --mode relativized --seed 1");
    REQUIRE(res.exit_code == 0);
    json doc = json::parse(res.output);

    algorithm alg(family_kind::dj, 2);
    ensemble_state expect = alg.initial_state();
    auto got = state_from_json(alg.layout(), doc["stages"][0]["state"]);
    CHECK(got.distance(expect) < 1e-15);

    for (const auto& st : alg.stages(identity_permutation(alg.layout().nb)))
        expect = apply_stage(expect, st);
    // last pipeline stage before the end projection
    auto& stages = doc["stages"];
    auto final_stage = state_from_json(alg.layout(), stages[stages.size() - 2]["state"]);
    CHECK(final_stage.distance(expect) < 1e-15);
}

TEST_CASE("identical config and seed give byte-identical documents") {
    auto a = invoke("run --algo simon --n 2 --b random --seed 77");
    auto b = invoke("run --algo simon --n 2 --b random --seed 77");
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    auto c = invoke("run --algo simon --n 2 --b random --seed 78");
    json dc = json::parse(c.output);
    CHECK(dc["config"]["b_requested"] == "random");
    CHECK(in_family(family_kind::simon, 2,
                    bit_string::parse(dc["config"]["b"].get<std::string>()).value()));
}

TEST_CASE("simon run discards 00 and recovers the period") {
    auto res = invoke("run --algo simon --n 2 --b 0011 --seed 3");
    REQUIRE(res.exit_code == 0);
    json doc = json::parse(res.output);
    CHECK(doc["simon"]["h"] == "01");
    for (const auto& s : doc["simon"]["kept"]) CHECK(s.get<std::string>() == "10");
}

TEST_CASE("verify all passes and a corrupt family file fails with a named check") {
    auto ok = invoke("verify all");
    CHECK(ok.exit_code == 0);
    json doc = json::parse(ok.output);
    CHECK(doc["passed"] == true);

    auto good = temp_file("family_good.json", R"({"algo":"dj","n":2,"subset":["0011","1100"]})");
    auto with_family = invoke("verify classical --family " + good);
    CHECK(with_family.exit_code == 0);

    auto bad = temp_file("family_bad.json", R"({"algo":"dj","n":2,"subset":["0001"]})");
    auto corrupt = invoke("verify classical --family " + bad);
    CHECK(corrupt.exit_code == 1);
    json cdoc = json::parse(corrupt.output);
    CHECK(cdoc["passed"] == false);
    bool named = false;
    for (const auto& c : cdoc["checks"])
        if (c["name"] == "family-file-valid" && c["passed"] == false) named = true;
    CHECK(named);
    std::remove(good.c_str());
    std::remove(bad.c_str());
}

TEST_CASE("report emits the speed-up table in json and csv") {
    auto j = invoke("report --algo grover --n 2");
    REQUIRE(j.exit_code == 0);
    json doc = json::parse(j.output);
    CHECK(doc["no_knowledge"] == 3);
    CHECK(doc["with_knowledge_max"] == 1);
    CHECK(doc["quantum_calls"] == 1);

    auto c = invoke("report --algo dj --n 2 --format csv");
    REQUIRE(c.exit_code == 0);
    CHECK(c.output.find("dj,2,3,1,1,1,true") != std::string::npos);
}

TEST_CASE("share lists the divisions for an explicit choice") {
    auto res = invoke("share --algo simon --n 2 --b 0011");
    REQUIRE(res.exit_code == 0);
    json doc = json::parse(res.output);
    CHECK(doc["pairs"].size() == 2);
}

TEST_CASE("histories reports a passing reconstruction") {
    auto res = invoke("histories --algo grover --n 2");
    REQUIRE(res.exit_code == 0);
    json doc = json::parse(res.output);
    CHECK(doc["reconstruction"]["ok"] == true);
    CHECK(doc["histories"].size() == 32);
}

TEST_CASE("usage and config errors exit with code 2") {
    CHECK(invoke("run --algo nosuch --n 2 --b 00").exit_code == 2);
    CHECK(invoke("run --algo grover --n 2 --b 11111").exit_code == 2);
    CHECK(invoke("run --algo dj --n 2 --b 0001").exit_code == 2);
    CHECK(invoke("verify nosuite").exit_code == 2);
    CHECK(invoke("share --algo grover --n 2").exit_code == 2); // b may not be sampled
    CHECK(invoke("nosuchcommand").exit_code == 2);
    CHECK(invoke("run --algo grover --n 2 --b 00 --format csv").exit_code == 2);
}

TEST_CASE("--out writes the same bytes as stdout") {
    auto direct = invoke("report --algo simon --n 2");
    std::string path = "cli_test_out.json";
    auto res = invoke("report --algo simon --n 2 --out " + path);
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.empty());
    std::ifstream in(path, std::ios::binary);
    std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(written == direct.output);
    std::remove(path.c_str());
}
