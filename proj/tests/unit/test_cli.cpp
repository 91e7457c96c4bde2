#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"

using namespace ffcons::cli;
using nlohmann::json;

namespace {

struct Result {
    int status;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ffcons");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int status = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string scenario(const std::string& name) { return std::string(FFCONS_SCENARIO_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content = "") {
    const auto path = std::filesystem::temp_directory_path() / ("ffcons_cli_" + name);
    if (!content.empty()) std::ofstream(path) << content;
    return path.string();
}

}  // namespace

TEST_CASE("analyze exit statuses") {
    CHECK(run_cli({"analyze", scenario("switching_f3.json")}).status == kExitOk);
    CHECK(run_cli({"analyze", scenario("cyclic.json")}).status == kExitInconclusive);
    const auto unstab = temp_file("unstab.json", R"({"p":3,"n":2,"N":1,"A":[[1,0],[0,1]],"b":[1,0],"graphs":[[[0,1,1]]]})");
    const auto r = run_cli({"analyze", unstab});
    CHECK(r.status == kExitImpossible);
    CHECK(json::parse(r.out)["verdict"] == "consensus impossible");
    const auto bad = temp_file("bad.json", R"({"p":3,"n":2})");
    const auto b = run_cli({"analyze", bad});
    CHECK(b.status == kExitError);
    CHECK(b.err.find("N") != std::string::npos);
    CHECK(run_cli({"analyze", "/nonexistent/file.json"}).status == kExitError);
    CHECK(run_cli({"bogus"}).status == kExitError);
}

TEST_CASE("synthesize then simulate") {
    const auto out = temp_file("synth.json");
    const auto s = run_cli({"synthesize", scenario("static_unsynthesized.json"), "--out", out});
    REQUIRE(s.status == kExitOk);
    std::ifstream in(out);
    const auto doc = json::parse(in);
    CHECK(doc.contains("K"));
    CHECK(doc["certificate"]["common_degree"] == 2);

    const auto sim = run_cli({"simulate", out, "--trials", "3", "--format", "json", "--seed", "5"});
    REQUIRE(sim.status == kExitOk);
    const auto j = json::parse(sim.out);
    CHECK(j["trials"].size() == 3);
    CHECK(j["certified"] == true);
    for (const auto& t : j["trials"]) CHECK(t["within_bound"] == true);
    // same seed, same output
    CHECK(run_cli({"simulate", out, "--trials", "3", "--format", "json", "--seed", "5"}).out == sim.out);

    const auto csv = run_cli({"simulate", out, "--horizon", "4"});
    CHECK(csv.out.rfind("step,agent,error\n", 0) == 0);
}

TEST_CASE("simulate without a gain asks for synthesis") {
    const auto r = run_cli({"simulate", scenario("static_unsynthesized.json")});
    CHECK(r.status == kExitError);
    CHECK(r.err.find("synthesize") != std::string::npos);
}

TEST_CASE("synthesize refuses cyclic topologies") {
    const auto r = run_cli({"synthesize", scenario("cyclic.json")});
    CHECK(r.status == kExitInconclusive);
    CHECK(r.err.find("cycle") != std::string::npos);
}

TEST_CASE("cycles command") {
    const auto t = run_cli({"cycles", scenario("switching_f3.json")});
    CHECK(t.status == kExitOk);
    CHECK(t.out.find("cycles: 1 20 20 20 20") != std::string::npos);
    const auto j = run_cli({"cycles", scenario("switching_f3.json"), "--poly", "--format", "json"});
    CHECK(j.status == kExitOk);
    const auto doc = json::parse(j.out);
    CHECK(doc["factors"]["factors"].size() == 1);
    const auto big = temp_file("big.json", R"({"p":7,"n":8,"N":1,"A":[[1,0,0,0,0,0,0,0],[0,1,0,0,0,0,0,0],[0,0,1,0,0,0,0,0],[0,0,0,1,0,0,0,0],[0,0,0,0,1,0,0,0],[0,0,0,0,0,1,0,0],[0,0,0,0,0,0,1,0],[0,0,0,0,0,0,0,1]],"b":[1,0,0,0,0,0,0,0],"graphs":[[[0,1,1]]]})");
    const auto e = run_cli({"cycles", big});
    CHECK(e.status == kExitError);
    CHECK(e.err.find("--poly") != std::string::npos);
    CHECK(run_cli({"cycles", big, "--poly"}).status == kExitOk);
}

TEST_CASE("a single changed degree") {
    const auto sw = run_cli({"analyze", scenario("degree_violation.json")});
    CHECK(sw.status == kExitInconclusive);
    // pin the signal to the second graph: static analysis of that topology alone
    const auto doc = [] {
        std::ifstream in(scenario("degree_violation.json"));
        return json::parse(in);
    }();
    auto pinned = doc;
    pinned["switching"] = {{"kind", "explicit"}, {"sequence", {2}}};
    const auto st = run_cli({"analyze", temp_file("pinned.json", pinned.dump())});
    CHECK(st.status == kExitImpossible);
    CHECK(json::parse(st.out)["mode"] == "static");
}

TEST_CASE("nilpotent system needs no feedback") {
    const auto r = run_cli({"analyze", scenario("nilpotent.json")});
    CHECK(r.status == kExitOk);
    const auto doc = json::parse(r.out);
    CHECK(doc["gain_source"] == "zero");
    CHECK(doc["gain"] == json::array({0, 0, 0}));
}
