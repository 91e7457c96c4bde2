#include <doctest.h>

#include <sstream>
#include <string>

#include "ffcons/scenario.hpp"

using namespace ffcons;
using nlohmann::json;

namespace {

json base_doc() {
    return json::parse(R"({
        "p": 3, "n": 2, "N": 2,
        "A": [[1, 1], [0, 1]],
        "b": [0, 1],
        "K": [1, 2],
        "graphs": [[[0, 1, 1], [1, 2, 1]], [[0, 1, 1], [0, 2, 1]]],
        "switching": {"kind": "periodic", "pattern": [1, 2]},
        "steps": 12,
        "init": {"seed": 4, "states": [[1, 2], [0, 0], [2, 2]]}
    })");
}

std::string field_of(const json& doc) {
    try {
        (void)parse_config(doc);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("a well-formed document parses") {
    const auto c = parse_config(base_doc());
    CHECK(c.p == 3);
    CHECK(c.n == 2);
    CHECK(c.num_followers == 2);
    CHECK(c.graphs.size() == 2);
    CHECK(c.switching->kind == "periodic");
    CHECK(c.switching->sequence == std::vector<std::size_t>{0, 1});
    CHECK(c.steps == std::optional<std::size_t>(12));
    CHECK(c.warnings.empty());
    const auto net = build_network(c);
    CHECK(net.gain().has_value());
    CHECK(build_signal(c)->realize(3) == std::vector<std::size_t>{0, 1, 0});
    const auto init = build_init(c, net);
    REQUIRE(init.has_value());
    CHECK(init->leader == Matrix::column(PrimeModulus(3), {1, 2}));
}

TEST_CASE("errors name the offending field") {
    auto d = base_doc();
    d.erase("A");
    CHECK(field_of(d) == "A");
    d = base_doc();
    d["p"] = 4;
    CHECK(field_of(d) == "p");
    d = base_doc();
    d["A"][1] = json::array({0});
    CHECK(field_of(d) == "A[1]");
    d = base_doc();
    d["b"][0] = "x";
    CHECK(field_of(d) == "b[0]");
    d = base_doc();
    d["graphs"][0][1] = json::array({1, 1, 1});
    CHECK(field_of(d) == "graphs[0][1]");
    d = base_doc();
    d["graphs"][1][0] = json::array({0, 1, 3});
    CHECK(field_of(d) == "graphs[1][0]");
    d = base_doc();
    d["switching"]["pattern"] = json::array({1, 3});
    CHECK(field_of(d) == "switching.pattern[1]");
    d["switching"]["pattern"] = json::array({0});
    CHECK(field_of(d) == "switching.pattern[0]");
    d = base_doc();
    d["switching"]["kind"] = "bogus";
    CHECK(field_of(d) == "switching.kind");
    d = base_doc();
    d["init"]["states"] = json::array({json::array({1, 2})});
    CHECK(field_of(d) == "init.states");
    CHECK(field_of(json::array()) == "<root>");
}

TEST_CASE("out-of-range values are reduced with a warning") {
    auto d = base_doc();
    d["A"][0][0] = 7;
    d["K"][1] = -1;
    const auto c = parse_config(d);
    CHECK(c.a[0][0] == 1);
    CHECK((*c.k)[1] == 2);
    CHECK(c.warnings.size() == 2);
}

TEST_CASE("canonical JSON round trips") {
    const auto c = parse_config(base_doc());
    const auto again = parse_config(to_json(c));
    CHECK(to_json(again) == to_json(c));
    CHECK(config_hash(again) == config_hash(c));
    CHECK(config_hash(c).size() == 16);
    auto d = base_doc();
    d["K"][0] = 2;
    CHECK(config_hash(parse_config(d)) != config_hash(c));
}

TEST_CASE("trajectory export") {
    const auto c = parse_config(base_doc());
    const auto net = build_network(c);
    const auto traj = simulate(net, *build_init(c, net), *build_signal(c), 3);
    const auto csv = trajectory_csv(traj);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "step,agent,error");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 4 * 2);
    std::istringstream is2(trajectory_csv(traj, true));
    std::getline(is2, line);
    CHECK(line == "step,agent,error,x1,x2");
    const auto j = trajectory_json(traj);
    CHECK(j["errors"].size() == 4);
    CHECK(j["signal"] == json::array({1, 2, 1}));
}

TEST_CASE("report serialization") {
    const auto c = parse_config(base_doc());
    const auto r = analyze(build_network(c), build_signal(c));
    const auto j = to_json(r);
    CHECK(j["verdict"] == to_string(r.verdict));
    CHECK(j.contains("reasons"));
    // 1-based node ids, targets before their sources (edge 1 -> 2)
    CHECK(j["checks"]["graphs"][0]["topo_order"] == json::array({2, 1}));
    CHECK(j["checks"]["char_poly"]["text"] == "λ^2+λ+1");
}
