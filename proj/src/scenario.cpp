#include "ffcons/scenario.hpp"

#include <fstream>
#include <sstream>

namespace ffcons {

using nlohmann::json;

namespace {

const json& require(const json& doc, const std::string& key) {
    if (!doc.is_object() || !doc.contains(key)) throw ConfigError(key, "missing required field");
    return doc.at(key);
}

std::int64_t as_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
    return v.get<std::int64_t>();
}

std::uint64_t as_uint(const json& v, const std::string& field) {
    const auto x = as_int(v, field);
    if (x < 0) throw ConfigError(field, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(x);
}

const json& as_array(const json& v, const std::string& field, std::optional<std::size_t> len = std::nullopt) {
    if (!v.is_array()) throw ConfigError(field, "expected an array");
    if (len && v.size() != *len) {
        throw ConfigError(field, "expected " + std::to_string(*len) + " entries, got " + std::to_string(v.size()));
    }
    return v;
}

// Reads an integer and reduces it mod p, recording a warning when reduction changed it.
std::int64_t residue(const json& v, const std::string& field, const PrimeModulus& m, std::vector<std::string>& warnings) {
    const auto raw = as_int(v, field);
    const auto r = static_cast<std::int64_t>(m.reduce(raw));
    if (r != raw) warnings.push_back(field + ": " + std::to_string(raw) + " reduced to " + std::to_string(r) + " mod p");
    return r;
}

std::vector<std::int64_t> residue_vector(const json& v, const std::string& field, std::size_t len, const PrimeModulus& m,
                                         std::vector<std::string>& warnings) {
    as_array(v, field, len);
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < len; ++i) out.push_back(residue(v[i], field + "[" + std::to_string(i) + "]", m, warnings));
    return out;
}

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

}  // namespace

ScenarioConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("<root>", "expected a JSON object");
    ScenarioConfig c;
    c.p = as_uint(require(doc, "p"), "p");
    std::optional<PrimeModulus> mod;
    try {
        mod.emplace(c.p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("p", e.what());
    }
    c.n = as_uint(require(doc, "n"), "n");
    if (c.n == 0) throw ConfigError("n", "state dimension must be positive");
    c.num_followers = as_uint(require(doc, "N"), "N");
    if (c.num_followers == 0) throw ConfigError("N", "need at least one follower");

    const auto& a = as_array(require(doc, "A"), "A", c.n);
    for (std::size_t i = 0; i < c.n; ++i) c.a.push_back(residue_vector(a[i], idx("A", i), c.n, *mod, c.warnings));
    c.b = residue_vector(require(doc, "b"), "b", c.n, *mod, c.warnings);
    if (doc.contains("K") && !doc.at("K").is_null()) c.k = residue_vector(doc.at("K"), "K", c.n, *mod, c.warnings);

    const auto& graphs = as_array(require(doc, "graphs"), "graphs");
    if (graphs.empty()) throw ConfigError("graphs", "need at least one graph");
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const std::string gname = idx("graphs", gi);
        std::vector<std::array<std::int64_t, 3>> edges;
        WeightedDigraph check(*mod, c.num_followers);
        for (std::size_t ei = 0; ei < as_array(graphs[gi], gname).size(); ++ei) {
            const std::string ename = idx(gname, ei);
            const auto& e = as_array(graphs[gi][ei], ename, 3);
            const auto src = as_uint(e[0], idx(ename, 0));
            const auto tgt = as_uint(e[1], idx(ename, 1));
            const auto w = residue(e[2], idx(ename, 2), *mod, c.warnings);
            try {
                check.add_edge(src, tgt, w);
            } catch (const std::invalid_argument& ex) {
                throw ConfigError(ename, ex.what());
            }
            edges.push_back({static_cast<std::int64_t>(src), static_cast<std::int64_t>(tgt), w});
        }
        c.graphs.push_back(std::move(edges));
    }

    if (doc.contains("switching") && !doc.at("switching").is_null()) {
        const auto& sw = doc.at("switching");
        SwitchingSpec spec;
        if (!sw.is_object()) throw ConfigError("switching", "expected an object");
        const auto& kind = require(sw, "kind");
        if (!kind.is_string()) throw ConfigError("switching.kind", "expected a string");
        spec.kind = kind.get<std::string>();
        if (spec.kind == "explicit" || spec.kind == "periodic") {
            const std::string key = spec.kind == "explicit" ? "sequence" : "pattern";
            if (!sw.contains(key)) throw ConfigError("switching." + key, "missing required field");
            const auto& seq = as_array(sw.at(key), "switching." + key);
            if (seq.empty()) throw ConfigError("switching." + key, "must not be empty");
            for (std::size_t i = 0; i < seq.size(); ++i) {
                const auto v = as_uint(seq[i], idx("switching." + key, i));
                if (v < 1 || v > c.graphs.size()) {
                    throw ConfigError(idx("switching." + key, i),
                                      "graph index must be in 1.." + std::to_string(c.graphs.size()));
                }
                spec.sequence.push_back(v - 1);
            }
        } else if (spec.kind == "random") {
            if (sw.contains("seed")) spec.seed = as_uint(sw.at("seed"), "switching.seed");
        } else {
            throw ConfigError("switching.kind", "expected explicit, periodic or random");
        }
        c.switching = std::move(spec);
    }

    if (doc.contains("steps") && !doc.at("steps").is_null()) {
        c.steps = as_uint(doc.at("steps"), "steps");
        if (*c.steps == 0) throw ConfigError("steps", "horizon must be at least 1");
    }

    if (doc.contains("init") && !doc.at("init").is_null()) {
        const auto& in = doc.at("init");
        if (!in.is_object()) throw ConfigError("init", "expected an object");
        InitSpec spec;
        if (in.contains("seed")) spec.seed = as_uint(in.at("seed"), "init.seed");
        if (in.contains("states")) {
            const auto& st = as_array(in.at("states"), "init.states", c.num_followers + 1);
            std::vector<std::vector<std::int64_t>> states;
            for (std::size_t i = 0; i < st.size(); ++i) {
                states.push_back(residue_vector(st[i], idx("init.states", i), c.n, *mod, c.warnings));
            }
            spec.states = std::move(states);
        }
        c.init = std::move(spec);
    }
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

json to_json(const ScenarioConfig& c) {
    json doc = {{"p", c.p}, {"n", c.n}, {"N", c.num_followers}, {"A", c.a}, {"b", c.b}};
    if (c.k) doc["K"] = *c.k;
    json graphs = json::array();
    for (const auto& g : c.graphs) {
        json edges = json::array();
        for (const auto& e : g) edges.push_back({e[0], e[1], e[2]});
        graphs.push_back(std::move(edges));
    }
    doc["graphs"] = std::move(graphs);
    if (c.switching) {
        json sw = {{"kind", c.switching->kind}};
        std::vector<std::size_t> one_based;
        for (auto v : c.switching->sequence) one_based.push_back(v + 1);
        if (c.switching->kind == "explicit") sw["sequence"] = one_based;
        if (c.switching->kind == "periodic") sw["pattern"] = one_based;
        if (c.switching->seed) sw["seed"] = *c.switching->seed;
        doc["switching"] = std::move(sw);
    }
    if (c.steps) doc["steps"] = *c.steps;
    if (c.init) {
        json in = json::object();
        if (c.init->seed) in["seed"] = *c.init->seed;
        if (c.init->states) in["states"] = *c.init->states;
        doc["init"] = std::move(in);
    }
    return doc;
}

LinearSystem build_system(const ScenarioConfig& c) {
    const PrimeModulus m(c.p);
    return {Matrix(m, c.a), Matrix::column(m, c.b)};
}

Network build_network(const ScenarioConfig& c) {
    const PrimeModulus m(c.p);
    std::vector<WeightedDigraph> graphs;
    for (const auto& edges : c.graphs) {
        WeightedDigraph g(m, c.num_followers);
        for (const auto& e : edges) g.add_edge(static_cast<NodeId>(e[0]), static_cast<NodeId>(e[1]), e[2]);
        graphs.push_back(std::move(g));
    }
    std::optional<Matrix> k;
    if (c.k) k = Matrix::row(m, *c.k);
    return {build_system(c), std::move(graphs), std::move(k)};
}

std::optional<SwitchingSignal> build_signal(const ScenarioConfig& c) {
    if (!c.switching) return std::nullopt;
    const auto& s = *c.switching;
    if (s.kind == "explicit") return SwitchingSignal::explicit_sequence(s.sequence);
    if (s.kind == "periodic") return SwitchingSignal::periodic(s.sequence);
    return SwitchingSignal::random(c.graphs.size(), s.seed.value_or(0));
}

std::optional<NetworkState> build_init(const ScenarioConfig& c, const Network& net) {
    if (!c.init || !c.init->states) return std::nullopt;
    const auto& st = *c.init->states;
    NetworkState s{0, Matrix::column(net.modulus(), st[0]), {}};
    for (std::size_t i = 1; i < st.size(); ++i) s.followers.push_back(Matrix::column(net.modulus(), st[i]));
    return s;
}

std::string config_hash(const ScenarioConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : to_json(c).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

json to_json(const Matrix& m) { return m.to_rows(); }

json to_json(const Poly& f) {
    return {{"coefficients", f.coeffs()}, {"text", f.to_string()}};
}

namespace {

std::vector<std::size_t> one_based(const std::vector<std::size_t>& v) {
    std::vector<std::size_t> out;
    for (auto x : v) out.push_back(x + 1);
    return out;
}

json optional_degrees(const std::vector<std::optional<std::size_t>>& v) {
    json out = json::array();
    for (const auto& d : v) out.push_back(d ? json(*d) : json(nullptr));
    return out;
}

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const AnalysisReport& r) {
    json graphs = json::array();
    for (const auto& g : r.graphs) {
        graphs.push_back({
            {"follower_dag", g.follower_dag},
            {"topo_order", one_based(g.topo_order)},
            {"cycle", g.cycle},
            {"degrees", g.degrees},
            {"leader_reachable", g.leader_reachable},
            {"agent_block_degree", optional_degrees(g.agent_block_degree)},
            {"static_verdict", g.static_verdict ? json(to_string(*g.static_verdict)) : json(nullptr)},
        });
    }
    json degree = {
        {"common", opt(r.degree.d)},
        {"zero_degree_followers", r.degree.zero_degree},
        {"unequal", r.degree.unequal},
        {"per_graph", r.degree.degrees},
    };
    json checks = {
        {"a_nilpotent", r.a_nilpotent},
        {"char_poly", to_json(r.char_poly)},
        {"stabilizable", r.stabilizable},
        {"controllable_dim", r.controllable_dim},
        {"a_uc", to_json(r.a_uc)},
        {"degree", std::move(degree)},
        {"graphs", std::move(graphs)},
    };
    if (r.switching) {
        checks["union_dag"] = opt(r.union_dag);
        checks["union_order"] = one_based(r.union_order);
        checks["union_cycle"] = r.union_cycle;
    }
    return {
        {"verdict", to_string(r.verdict)},
        {"mode", r.switching ? "switching" : "static"},
        {"reasons", r.reasons},
        {"checks", std::move(checks)},
        {"gain", r.gain ? json(r.gain->to_rows().front()) : json(nullptr)},
        {"gain_source", r.gain_source},
        {"gain_block_degree", opt(r.gain_block_degree)},
        {"provided_gain_ok", opt(r.provided_gain_ok)},
        {"bounds", {{"static", opt(r.static_bound)}, {"switching", opt(r.switching_bound)}}},
    };
}

json to_json(const CycleStructure& cs) {
    json cycles = json::array();
    for (auto [len, count] : cs.cycles) cycles.push_back({{"length", len}, {"count", count}});
    json out = {
        {"method", cs.method == CycleMethod::Enumeration ? "enumeration" : "polynomial"},
        {"tree_depth", cs.tree_depth},
        {"cycles", std::move(cycles)},
        {"cycle_lengths", cs.cycle_lengths()},
        {"periodic_states", cs.periodic_states},
    };
    if (cs.method == CycleMethod::Enumeration) {
        out["transient_states"] = cs.transient_states;
    } else {
        out["caveat"] = "exact only when the minimal and characteristic polynomials coincide";
    }
    return out;
}

json to_json(const Factorization& f) {
    json factors = json::array();
    for (const auto& fac : f.factors) {
        json entry = {{"factor", to_json(fac.poly)}, {"multiplicity", fac.multiplicity}};
        if (fac.poly.coeff(0) != 0) entry["order_of_x"] = order_of_x_mod(fac.poly);
        factors.push_back(std::move(entry));
    }
    return {{"unit", f.unit}, {"factors", std::move(factors)}};
}

std::string trajectory_csv(const Trajectory& t, bool with_states) {
    std::ostringstream os;
    os << "step,agent,error";
    const std::size_t n = t.states.empty() ? 0 : t.states.front().leader.rows();
    if (with_states) {
        for (std::size_t j = 1; j <= n; ++j) os << ",x" << j;
    }
    os << '\n';
    for (std::size_t k = 0; k < t.errors.size(); ++k) {
        for (std::size_t i = 0; i < t.errors[k].size(); ++i) {
            os << k << ',' << i + 1 << ',' << t.errors[k][i];
            if (with_states) {
                for (std::size_t j = 0; j < n; ++j) os << ',' << t.states[k].followers[i](j, 0);
            }
            os << '\n';
        }
    }
    return os.str();
}

json trajectory_json(const Trajectory& t, bool with_states) {
    json out = {
        {"signal", one_based(t.signal)},
        {"errors", t.errors},
        {"consensus_step", opt(t.consensus_step)},
    };
    if (with_states) {
        json states = json::array();
        for (const auto& s : t.states) {
            json agents = json::array();
            agents.push_back(s.leader.transpose().to_rows().front());
            for (const auto& f : s.followers) agents.push_back(f.transpose().to_rows().front());
            states.push_back(std::move(agents));
        }
        out["states"] = std::move(states);
    }
    return out;
}

}  // namespace ffcons
