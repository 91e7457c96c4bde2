#include "ffcons/consensus.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace ffcons {

Network::Network(LinearSystem sys, std::vector<WeightedDigraph> graphs, std::optional<Matrix> gain)
    : sys_(std::move(sys)), graphs_(std::move(graphs)), gain_(std::move(gain)) {
    if (graphs_.empty()) throw std::invalid_argument("network needs at least one interaction graph");
    for (const auto& g : graphs_) {
        require_same_modulus(sys_.modulus(), g.modulus());
        if (g.num_followers() != graphs_.front().num_followers()) {
            throw std::invalid_argument("all graphs must have the same number of followers");
        }
    }
    if (gain_) {
        require_same_modulus(sys_.modulus(), gain_->modulus());
        if (gain_->rows() != 1 || gain_->cols() != sys_.dim()) {
            throw std::invalid_argument("gain K must be 1x" + std::to_string(sys_.dim()));
        }
    }
}

const WeightedDigraph& Network::graph(std::size_t index) const {
    if (index >= graphs_.size()) throw std::invalid_argument("graph index " + std::to_string(index) + " out of range");
    return graphs_[index];
}

Network Network::with_gain(Matrix k) const { return {sys_, graphs_, std::move(k)}; }

const Matrix& Network::require_gain() const {
    if (!gain_) throw std::invalid_argument("network has no gain K");
    return *gain_;
}

SwitchingSignal SwitchingSignal::explicit_sequence(std::vector<std::size_t> values) {
    if (values.empty()) throw std::invalid_argument("explicit switching sequence is empty");
    SwitchingSignal s;
    s.kind_ = Kind::Explicit;
    s.values_ = std::move(values);
    return s;
}

SwitchingSignal SwitchingSignal::periodic(std::vector<std::size_t> pattern) {
    if (pattern.empty()) throw std::invalid_argument("periodic switching pattern is empty");
    SwitchingSignal s;
    s.kind_ = Kind::Periodic;
    s.values_ = std::move(pattern);
    return s;
}

SwitchingSignal SwitchingSignal::random(std::size_t num_graphs, std::uint64_t seed) {
    if (num_graphs == 0) throw std::invalid_argument("random switching over zero graphs");
    SwitchingSignal s;
    s.kind_ = Kind::Random;
    s.num_graphs_ = num_graphs;
    s.seed_ = seed;
    return s;
}

bool SwitchingSignal::is_constant() const noexcept {
    if (kind_ == Kind::Random) return num_graphs_ == 1;
    return std::all_of(values_.begin(), values_.end(), [&](std::size_t v) { return v == values_.front(); });
}

std::vector<std::size_t> SwitchingSignal::realize(std::size_t steps) const {
    std::vector<std::size_t> out(steps);
    switch (kind_) {
        case Kind::Explicit:
            for (std::size_t k = 0; k < steps; ++k) out[k] = values_[std::min(k, values_.size() - 1)];
            break;
        case Kind::Periodic:
            for (std::size_t k = 0; k < steps; ++k) out[k] = values_[k % values_.size()];
            break;
        case Kind::Random: {
            std::mt19937_64 rng(seed_);
            std::uniform_int_distribution<std::size_t> pick(0, num_graphs_ - 1);
            for (auto& v : out) v = pick(rng);
            break;
        }
    }
    return out;
}

void SwitchingSignal::validate(std::size_t num_graphs) const {
    const auto bad = [&](std::size_t v) { return v >= num_graphs; };
    if ((kind_ == Kind::Random && num_graphs_ > num_graphs) || std::any_of(values_.begin(), values_.end(), bad)) {
        throw std::invalid_argument("switching signal selects a graph index >= " + std::to_string(num_graphs));
    }
}

Matrix error_dynamics_matrix(const Network& net, std::size_t graph_index) {
    const Matrix& k = net.require_gain();
    const auto adj = adjacency_matrices(net.graph(graph_index));
    const Matrix bk = net.sys().b() * k;
    return kron(Matrix::identity(net.modulus(), net.num_followers()), net.sys().a()) + kron(adj.bar - adj.d_bar, bk);
}

bool BlockwiseCheck::all_nilpotent() const noexcept {
    return std::all_of(nilpotent_degree.begin(), nilpotent_degree.end(), [](const auto& d) { return d.has_value(); });
}

namespace {

// A - d b K
Matrix closed_loop(const Network& net, const Matrix& k, Residue d) {
    return net.sys().a() - (net.sys().b() * k).scaled(d);
}

std::vector<std::optional<std::size_t>> agent_degrees(const Network& net, const Matrix& k,
                                                      const std::vector<Residue>& degrees) {
    std::vector<std::optional<std::size_t>> out;
    out.reserve(degrees.size());
    for (auto d : degrees) out.push_back(nilpotent_degree(closed_loop(net, k, d)));
    return out;
}

std::string join_nodes(const std::vector<NodeId>& nodes, const char* sep = ", ") {
    std::ostringstream os;
    for (std::size_t i = 0; i < nodes.size(); ++i) os << (i ? sep : "") << nodes[i];
    return os.str();
}

std::string matrix_str(const Matrix& m) {
    std::ostringstream os;
    os << m;
    return os.str();
}

GraphDiagnostics diagnose_graph(const WeightedDigraph& g) {
    GraphDiagnostics out;
    auto topo = topo_permutation(g);
    out.follower_dag = topo.is_dag();
    if (topo.order) out.topo_order = *topo.order;
    out.cycle = topo.cycle;
    out.degrees = in_degrees(g);
    out.leader_reachable = leader_globally_reachable(g);
    return out;
}

// Shared system-level facts of every report.
AnalysisReport base_report(const Network& net) {
    AnalysisReport r(net.modulus());
    r.a_nilpotent = is_nilpotent(net.sys().a());
    r.char_poly = char_poly(net.sys().a());
    const auto decomp = kalman_decompose(net.sys());
    r.stabilizable = is_stabilizable(decomp);
    r.controllable_dim = decomp.s;
    r.a_uc = decomp.a_uc;
    return r;
}

void describe_degree_failure(const CommonDegree& cd, std::vector<std::string>& reasons) {
    if (!cd.zero_degree.empty()) {
        reasons.push_back("in-degree is 0 mod p for follower(s) " + join_nodes(cd.zero_degree));
    }
    if (cd.unequal) reasons.emplace_back("follower in-degrees differ mod p");
    if (cd.zero_degree.empty() && !cd.unequal && !cd.d) reasons.emplace_back("network has no followers");
}

void fill_bounds(const Network& certified, AnalysisReport& r) {
    const auto b = convergence_bound(certified);
    r.static_bound = b.static_bound;
    r.switching_bound = b.switching_bound;
}

Verdict static_condition_verdict(bool a_nilpotent, bool dag, bool stabilizable, const CommonDegree& cd) {
    if (a_nilpotent) return Verdict::Guaranteed;
    if (!dag) return Verdict::Inconclusive;
    return stabilizable && cd.ok() ? Verdict::Guaranteed : Verdict::Impossible;
}

}  // namespace

BlockwiseCheck blockwise_nilpotency_check(const Network& net, std::size_t graph_index) {
    const auto& g = net.graph(graph_index);
    if (!is_dag(g)) throw std::invalid_argument("blockwise check needs an acyclic follower subgraph");
    BlockwiseCheck out;
    out.degrees = in_degrees(g);
    out.nilpotent_degree = agent_degrees(net, net.require_gain(), out.degrees);
    return out;
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Guaranteed: return "consensus guaranteed";
        case Verdict::Impossible: return "consensus impossible";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

AnalysisReport check_static(const Network& net, std::size_t graph_index) {
    const auto& g = net.graph(graph_index);
    const Network single(net.sys(), {g}, net.gain());
    AnalysisReport r = base_report(single);
    r.degree = common_degree(g);
    r.graphs.push_back(diagnose_graph(g));
    auto& diag = r.graphs.back();
    const std::size_t n = net.dim();
    const Matrix zero_gain(net.modulus(), 1, n);

    if (net.gain()) r.provided_gain_ok = is_nilpotent(error_dynamics_matrix(single));

    if (r.a_nilpotent) {
        r.verdict = Verdict::Guaranteed;
        r.reasons.emplace_back("A is nilpotent: K = 0 achieves consensus for any b and graph");
        r.gain = zero_gain;
        r.gain_source = "zero";
    } else if (diag.follower_dag) {
        if (!r.stabilizable) r.reasons.push_back("(A, b) is not stabilizable: A_uc = " + matrix_str(r.a_uc) + " is not nilpotent");
        if (!r.degree.ok()) describe_degree_failure(r.degree, r.reasons);
        if (r.stabilizable && r.degree.ok()) {
            r.verdict = Verdict::Guaranteed;
            r.reasons.push_back("follower subgraph is a DAG, (A, b) is stabilizable and every in-degree is " +
                                std::to_string(*r.degree.d) + " mod p");
            if (r.provided_gain_ok.value_or(false)) {
                r.gain = *net.gain();
                r.gain_source = "provided";
            } else {
                r.gain = synthesize_gain(single).gain;
                r.gain_source = "synthesized";
            }
        } else {
            r.verdict = Verdict::Impossible;
            r.reasons.emplace_back("no gain K can achieve consensus on this acyclic topology");
        }
    } else {
        r.reasons.push_back("follower subgraph has a directed cycle through " + join_nodes(diag.cycle, " -> "));
        if (net.gain()) {
            r.verdict = *r.provided_gain_ok ? Verdict::Guaranteed : Verdict::Impossible;
            r.reasons.emplace_back(*r.provided_gain_ok ? "the provided K makes the error dynamics nilpotent"
                                                       : "the provided K leaves the error dynamics non-nilpotent");
            if (*r.provided_gain_ok) {
                r.gain = *net.gain();
                r.gain_source = "provided";
            }
        } else {
            r.verdict = Verdict::Inconclusive;
            r.reasons.emplace_back("gain synthesis on cyclic topologies is a multivariate polynomial problem and is not attempted");
        }
    }
    if (net.gain() && r.provided_gain_ok == false && r.verdict == Verdict::Guaranteed) {
        r.reasons.emplace_back("the provided K does not achieve consensus; the report's gain does");
    }
    if (r.verdict == Verdict::Guaranteed && diag.follower_dag) {
        diag.agent_block_degree = agent_degrees(single, *r.gain, diag.degrees);
        if (r.degree.d) r.gain_block_degree = nilpotent_degree(closed_loop(single, *r.gain, *r.degree.d));
        fill_bounds(single.with_gain(*r.gain), r);
    } else if (r.verdict == Verdict::Guaranteed && r.gain_source == "zero") {
        fill_bounds(single.with_gain(*r.gain), r);
    } else if (r.verdict == Verdict::Guaranteed) {
        r.static_bound = net.num_followers() * n;
    }
    diag.static_verdict = static_condition_verdict(r.a_nilpotent, diag.follower_dag, r.stabilizable, r.degree);
    return r;
}

AnalysisReport check_switching(const Network& net) {
    AnalysisReport r = base_report(net);
    r.switching = true;
    r.degree = common_degree(std::span<const WeightedDigraph>(net.graphs()));
    for (const auto& g : net.graphs()) {
        r.graphs.push_back(diagnose_graph(g));
        r.graphs.back().static_verdict =
            static_condition_verdict(r.a_nilpotent, r.graphs.back().follower_dag, r.stabilizable, common_degree(g));
    }
    const auto uni = topo_permutation(graph_union(net.graphs()));
    r.union_dag = uni.is_dag();
    if (uni.order) r.union_order = *uni.order;
    r.union_cycle = uni.cycle;
    const Matrix zero_gain(net.modulus(), 1, net.dim());

    const bool hypotheses = *r.union_dag && r.stabilizable && r.degree.ok();
    if (net.gain() && *r.union_dag && r.degree.ok()) {
        r.provided_gain_ok = is_nilpotent(closed_loop(net, *net.gain(), *r.degree.d));
    }

    if (r.a_nilpotent) {
        r.verdict = Verdict::Guaranteed;
        r.reasons.emplace_back("A is nilpotent: K = 0 achieves consensus under any switching");
        r.gain = zero_gain;
        r.gain_source = "zero";
    } else if (hypotheses) {
        r.verdict = Verdict::Guaranteed;
        r.reasons.push_back("union of follower subgraphs is a DAG, (A, b) is stabilizable and every in-degree is " +
                            std::to_string(*r.degree.d) + " mod p in every graph");
        if (r.provided_gain_ok.value_or(false)) {
            r.gain = *net.gain();
            r.gain_source = "provided";
        } else {
            r.gain = synthesize_gain(net).gain;
            r.gain_source = "synthesized";
            if (net.gain()) r.reasons.emplace_back("the provided K does not achieve consensus; the report's gain does");
        }
    } else {
        r.verdict = Verdict::Inconclusive;
        if (!*r.union_dag) {
            r.reasons.push_back("union of follower subgraphs has a directed cycle through " +
                                join_nodes(r.union_cycle, " -> "));
        }
        if (!r.stabilizable) r.reasons.push_back("(A, b) is not stabilizable: A_uc = " + matrix_str(r.a_uc) + " is not nilpotent");
        if (!r.degree.ok()) describe_degree_failure(r.degree, r.reasons);
        const bool all_fail = std::all_of(r.graphs.begin(), r.graphs.end(),
                                          [](const auto& d) { return d.static_verdict == Verdict::Impossible; });
        if (all_fail) r.reasons.emplace_back("every individual topology fails the static necessary conditions");
        r.reasons.emplace_back("the switching conditions are only sufficient; no impossibility is claimed");
    }

    if (r.verdict == Verdict::Guaranteed) {
        for (auto& diag : r.graphs) diag.agent_block_degree = agent_degrees(net, *r.gain, diag.degrees);
        if (r.degree.d) r.gain_block_degree = nilpotent_degree(closed_loop(net, *r.gain, *r.degree.d));
        fill_bounds(net.with_gain(*r.gain), r);
    }
    return r;
}

AnalysisReport analyze(const Network& net, const std::optional<SwitchingSignal>& signal) {
    if (net.graphs().size() == 1) return check_static(net, 0);
    if (signal && signal->is_constant()) {
        const std::size_t idx = signal->kind() == SwitchingSignal::Kind::Random ? 0 : signal->values().front();
        return check_static(net, idx);
    }
    return check_switching(net);
}

Synthesis synthesize_gain(const Network& net) {
    const auto mod = net.modulus();
    if (is_nilpotent(net.sys().a())) {
        return {Matrix(mod, 1, net.dim()), 0, *nilpotent_degree(net.sys().a())};
    }
    const auto uni = topo_permutation(graph_union(net.graphs()));
    if (!uni.is_dag()) {
        throw SynthesisError(SynthesisError::Reason::CyclicGraph,
                             "follower topology has a directed cycle through " + join_nodes(uni.cycle, " -> ") +
                                 "; gain synthesis needs an acyclic follower subgraph");
    }
    const auto cd = common_degree(std::span<const WeightedDigraph>(net.graphs()));
    if (!cd.ok()) {
        std::vector<std::string> why;
        describe_degree_failure(cd, why);
        std::string msg = "degree condition fails:";
        for (const auto& w : why) msg += " " + w + ";";
        throw SynthesisError(SynthesisError::Reason::DegreeCondition, msg);
    }
    const auto decomp = kalman_decompose(net.sys());
    if (!is_stabilizable(decomp)) {
        throw SynthesisError(SynthesisError::Reason::NotStabilizable,
                             "(A, b) is not stabilizable: A_uc = " + matrix_str(decomp.a_uc) + " is not nilpotent");
    }
    Matrix k = deadbeat_gain(decomp, Scalar(mod, *cd.d));
    const auto deg = nilpotent_degree(closed_loop(net, k, *cd.d));
    if (!deg) throw std::logic_error("deadbeat gain failed its nilpotency postcondition");
    return {std::move(k), *cd.d, *deg};
}

std::size_t switching_time_bound(std::span<const std::size_t> k) {
    const std::size_t s = k.size();
    std::size_t total = 0;
    for (std::size_t l = 1; l <= s; ++l) {
        const std::size_t head = *std::max_element(k.begin(), k.begin() + static_cast<long>(s + 1 - l));
        const std::size_t tail = *std::max_element(k.begin() + static_cast<long>(l - 1), k.end());
        total += std::min(head, tail);
    }
    return total;
}

ConvergenceBound convergence_bound(const Network& net) {
    const Matrix k = net.gain() ? *net.gain() : synthesize_gain(net).gain;
    const std::size_t n_followers = net.num_followers();
    ConvergenceBound out;
    out.static_bound = n_followers * net.dim();

    std::vector<std::size_t> order(n_followers);
    for (std::size_t i = 0; i < n_followers; ++i) order[i] = i;
    if (!k.is_zero()) {
        const auto uni = topo_permutation(graph_union(net.graphs()));
        if (!uni.is_dag()) throw std::domain_error("convergence bound needs an acyclic union of follower subgraphs");
        order = *uni.order;
    }
    // each follower's diagonal block must be the same in every graph
    const auto degrees = in_degrees(net.graphs().front());
    for (const auto& g : net.graphs()) {
        if (in_degrees(g) != degrees && !k.is_zero()) {
            throw std::domain_error("follower in-degrees change across graphs; diagonal blocks are not shared");
        }
    }
    for (auto i : order) {
        const Residue d = k.is_zero() ? 0 : degrees[i];
        const auto deg = nilpotent_degree(closed_loop(net, k, d));
        if (!deg) throw std::domain_error("A - d_i b K is not nilpotent for follower " + std::to_string(i + 1));
        out.block_degrees.push_back(*deg);
    }
    out.switching_bound = switching_time_bound(out.block_degrees);
    return out;
}

}  // namespace ffcons
