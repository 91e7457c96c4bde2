#include "ffcons/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace ffcons {

WeightedDigraph::WeightedDigraph(PrimeModulus m, std::size_t num_followers) : mod_(m), n_(num_followers) {}

WeightedDigraph::WeightedDigraph(PrimeModulus m, std::size_t num_followers,
                                 const std::vector<std::tuple<NodeId, NodeId, std::int64_t>>& edges)
    : WeightedDigraph(m, num_followers) {
    for (const auto& [s, t, w] : edges) add_edge(s, t, w);
}

void WeightedDigraph::add_edge(NodeId source, NodeId target, std::int64_t weight) {
    const auto edge_name = [&] { return std::to_string(source) + "->" + std::to_string(target); };
    if (source > n_ || target > n_) throw std::invalid_argument("edge " + edge_name() + ": node out of range");
    if (target == 0) throw std::invalid_argument("edge " + edge_name() + ": the leader has no incoming edges");
    if (source == target) throw std::invalid_argument("edge " + edge_name() + ": self-loop");
    const Residue w = mod_.reduce(weight);
    if (w == 0) throw std::invalid_argument("edge " + edge_name() + ": weight is 0 mod p");
    if (!edges_.emplace(std::pair{source, target}, w).second) {
        throw std::invalid_argument("edge " + edge_name() + ": duplicate");
    }
}

std::vector<Edge> WeightedDigraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [key, w] : edges_) out.push_back({key.first, key.second, w});
    return out;
}

bool WeightedDigraph::has_edge(NodeId source, NodeId target) const { return edges_.contains({source, target}); }

Residue WeightedDigraph::weight(NodeId source, NodeId target) const {
    auto it = edges_.find({source, target});
    return it == edges_.end() ? 0 : it->second;
}

std::vector<Residue> in_degrees(const WeightedDigraph& g) {
    const auto mod = g.modulus();
    std::vector<Residue> d(g.num_followers(), 0);
    for (const auto& e : g.edges()) d[e.target - 1] = mod.add(d[e.target - 1], e.weight);
    return d;
}

AdjacencyMatrices adjacency_matrices(const WeightedDigraph& g) {
    const auto mod = g.modulus();
    const std::size_t n = g.num_followers();
    Matrix full(mod, n + 1, n + 1);
    for (const auto& e : g.edges()) full.set(e.target, e.source, e.weight);
    Matrix d_bar(mod, n, n);
    const auto deg = in_degrees(g);
    for (std::size_t i = 0; i < n; ++i) d_bar.set(i, i, deg[i]);
    return {full, full.block(1, 1, n, n), std::move(d_bar)};
}

TopoResult topo_permutation(const WeightedDigraph& g) {
    const std::size_t n = g.num_followers();
    // targets are emitted before their sources
    std::vector<std::vector<std::size_t>> sources_of(n);
    std::vector<std::size_t> pending_targets(n, 0);
    for (const auto& e : g.edges()) {
        if (e.source == 0) continue;
        sources_of[e.target - 1].push_back(e.source - 1);
        ++pending_targets[e.source - 1];
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (pending_targets[i] == 0) ready.push(i);
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        const std::size_t v = ready.top();
        ready.pop();
        order.push_back(v);
        for (auto src : sources_of[v]) {
            if (--pending_targets[src] == 0) ready.push(src);
        }
    }
    if (order.size() == n) return {std::move(order), {}};

    // every unplaced node still has an unplaced target; follow those until a repeat
    std::vector<bool> placed(n, false);
    for (auto v : order) placed[v] = true;
    std::vector<std::vector<std::size_t>> targets_of(n);
    for (const auto& e : g.edges()) {
        if (e.source != 0) targets_of[e.source - 1].push_back(e.target - 1);
    }
    std::size_t v = 0;
    while (placed[v]) ++v;
    std::vector<std::size_t> walk;
    std::vector<std::size_t> pos(n, n);
    while (pos[v] == n) {
        pos[v] = walk.size();
        walk.push_back(v);
        v = *std::find_if(targets_of[v].begin(), targets_of[v].end(), [&](std::size_t t) { return !placed[t]; });
    }
    TopoResult out;
    for (std::size_t k = pos[v]; k < walk.size(); ++k) out.cycle.push_back(walk[k] + 1);
    return out;
}

bool is_dag(const WeightedDigraph& g) { return topo_permutation(g).is_dag(); }

WeightedDigraph graph_union(std::span<const WeightedDigraph> graphs) {
    if (graphs.empty()) throw std::invalid_argument("union of an empty graph list");
    WeightedDigraph out(graphs.front().modulus(), graphs.front().num_followers());
    for (const auto& g : graphs) {
        require_same_modulus(out.modulus(), g.modulus());
        if (g.num_followers() != out.num_followers()) throw std::invalid_argument("union of graphs with different N");
        for (const auto& e : g.edges()) {
            if (!out.has_edge(e.source, e.target)) out.add_edge(e.source, e.target, e.weight);
        }
    }
    return out;
}

bool leader_globally_reachable(const WeightedDigraph& g) {
    const std::size_t n = g.num_followers();
    std::vector<std::vector<NodeId>> out_edges(n + 1);
    for (const auto& e : g.edges()) out_edges[e.source].push_back(e.target);
    std::vector<bool> seen(n + 1, false);
    std::vector<NodeId> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (auto t : out_edges[v]) {
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

CommonDegree common_degree(std::span<const WeightedDigraph> graphs) {
    CommonDegree out;
    std::vector<bool> zero;
    std::optional<Residue> first;
    for (const auto& g : graphs) {
        auto deg = in_degrees(g);
        zero.resize(std::max(zero.size(), deg.size()), false);
        for (std::size_t i = 0; i < deg.size(); ++i) {
            if (deg[i] == 0) {
                zero[i] = true;
                continue;
            }
            if (!first) first = deg[i];
            if (deg[i] != *first) out.unequal = true;
        }
        out.degrees.push_back(std::move(deg));
    }
    for (std::size_t i = 0; i < zero.size(); ++i) {
        if (zero[i]) out.zero_degree.push_back(i + 1);
    }
    if (out.zero_degree.empty() && !out.unequal && first) out.d = first;
    return out;
}

CommonDegree common_degree(const WeightedDigraph& g) { return common_degree(std::span<const WeightedDigraph>(&g, 1)); }

Matrix laplacian(const WeightedDigraph& g) {
    const auto mod = g.modulus();
    const std::size_t n = g.num_followers();
    Matrix l(mod, n + 1, n + 1);
    for (const auto& e : g.edges()) {
        l.set(e.target, e.target, mod.add(l(e.target, e.target), e.weight));
        l.set(e.target, e.source, mod.neg(e.weight));
    }
    return l;
}

}  // namespace ffcons
