#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "ffcons/matrix.hpp"

namespace ffcons {

using NodeId = std::size_t;

struct Edge {
    NodeId source;
    NodeId target;
    Residue weight;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted digraph on nodes {0, 1, ..., N}; node 0 is the leader.
/// An edge source -> target means the target receives the source's state,
/// i.e. a_{target, source} = weight. Zero weights, self-loops, edges into the
/// leader and duplicate ordered pairs are rejected.
class WeightedDigraph {
public:
    WeightedDigraph(PrimeModulus m, std::size_t num_followers);
    WeightedDigraph(PrimeModulus m, std::size_t num_followers,
                    const std::vector<std::tuple<NodeId, NodeId, std::int64_t>>& edges);

    void add_edge(NodeId source, NodeId target, std::int64_t weight);

    [[nodiscard]] PrimeModulus modulus() const noexcept { return mod_; }
    [[nodiscard]] std::size_t num_followers() const noexcept { return n_; }
    [[nodiscard]] std::vector<Edge> edges() const;
    [[nodiscard]] bool has_edge(NodeId source, NodeId target) const;
    /// a_{target, source}, zero when absent.
    [[nodiscard]] Residue weight(NodeId source, NodeId target) const;

private:
    PrimeModulus mod_;
    std::size_t n_;
    std::map<std::pair<NodeId, NodeId>, Residue> edges_;
};

struct AdjacencyMatrices {
    Matrix full;   // (N+1) x (N+1), full(i, j) = a_ij
    Matrix bar;    // follower block, rows/cols 1..N
    Matrix d_bar;  // diag(d_1..d_N), degrees counting the leader edge
};

[[nodiscard]] AdjacencyMatrices adjacency_matrices(const WeightedDigraph& g);

/// d_i = sum_{j=0..N} a_ij mod p, for followers i = 1..N (index i-1).
[[nodiscard]] std::vector<Residue> in_degrees(const WeightedDigraph& g);

/// Result of a topological ordering of the follower subgraph.
struct TopoResult {
    /// Follower indices 0..N-1 (follower i is index i-1), ordered so that
    /// permute_similarity(follower block, order) is strictly upper triangular.
    std::optional<std::vector<std::size_t>> order;
    /// Follower node ids (1..N) along a directed cycle when no order exists.
    std::vector<NodeId> cycle;

    [[nodiscard]] bool is_dag() const noexcept { return order.has_value(); }
};

/// Kahn's algorithm on the edge support; ties broken by smallest node index.
[[nodiscard]] TopoResult topo_permutation(const WeightedDigraph& g);
[[nodiscard]] bool is_dag(const WeightedDigraph& g);

/// Support-level union. Where graphs disagree on a weight, the first graph's weight is kept.
[[nodiscard]] WeightedDigraph graph_union(std::span<const WeightedDigraph> graphs);

[[nodiscard]] bool leader_globally_reachable(const WeightedDigraph& g);

/// Outcome of the common-degree test: either a shared nonzero d, or the offending followers.
struct CommonDegree {
    std::optional<Residue> d;
    std::vector<NodeId> zero_degree;             // followers with d_i = 0 mod p in some graph
    bool unequal = false;                        // nonzero degrees differ
    std::vector<std::vector<Residue>> degrees;   // per graph, d_1..d_N

    [[nodiscard]] bool ok() const noexcept { return d.has_value(); }
};

[[nodiscard]] CommonDegree common_degree(const WeightedDigraph& g);
/// Common degree across several graphs: the same d for every follower in every graph.
[[nodiscard]] CommonDegree common_degree(std::span<const WeightedDigraph> graphs);

/// L = D - A over all N+1 nodes.
[[nodiscard]] Matrix laplacian(const WeightedDigraph& g);

}  // namespace ffcons
