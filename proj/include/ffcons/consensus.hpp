#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffcons/graph.hpp"
#include "ffcons/linear_system.hpp"
#include "ffcons/matrix.hpp"

namespace ffcons {

/// Leader x_0(k+1) = A x_0(k); followers x_i(k+1) = A x_i(k) + b u_i(k) with
/// u_i = K sum_j a_ij (x_j - x_i). One graph is the static case; several graphs are
/// the candidate topologies of a switching network.
class Network {
public:
    Network(LinearSystem sys, std::vector<WeightedDigraph> graphs, std::optional<Matrix> gain = std::nullopt);

    [[nodiscard]] const LinearSystem& sys() const noexcept { return sys_; }
    [[nodiscard]] const std::vector<WeightedDigraph>& graphs() const noexcept { return graphs_; }
    [[nodiscard]] const WeightedDigraph& graph(std::size_t index) const;
    [[nodiscard]] const std::optional<Matrix>& gain() const noexcept { return gain_; }
    [[nodiscard]] std::size_t num_followers() const noexcept { return graphs_.front().num_followers(); }
    [[nodiscard]] std::size_t dim() const noexcept { return sys_.dim(); }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return sys_.modulus(); }

    [[nodiscard]] Network with_gain(Matrix k) const;
    /// Throws std::invalid_argument when no gain is set.
    [[nodiscard]] const Matrix& require_gain() const;

private:
    LinearSystem sys_;
    std::vector<WeightedDigraph> graphs_;
    std::optional<Matrix> gain_;
};

/// Maps time steps to graph indices (0-based).
class SwitchingSignal {
public:
    enum class Kind { Explicit, Periodic, Random };

    /// Explicit sequences hold their last value past the end.
    static SwitchingSignal explicit_sequence(std::vector<std::size_t> values);
    static SwitchingSignal periodic(std::vector<std::size_t> pattern);
    static SwitchingSignal random(std::size_t num_graphs, std::uint64_t seed);
    static SwitchingSignal constant(std::size_t index) { return explicit_sequence({index}); }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<std::size_t>& values() const noexcept { return values_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::size_t num_graphs() const noexcept { return num_graphs_; }
    /// True when every step selects the same graph.
    [[nodiscard]] bool is_constant() const noexcept;

    /// sigma(0), ..., sigma(steps - 1).
    [[nodiscard]] std::vector<std::size_t> realize(std::size_t steps) const;
    /// Throws std::invalid_argument if some emitted index is >= num_graphs.
    void validate(std::size_t num_graphs) const;

private:
    Kind kind_ = Kind::Explicit;
    std::vector<std::size_t> values_;
    std::uint64_t seed_ = 0;
    std::size_t num_graphs_ = 0;
};

/// I_N (x) A + (F - D) (x) bK for the follower adjacency block F and the in-degree
/// diagonal D, whose degrees count leader edges.
[[nodiscard]] Matrix error_dynamics_matrix(const Network& net, std::size_t graph_index = 0);

struct BlockwiseCheck {
    std::vector<Residue> degrees;                  // d_i per follower
    std::vector<std::optional<std::size_t>> nilpotent_degree;  // of A - d_i b K, per follower

    [[nodiscard]] bool all_nilpotent() const noexcept;
};

/// Per-follower nilpotency of A - d_i b K. Throws std::invalid_argument when the follower
/// subgraph is cyclic (the block-triangular reduction needs a DAG).
[[nodiscard]] BlockwiseCheck blockwise_nilpotency_check(const Network& net, std::size_t graph_index = 0);

enum class Verdict { Guaranteed, Impossible, Inconclusive };

[[nodiscard]] const char* to_string(Verdict v) noexcept;

struct GraphDiagnostics {
    bool follower_dag = false;
    std::vector<std::size_t> topo_order;  // follower indices, empty when cyclic
    std::vector<NodeId> cycle;            // follower node ids on a cycle
    std::vector<Residue> degrees;
    bool leader_reachable = false;
    /// Per-follower nilpotent degree of A - d_i b K for the report's gain.
    std::vector<std::optional<std::size_t>> agent_block_degree;
    /// Single-graph consensus verdict for this topology, when it is a DAG.
    std::optional<Verdict> static_verdict;
};

struct AnalysisReport {
    explicit AnalysisReport(PrimeModulus m) : char_poly(m), a_uc(m, 0, 0) {}

    Verdict verdict = Verdict::Inconclusive;
    bool switching = false;
    std::vector<std::string> reasons;

    bool a_nilpotent = false;
    Poly char_poly;
    bool stabilizable = false;
    std::size_t controllable_dim = 0;
    Matrix a_uc;

    CommonDegree degree;
    std::vector<GraphDiagnostics> graphs;
    std::optional<bool> union_dag;
    std::vector<std::size_t> union_order;
    std::vector<NodeId> union_cycle;

    /// Gain certifying a Guaranteed verdict.
    std::optional<Matrix> gain;
    std::string gain_source = "none";  // provided | synthesized | zero | none
    std::optional<std::size_t> gain_block_degree;  // nilpotent degree of A - d b K
    /// Whether a user-supplied K achieves consensus; empty when undetermined or absent.
    std::optional<bool> provided_gain_ok;

    std::optional<std::size_t> static_bound;
    std::optional<std::size_t> switching_bound;
};

/// Single-topology analysis (the given graph of the network).
[[nodiscard]] AnalysisReport check_static(const Network& net, std::size_t graph_index = 0);
/// Sufficient conditions for consensus under arbitrary switching among all graphs.
[[nodiscard]] AnalysisReport check_switching(const Network& net);
/// check_static for single-graph networks or constant signals, check_switching otherwise.
[[nodiscard]] AnalysisReport analyze(const Network& net, const std::optional<SwitchingSignal>& signal = std::nullopt);

class SynthesisError : public std::runtime_error {
public:
    enum class Reason { NotStabilizable, DegreeCondition, CyclicGraph };
    SynthesisError(Reason r, const std::string& what) : std::runtime_error(what), reason_(r) {}
    [[nodiscard]] Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

struct Synthesis {
    Matrix gain;
    Residue d = 0;                  // common degree; 0 when A is nilpotent and K = 0
    std::size_t closed_loop_degree = 0;  // nilpotent degree of A - d b K
};

/// Deadbeat gain for the common degree of every graph. Throws SynthesisError.
[[nodiscard]] Synthesis synthesize_gain(const Network& net);

struct ConvergenceBound {
    std::size_t static_bound = 0;     // N * n
    std::size_t switching_bound = 0;  // sum of tau_l over block positions
    std::vector<std::size_t> block_degrees;  // k_l in block order
};

/// T = sum_l tau_l, tau_l = min(max(k_1..k_{s+1-l}), max(k_l..k_s)).
[[nodiscard]] std::size_t switching_time_bound(std::span<const std::size_t> block_degrees);

/// Bounds for the network's gain (or the synthesized one when absent). Throws
/// std::domain_error when the hypotheses behind the bounds do not hold.
[[nodiscard]] ConvergenceBound convergence_bound(const Network& net);

}  // namespace ffcons
