#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ffcons/consensus.hpp"
#include "ffcons/matrix.hpp"

namespace ffcons {

struct NetworkState {
    std::size_t step = 0;
    Matrix leader;                  // n x 1
    std::vector<Matrix> followers;  // N vectors, n x 1
};

/// Uniform draw over F_p^n for the leader and each follower.
[[nodiscard]] NetworkState random_state(const Network& net, std::mt19937_64& rng);
/// All agents at the origin, followers offset from the leader by the stacked error delta (Nn x 1).
[[nodiscard]] NetworkState state_from_errors(const Network& net, const Matrix& delta);

/// Stacked delta = (x_1 - x_0, ..., x_N - x_0).
[[nodiscard]] Matrix stacked_error(const NetworkState& s);

/// e_i = sum_j |x_i^j - x_0^j| in ordinary integer arithmetic on residues.
[[nodiscard]] std::vector<std::uint64_t> tracking_errors(const NetworkState& s);

/// One synchronous update: every agent reads the pre-step states.
[[nodiscard]] NetworkState step(const Network& net, const NetworkState& s, std::size_t graph_index);

struct Trajectory {
    std::vector<NetworkState> states;               // steps 0..horizon
    std::vector<std::vector<std::uint64_t>> errors;  // per step, e_1..e_N
    std::vector<std::size_t> signal;                 // sigma(0..horizon-1)
    /// First k from which every error stays 0 through the horizon.
    std::optional<std::size_t> consensus_step;
};

/// Throws std::invalid_argument for horizon 0 or an invalid signal.
[[nodiscard]] Trajectory simulate(const Network& net, NetworkState init, const SwitchingSignal& signal,
                                  std::size_t horizon);

/// True iff from every initial error the followers are locked onto the leader after
/// `horizon` steps. With a signal, only that switching sequence is checked; without one,
/// every sequence over the network's graphs is. Enumerates the p^{nN} error states with
/// the agent-level update, so it is independent of the stacked error matrix.
/// Throws std::length_error past `bound` states.
[[nodiscard]] bool exhaustive_consensus_oracle(const Network& net, const std::optional<SwitchingSignal>& signal,
                                               std::size_t horizon,
                                               std::uint64_t bound = kDefaultEnumerationBound);

}  // namespace ffcons
