#include <doctest.h>

#include <cstdlib>
#include <random>
#include <stdexcept>
#include <vector>

#include "ffcons/simulation.hpp"
#include "oracles.hpp"

using namespace ffcons;

namespace {

struct RandomNet {
    Network net;
    std::int64_t p;
};

RandomNet random_network(std::mt19937_64& rng, std::int64_t p, std::size_t n, std::size_t N, std::size_t q, bool dag) {
    const PrimeModulus m(p);
    const LinearSystem sys(Matrix(m, oracle::random_mat(rng, n, n, p)), Matrix(m, oracle::random_mat(rng, n, 1, p)));
    std::vector<WeightedDigraph> graphs;
    for (std::size_t k = 0; k < q; ++k) {
        WeightedDigraph g(m, N);
        for (NodeId s = 0; s <= N; ++s)
            for (NodeId d = 1; d <= N; ++d)
                if (s != d && (!dag || s < d) && rng() % 2) g.add_edge(s, d, 1 + static_cast<std::int64_t>(rng() % (p - 1)));
        graphs.push_back(g);
    }
    return {Network(sys, graphs, Matrix(m, oracle::random_mat(rng, 1, n, p))), p};
}

// x_i' = A x_i + b K sum_j a_ij (x_j - x_i), written out with plain integers.
std::vector<oracle::Vec> agent_update(const Network& net, const NetworkState& s, std::size_t gi, std::int64_t p) {
    const std::size_t n = net.dim(), N = net.num_followers();
    const auto& g = net.graph(gi);
    auto vec = [&](const Matrix& x) {
        oracle::Vec v(n);
        for (std::size_t r = 0; r < n; ++r) v[r] = x(r, 0);
        return v;
    };
    std::vector<oracle::Vec> all{vec(s.leader)};
    for (const auto& f : s.followers) all.push_back(vec(f));
    std::vector<oracle::Vec> next;
    for (std::size_t i = 0; i <= N; ++i) {
        std::int64_t u = 0;
        if (i > 0)
            for (NodeId j = 0; j <= N; ++j)
                if (g.has_edge(j, i))
                    for (std::size_t c = 0; c < n; ++c)
                        u += static_cast<std::int64_t>(g.weight(j, i)) * (*net.gain())(0, c) * (all[j][c] - all[i][c]);
        oracle::Vec x(n);
        for (std::size_t r = 0; r < n; ++r) {
            std::int64_t acc = net.sys().b()(r, 0) * oracle::md(u, p);
            for (std::size_t c = 0; c < n; ++c) acc += static_cast<std::int64_t>(net.sys().a()(r, c)) * all[i][c];
            x[r] = oracle::md(acc, p);
        }
        next.push_back(x);
    }
    return next;
}

}  // namespace

TEST_CASE("one step matches the agent equations") {
    std::mt19937_64 rng(61);
    for (std::int64_t p : {2, 3, 7}) {
        for (int t = 0; t < 50; ++t) {
            const auto [net, pp] = random_network(rng, p, 1 + rng() % 3, 1 + rng() % 3, 2, false);
            const auto s = random_state(net, rng);
            for (std::size_t gi = 0; gi < 2; ++gi) {
                const auto next = step(net, s, gi);
                const auto expected = agent_update(net, s, gi, p);
                CHECK(next.step == s.step + 1);
                for (std::size_t r = 0; r < net.dim(); ++r) {
                    CHECK(next.leader(r, 0) == expected[0][r]);
                    for (std::size_t i = 0; i < net.num_followers(); ++i) CHECK(next.followers[i](r, 0) == expected[i + 1][r]);
                }
            }
        }
    }
}

TEST_CASE("stacked errors evolve by the error matrix") {
    std::mt19937_64 rng(62);
    for (int t = 0; t < 100; ++t) {
        const std::int64_t p = t % 2 ? 3 : 5;
        const auto [net, pp] = random_network(rng, p, 1 + rng() % 3, 1 + rng() % 3, 2, false);
        auto s = random_state(net, rng);
        for (std::size_t k = 0; k < 6; ++k) {
            const std::size_t gi = rng() % 2;
            const Matrix predicted = error_dynamics_matrix(net, gi) * stacked_error(s);
            s = step(net, s, gi);
            CHECK(stacked_error(s) == predicted);
        }
    }
}

TEST_CASE("tracking errors use integer distances") {
    const PrimeModulus m(5);
    NetworkState s{0, Matrix::column(m, {4, 0}), {Matrix::column(m, {0, 3}), Matrix::column(m, {4, 0})}};
    CHECK(tracking_errors(s) == std::vector<std::uint64_t>{7, 0});
}

TEST_CASE("errors seed a consistent state") {
    const PrimeModulus m(3);
    const LinearSystem sys(Matrix::identity(m, 2), Matrix::column(m, {1, 0}));
    const Network net(sys, {WeightedDigraph(m, 2, {{0, 1, 1}, {1, 2, 1}})}, Matrix::row(m, {1, 0}));
    const Matrix delta = Matrix::column(m, {1, 2, 0, 1});
    CHECK(stacked_error(state_from_errors(net, delta)) == delta);
}

TEST_CASE("worked example converges within the switching bound") {
    const PrimeModulus m(3);
    const LinearSystem sys(Matrix(m, {{0, 0, 1, 1, 1}, {2, 0, 0, 1, 2}, {0, 2, 2, 2, 0}, {0, 0, 1, 1, 2}, {2, 0, 1, 2, 2}}),
                           Matrix::column(m, {1, 1, 2, 2, 1}));
    const Network net(sys,
                      {WeightedDigraph(m, 4, {{0, 1, 1}, {0, 2, 2}, {1, 2, 2}, {2, 3, 1}, {1, 4, 2}, {3, 4, 2}}),
                       WeightedDigraph(m, 4, {{0, 1, 1}, {1, 2, 1}, {0, 3, 2}, {2, 3, 2}, {3, 4, 1}})},
                      Matrix::row(m, {2, 1, 2, 0, 1}));
    std::mt19937_64 rng(63);
    for (int t = 0; t < 20; ++t) {
        const auto traj = simulate(net, random_state(net, rng), SwitchingSignal::random(2, t), 30);
        CHECK(traj.states.size() == 31);
        CHECK(traj.signal.size() == 30);
        REQUIRE(traj.consensus_step.has_value());
        CHECK(*traj.consensus_step <= 16);
        for (std::size_t k = *traj.consensus_step; k < traj.errors.size(); ++k)
            for (auto e : traj.errors[k]) CHECK(e == 0);
    }
    CHECK_THROWS_AS(simulate(net, random_state(net, rng), SwitchingSignal::constant(0), 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate(net, random_state(net, rng), SwitchingSignal::constant(2), 5), std::invalid_argument);
}

TEST_CASE("exhaustive oracle agrees with nilpotency for a fixed graph") {
    std::mt19937_64 rng(64);
    for (int t = 0; t < 120; ++t) {
        const std::int64_t p = t % 2 ? 2 : 3;
        const std::size_t n = 1 + rng() % 2, N = 1 + rng() % 2;
        const auto [net, pp] = random_network(rng, p, n, N, 1, t % 3 != 0);
        const bool nil = is_nilpotent(error_dynamics_matrix(net));
        CHECK(exhaustive_consensus_oracle(net, SwitchingSignal::constant(0), n * N) == nil);
        CHECK(exhaustive_consensus_oracle(net, std::nullopt, n * N) == nil);
    }
}

TEST_CASE("all-signal oracle agrees with enumerating every product") {
    std::mt19937_64 rng(65);
    for (int t = 0; t < 60; ++t) {
        const std::int64_t p = 2;
        const std::size_t n = 1 + rng() % 2, N = 2;
        const auto [net, pp] = random_network(rng, p, n, N, 2, true);
        const Matrix m0 = error_dynamics_matrix(net, 0), m1 = error_dynamics_matrix(net, 1);
        for (std::size_t h = 1; h <= 5; ++h) {
            bool all_zero = true;
            for (std::uint64_t code = 0; code < (1ULL << h) && all_zero; ++code) {
                Matrix prod = Matrix::identity(net.modulus(), n * N);
                for (std::size_t k = 0; k < h; ++k) prod = ((code >> k) & 1 ? m1 : m0) * prod;
                all_zero = prod.is_zero();
            }
            CHECK(exhaustive_consensus_oracle(net, std::nullopt, h) == all_zero);
        }
    }
}

TEST_CASE("oracle enumeration bound") {
    std::mt19937_64 rng(66);
    const auto [net, pp] = random_network(rng, 3, 3, 3, 1, true);
    CHECK_THROWS_AS(exhaustive_consensus_oracle(net, std::nullopt, 5, 1000), std::length_error);
}
