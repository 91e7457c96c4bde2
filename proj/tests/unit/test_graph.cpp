#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "ffcons/graph.hpp"

using namespace ffcons;

namespace {

WeightedDigraph random_graph(std::mt19937_64& rng, PrimeModulus m, std::size_t n, double density, bool dag) {
    WeightedDigraph g(m, n);
    std::vector<NodeId> rank(n);
    std::iota(rank.begin(), rank.end(), NodeId{1});
    std::shuffle(rank.begin(), rank.end(), rng);
    std::uniform_real_distribution<double> u(0, 1);
    for (NodeId src = 0; src <= n; ++src)
        for (NodeId tgt = 1; tgt <= n; ++tgt) {
            if (src == tgt || u(rng) > density) continue;
            // a DAG keeps only edges that go forward in a hidden ranking
            if (dag && src != 0 && rank[src - 1] > rank[tgt - 1]) continue;
            g.add_edge(src, tgt, 1 + static_cast<std::int64_t>(rng() % (m.value() - 1)));
        }
    return g;
}

// Some relabelling makes the follower support strictly upper triangular.
bool triangularizable_by_search(const WeightedDigraph& g) {
    const auto bar = adjacency_matrices(g).bar;
    std::vector<std::size_t> perm(g.num_followers());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t k = 0; k < perm.size() && ok; ++k)
            for (std::size_t l = 0; l <= k && ok; ++l) ok = bar(perm[k], perm[l]) == 0;
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace

TEST_CASE("edge validation") {
    const PrimeModulus m(3);
    WeightedDigraph g(m, 3);
    CHECK_THROWS(g.add_edge(0, 4, 1));
    CHECK_THROWS(g.add_edge(1, 0, 1));
    CHECK_THROWS(g.add_edge(2, 2, 1));
    CHECK_THROWS(g.add_edge(0, 1, 3));
    g.add_edge(0, 1, 5);
    CHECK(g.weight(0, 1) == 2);
    CHECK_THROWS(g.add_edge(0, 1, 1));
    CHECK(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(1, 0));
}

TEST_CASE("adjacency convention and degrees") {
    const PrimeModulus m(3);
    const WeightedDigraph g(m, 3, {{0, 1, 1}, {0, 2, 2}, {1, 2, 2}, {2, 3, 1}});
    const auto adj = adjacency_matrices(g);
    CHECK(adj.full(1, 0) == 1);  // edge 0 -> 1 is a_{1,0}
    CHECK(adj.full(2, 1) == 2);
    CHECK(adj.full(1, 2) == 0);
    CHECK(adj.bar == Matrix(m, {{0, 0, 0}, {2, 0, 0}, {0, 1, 0}}));
    CHECK(in_degrees(g) == std::vector<Residue>{1, 1, 1});  // 2 + 2 = 1 mod 3
    CHECK(adj.d_bar == Matrix::identity(m, 3));
    const auto cd = common_degree(g);
    REQUIRE(cd.ok());
    CHECK(*cd.d == 1);
}

TEST_CASE("common degree failures") {
    const PrimeModulus m(3);
    const WeightedDigraph zero(m, 2, {{0, 1, 1}, {0, 2, 1}, {1, 2, 2}});
    const auto z = common_degree(zero);
    CHECK_FALSE(z.ok());
    CHECK(z.zero_degree == std::vector<NodeId>{2});
    const WeightedDigraph unequal(m, 2, {{0, 1, 1}, {0, 2, 2}});
    const auto u = common_degree(unequal);
    CHECK_FALSE(u.ok());
    CHECK(u.unequal);
    const std::vector<WeightedDigraph> pair{WeightedDigraph(m, 1, {{0, 1, 1}}), WeightedDigraph(m, 1, {{0, 1, 2}})};
    CHECK_FALSE(common_degree(pair).ok());
    CHECK(common_degree(pair).degrees.size() == 2);
}

TEST_CASE("laplacian rows sum to zero") {
    std::mt19937_64 rng(41);
    const PrimeModulus m(5);
    for (int t = 0; t < 50; ++t) {
        const auto g = random_graph(rng, m, 4, 0.5, false);
        const Matrix l = laplacian(g);
        for (std::size_t i = 0; i < l.rows(); ++i) {
            std::uint64_t sum = 0;
            for (std::size_t j = 0; j < l.cols(); ++j) sum += l(i, j);
            CHECK(sum % 5 == 0);
        }
        const auto deg = in_degrees(g);
        for (std::size_t i = 1; i < l.rows(); ++i) CHECK(l(i, i) == deg[i - 1]);
    }
}

TEST_CASE("topological order triangularizes the follower block") {
    std::mt19937_64 rng(42);
    const PrimeModulus m(3);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng() % 6;
        const auto g = random_graph(rng, m, n, 0.4, t % 2 == 0);
        const auto topo = topo_permutation(g);
        CHECK(topo.is_dag() == triangularizable_by_search(g));
        CHECK(is_dag(g) == topo.is_dag());
        const auto bar = adjacency_matrices(g).bar;
        if (topo.is_dag()) {
            const auto perm = permute_similarity(bar, *topo.order);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l <= k; ++l) CHECK(perm(k, l) == 0);
            CHECK(is_nilpotent(bar));
        } else {
            // the reported cycle is closed and uses real edges
            const auto& c = topo.cycle;
            REQUIRE(c.size() >= 2);
            for (std::size_t i = 0; i < c.size(); ++i) CHECK(g.has_edge(c[i], c[(i + 1) % c.size()]));
        }
    }
}

TEST_CASE("order tie-break is deterministic") {
    const PrimeModulus m(2);
    const WeightedDigraph empty(m, 3);
    // with no follower edges every order is valid; the smallest index comes first
    CHECK(*topo_permutation(empty).order == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("union keeps support and first weights") {
    const PrimeModulus m(3);
    const std::vector<WeightedDigraph> gs{WeightedDigraph(m, 3, {{0, 1, 1}, {1, 2, 2}}),
                                          WeightedDigraph(m, 3, {{1, 2, 1}, {2, 3, 1}})};
    const auto u = graph_union(gs);
    CHECK(u.edges().size() == 3);
    CHECK(u.weight(1, 2) == 2);
    CHECK(is_dag(u));
    const std::vector<WeightedDigraph> cyc{WeightedDigraph(m, 2, {{1, 2, 1}}), WeightedDigraph(m, 2, {{2, 1, 1}})};
    CHECK(is_dag(cyc[0]));
    CHECK(is_dag(cyc[1]));
    CHECK_FALSE(is_dag(graph_union(cyc)));
}

TEST_CASE("leader reachability") {
    const PrimeModulus m(3);
    CHECK(leader_globally_reachable(WeightedDigraph(m, 3, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}})));
    CHECK_FALSE(leader_globally_reachable(WeightedDigraph(m, 3, {{0, 1, 1}, {2, 3, 1}})));
}
