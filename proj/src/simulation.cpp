#include "ffcons/simulation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ffcons {

NetworkState random_state(const Network& net, std::mt19937_64& rng) {
    const auto mod = net.modulus();
    std::uniform_int_distribution<Residue> pick(0, mod.value() - 1);
    const auto draw = [&] {
        Matrix v(mod, net.dim(), 1);
        for (std::size_t i = 0; i < net.dim(); ++i) v.set(i, 0, pick(rng));
        return v;
    };
    NetworkState s{0, draw(), {}};
    for (std::size_t i = 0; i < net.num_followers(); ++i) s.followers.push_back(draw());
    return s;
}

NetworkState state_from_errors(const Network& net, const Matrix& delta) {
    const std::size_t n = net.dim();
    if (delta.rows() != n * net.num_followers() || delta.cols() != 1) {
        throw std::invalid_argument("stacked error must be " + std::to_string(n * net.num_followers()) + "x1");
    }
    NetworkState s{0, Matrix(net.modulus(), n, 1), {}};
    for (std::size_t i = 0; i < net.num_followers(); ++i) s.followers.push_back(delta.block(i * n, 0, n, 1));
    return s;
}

Matrix stacked_error(const NetworkState& s) {
    const std::size_t n = s.leader.rows();
    Matrix out(s.leader.modulus(), n * s.followers.size(), 1);
    for (std::size_t i = 0; i < s.followers.size(); ++i) out.set_block(i * n, 0, s.followers[i] - s.leader);
    return out;
}

std::vector<std::uint64_t> tracking_errors(const NetworkState& s) {
    std::vector<std::uint64_t> out;
    out.reserve(s.followers.size());
    for (const auto& x : s.followers) {
        std::uint64_t e = 0;
        for (std::size_t j = 0; j < x.rows(); ++j) {
            const std::int64_t diff = static_cast<std::int64_t>(x(j, 0)) - static_cast<std::int64_t>(s.leader(j, 0));
            e += static_cast<std::uint64_t>(diff < 0 ? -diff : diff);
        }
        out.push_back(e);
    }
    return out;
}

NetworkState step(const Network& net, const NetworkState& s, std::size_t graph_index) {
    const Matrix& k = net.require_gain();
    const auto& g = net.graph(graph_index);
    const auto mod = net.modulus();
    const Matrix& a = net.sys().a();
    const Matrix& b = net.sys().b();
    if (s.followers.size() != net.num_followers()) throw std::invalid_argument("state has the wrong number of followers");

    const auto agent = [&](NodeId j) -> const Matrix& { return j == 0 ? s.leader : s.followers[j - 1]; };
    std::vector<Matrix> mix(net.num_followers(), Matrix(mod, net.dim(), 1));
    for (const auto& e : g.edges()) {
        mix[e.target - 1] += (agent(e.source) - agent(e.target)).scaled(e.weight);
    }

    NetworkState out{s.step + 1, a * s.leader, {}};
    out.followers.reserve(net.num_followers());
    for (std::size_t i = 0; i < net.num_followers(); ++i) {
        const Residue u = (k * mix[i])(0, 0);
        out.followers.push_back(a * s.followers[i] + b.scaled(u));
    }
    return out;
}

Trajectory simulate(const Network& net, NetworkState init, const SwitchingSignal& signal, std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("simulation horizon must be at least 1");
    signal.validate(net.graphs().size());
    Trajectory t;
    t.signal = signal.realize(horizon);
    t.states.reserve(horizon + 1);
    t.errors.reserve(horizon + 1);
    t.states.push_back(std::move(init));
    t.errors.push_back(tracking_errors(t.states.back()));
    for (std::size_t k = 0; k < horizon; ++k) {
        t.states.push_back(step(net, t.states.back(), t.signal[k]));
        t.errors.push_back(tracking_errors(t.states.back()));
    }
    const auto all_zero = [](const std::vector<std::uint64_t>& e) {
        return std::all_of(e.begin(), e.end(), [](std::uint64_t v) { return v == 0; });
    };
    std::size_t first = t.errors.size();
    while (first > 0 && all_zero(t.errors[first - 1])) --first;
    if (first < t.errors.size()) t.consensus_step = first;
    return t;
}

namespace {

struct ErrorCodec {
    std::uint64_t p;
    std::size_t len;

    [[nodiscard]] std::uint64_t encode(const Matrix& delta) const {
        std::uint64_t code = 0;
        for (std::size_t i = len; i-- > 0;) code = code * p + delta(i, 0);
        return code;
    }
    [[nodiscard]] Matrix decode(PrimeModulus m, std::uint64_t code) const {
        Matrix out(m, len, 1);
        for (std::size_t i = 0; i < len; ++i) {
            out.set(i, 0, static_cast<std::int64_t>(code % p));
            code /= p;
        }
        return out;
    }
};

}  // namespace

bool exhaustive_consensus_oracle(const Network& net, const std::optional<SwitchingSignal>& signal, std::size_t horizon,
                                 std::uint64_t bound) {
    (void)net.require_gain();
    const auto mod = net.modulus();
    const ErrorCodec codec{mod.value(), net.dim() * net.num_followers()};
    const std::uint64_t total = state_count(codec.p, codec.len, bound);
    if (total > bound) {
        throw std::length_error("error state space p^(nN) exceeds the enumeration bound " + std::to_string(bound));
    }
    const auto advance = [&](std::uint64_t code, std::size_t g) {
        return codec.encode(stacked_error(step(net, state_from_errors(net, codec.decode(mod, code)), g)));
    };

    if (signal) {
        signal->validate(net.graphs().size());
        const auto sigma = signal->realize(horizon);
        for (std::uint64_t code = 0; code < total; ++code) {
            std::uint64_t c = code;
            for (auto g : sigma) c = advance(c, g);
            if (c != 0) return false;
        }
        return true;
    }

    // every signal at once: the set of error states reachable after k steps
    std::vector<bool> live(total, true);
    for (std::size_t k = 0; k < horizon; ++k) {
        std::vector<bool> next(total, false);
        for (std::uint64_t code = 0; code < total; ++code) {
            if (!live[code]) continue;
            for (std::size_t g = 0; g < net.graphs().size(); ++g) next[advance(code, g)] = true;
        }
        live = std::move(next);
    }
    for (std::uint64_t code = 1; code < total; ++code) {
        if (live[code]) return false;
    }
    return true;
}

}  // namespace ffcons
