#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <string>
#include <vector>

#include "ffcons/consensus.hpp"
#include "ffcons/linear_system.hpp"
#include "ffcons/scenario.hpp"
#include "ffcons/simulation.hpp"

namespace py = pybind11;
using namespace ffcons;
using nlohmann::json;

namespace {

using Rows = std::vector<std::vector<std::int64_t>>;

std::vector<std::int64_t> coeff_list(const Poly& f) { return {f.coeffs().begin(), f.coeffs().end()}; }

LinearSystem make_system(const Rows& a, const std::vector<std::int64_t>& b, std::uint64_t p) {
    const PrimeModulus m(p);
    return {Matrix(m, a), Matrix::column(m, b)};
}

std::string cycles_json(const Rows& a, std::uint64_t p, const std::string& method) {
    CycleMethod mode;
    if (method == "enumeration") {
        mode = CycleMethod::Enumeration;
    } else if (method == "polynomial") {
        mode = CycleMethod::Polynomial;
    } else {
        throw std::invalid_argument("method must be 'enumeration' or 'polynomial'");
    }
    return to_json(autonomous_cycle_structure(Matrix(PrimeModulus(p), a), mode)).dump();
}

std::string kalman_json(const Rows& a, const std::vector<std::int64_t>& b, std::uint64_t p) {
    const auto dec = kalman_decompose(make_system(a, b, p));
    return json{{"q", to_json(dec.q)},
                {"q_inv", to_json(dec.q_inv)},
                {"controllable_dim", dec.s},
                {"a_c", to_json(dec.a_c)},
                {"a_cc", to_json(dec.a_cc)},
                {"a_uc", to_json(dec.a_uc)},
                {"companion_coeffs", dec.companion_coeffs},
                {"stabilizable", is_stabilizable(dec)}}
        .dump();
}

std::vector<std::int64_t> gain(const Rows& a, const std::vector<std::int64_t>& b, std::uint64_t p, std::int64_t d) {
    const PrimeModulus m(p);
    return deadbeat_gain(kalman_decompose(make_system(a, b, p)), Scalar(m, d)).to_rows().front();
}

std::string analyze_json(const std::string& config) {
    const auto cfg = parse_config(json::parse(config));
    return to_json(analyze(build_network(cfg), build_signal(cfg))).dump();
}

std::string synthesize_json(const std::string& config) {
    auto cfg = parse_config(json::parse(config));
    cfg.k.reset();
    const auto syn = synthesize_gain(build_network(cfg));
    return json{{"K", syn.gain.to_rows().front()}, {"d", syn.d}, {"closed_loop_degree", syn.closed_loop_degree}}.dump();
}

std::string simulate_json(const std::string& config, std::size_t horizon, std::uint64_t seed, bool with_states) {
    const auto cfg = parse_config(json::parse(config));
    const auto net = build_network(cfg);
    std::mt19937_64 rng(seed);
    auto init = build_init(cfg, net);
    const NetworkState start = init ? *init : random_state(net, rng);
    auto signal = build_signal(cfg);
    if (!signal) {
        signal = net.graphs().size() == 1 ? SwitchingSignal::constant(0) : SwitchingSignal::random(net.graphs().size(), seed);
    }
    return trajectory_json(simulate(net, start, *signal, horizon), with_states).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Leader-following consensus over prime fields";

    m.def("char_poly", [](const Rows& a, std::uint64_t p) { return coeff_list(char_poly(Matrix(PrimeModulus(p), a))); },
          py::arg("a"), py::arg("p"), "Ascending coefficients of det(lambda I - A).");
    m.def("is_nilpotent", [](const Rows& a, std::uint64_t p) { return is_nilpotent(Matrix(PrimeModulus(p), a)); },
          py::arg("a"), py::arg("p"));
    m.def("nilpotent_degree",
          [](const Rows& a, std::uint64_t p) { return nilpotent_degree(Matrix(PrimeModulus(p), a)); }, py::arg("a"),
          py::arg("p"));
    m.def("rank", [](const Rows& a, std::uint64_t p) { return rank(Matrix(PrimeModulus(p), a)); }, py::arg("a"),
          py::arg("p"));
    m.def("is_irreducible",
          [](const std::vector<std::int64_t>& f, std::uint64_t p) { return is_irreducible(Poly(PrimeModulus(p), f)); },
          py::arg("coeffs"), py::arg("p"));
    m.def("order_of_x_mod",
          [](const std::vector<std::int64_t>& f, std::uint64_t p) { return order_of_x_mod(Poly(PrimeModulus(p), f)); },
          py::arg("coeffs"), py::arg("p"));
    m.def("is_stabilizable",
          [](const Rows& a, const std::vector<std::int64_t>& b, std::uint64_t p) {
              return is_stabilizable(make_system(a, b, p));
          },
          py::arg("a"), py::arg("b"), py::arg("p"));
    m.def("deadbeat_gain", &gain, py::arg("a"), py::arg("b"), py::arg("p"), py::arg("d") = 1);

    m.def("_cycle_structure", &cycles_json);
    m.def("_kalman_decompose", &kalman_json);
    m.def("_analyze", &analyze_json);
    m.def("_synthesize", &synthesize_json);
    m.def("_simulate", &simulate_json);

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SynthesisError>(m, "SynthesisError", PyExc_ValueError);
}
