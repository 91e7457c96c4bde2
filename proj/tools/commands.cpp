#include "commands.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "ffcons/consensus.hpp"
#include "ffcons/linear_system.hpp"
#include "ffcons/poly.hpp"
#include "ffcons/scenario.hpp"
#include "ffcons/simulation.hpp"

namespace ffcons::cli {

using nlohmann::json;

namespace {

// Writes to --out when given, otherwise to the command's output stream.
void emit(const Options& opt, std::ostream& out, const std::string& text) {
    if (!opt.out) {
        out << text;
        return;
    }
    std::ofstream f(*opt.out);
    if (!f) throw std::runtime_error("cannot write " + *opt.out);
    f << text;
}

ScenarioConfig load(const Options& opt, std::ostream& err) {
    auto cfg = load_config(opt.config);
    for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
    return cfg;
}

int verdict_status(Verdict v) {
    switch (v) {
        case Verdict::Guaranteed: return kExitOk;
        case Verdict::Impossible: return kExitImpossible;
        case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitError;
}

// Runs a command body, mapping configuration and runtime failures to exit status 1.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error: malformed config: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

}  // namespace

int cmd_analyze(const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load(opt, err);
        const auto net = build_network(cfg);
        const auto report = analyze(net, build_signal(cfg));
        emit(opt, out, to_json(report).dump(2) + "\n");
        return verdict_status(report.verdict);
    });
}

int cmd_synthesize(const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = load(opt, err);
        cfg.k.reset();
        const auto net = build_network(cfg);
        const auto report = analyze(net, build_signal(cfg));
        if (report.verdict != Verdict::Guaranteed || !report.gain) {
            err << "synthesis refused (" << to_string(report.verdict) << "):\n";
            for (const auto& r : report.reasons) err << "  - " << r << '\n';
            return verdict_status(report.verdict);
        }
        const auto& k = *report.gain;
        cfg.k = k.to_rows().front();
        json doc = to_json(cfg);
        doc["certificate"] = {
            {"common_degree", report.degree.d ? json(*report.degree.d) : json(nullptr)},
            {"gain_source", report.gain_source},
            {"closed_loop_nilpotent_degree", report.gain_block_degree ? json(*report.gain_block_degree) : json(nullptr)},
            {"bounds", {{"static", report.static_bound ? json(*report.static_bound) : json(nullptr)},
                        {"switching", report.switching_bound ? json(*report.switching_bound) : json(nullptr)}}},
        };
        emit(opt, out, doc.dump(2) + "\n");
        return kExitOk;
    });
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load(opt, err);
        const auto net = build_network(cfg);
        if (!net.gain()) {
            err << "error: config has no gain K; run `ffcons synthesize` first\n";
            return kExitError;
        }
        if (opt.format != "csv" && opt.format != "json") throw std::invalid_argument("--format must be csv or json");
        const auto configured = build_signal(cfg);
        const std::size_t q = net.graphs().size();
        const bool constant = q == 1 || (configured && configured->is_constant());

        // bound for the topology actually in use
        std::optional<std::size_t> bound;
        try {
            if (constant) {
                const std::size_t g = configured && configured->kind() != SwitchingSignal::Kind::Random
                                          ? configured->values().front()
                                          : 0;
                bound = convergence_bound(Network(net.sys(), {net.graph(g)}, net.gain())).static_bound;
            } else {
                bound = convergence_bound(net).switching_bound;
            }
        } catch (const std::domain_error&) {
            bound.reset();
        }
        const std::size_t horizon =
            opt.horizon.value_or(cfg.steps.value_or(bound ? *bound + 5 : 4 * net.num_followers() * net.dim()));
        const std::uint64_t base_seed = opt.seed.value_or(cfg.init && cfg.init->seed ? *cfg.init->seed : 0);
        const auto explicit_init = build_init(cfg, net);
        const bool certified = bound && horizon >= *bound;

        json trials = json::array();
        std::string csv;
        for (std::size_t t = 0; t < std::max<std::size_t>(opt.trials, 1); ++t) {
            const std::uint64_t init_seed = base_seed + t;
            std::mt19937_64 rng(init_seed);
            NetworkState init = explicit_init ? *explicit_init : random_state(net, rng);

            std::optional<std::uint64_t> signal_seed;
            SwitchingSignal signal = SwitchingSignal::constant(0);
            if (configured && configured->kind() != SwitchingSignal::Kind::Random) {
                signal = *configured;
            } else if (q > 1) {
                signal_seed = (configured ? configured->seed() : base_seed) + t;
                signal = SwitchingSignal::random(q, *signal_seed);
            }

            const auto traj = simulate(net, std::move(init), signal, horizon);
            err << "trial " << t << ": ";
            if (traj.consensus_step) {
                err << "consensus at step " << *traj.consensus_step;
            } else {
                err << "not reached within horizon " << horizon;
            }
            if (bound) err << " (bound " << *bound << ")";
            err << (certified ? "" : " [empirical within horizon]") << '\n';

            if (t == 0) csv = trajectory_csv(traj, opt.with_states);
            json entry = trajectory_json(traj, opt.with_states);
            entry["trial"] = t;
            entry["init_seed"] = explicit_init ? json(nullptr) : json(init_seed);
            entry["signal_seed"] = signal_seed ? json(*signal_seed) : json(nullptr);
            entry["within_bound"] = bound && traj.consensus_step ? json(*traj.consensus_step <= *bound) : json(nullptr);
            trials.push_back(std::move(entry));
        }

        if (opt.format == "csv") {
            emit(opt, out, csv);
        } else {
            json doc = {
                {"config_hash", config_hash(cfg)},
                {"seed", base_seed},
                {"horizon", horizon},
                {"bound", bound ? json(*bound) : json(nullptr)},
                {"certified", certified},
                {"trials", std::move(trials)},
            };
            emit(opt, out, doc.dump(2) + "\n");
        }
        return kExitOk;
    });
}

int cmd_cycles(const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load(opt, err);
        const auto sys = build_system(cfg);
        CycleStructure cs;
        try {
            cs = autonomous_cycle_structure(sys.a(), opt.poly ? CycleMethod::Polynomial : CycleMethod::Enumeration);
        } catch (const std::length_error& e) {
            err << "error: " << e.what() << "; rerun with --poly\n";
            return kExitError;
        }
        const Poly cp = char_poly(sys.a());
        const auto split = split_nilpotent_bijective(cp);
        if (opt.format == "json") {
            json doc = to_json(cs);
            doc["char_poly"] = to_json(cp);
            if (opt.poly) {
                doc["bijective_part"] = to_json(split.q);
                doc["factors"] = split.q.degree() > 0 ? to_json(factor(split.q)) : json(nullptr);
            }
            emit(opt, out, doc.dump(2) + "\n");
            return kExitOk;
        }
        std::ostringstream os;
        os << "method: " << (cs.method == CycleMethod::Enumeration ? "enumeration" : "polynomial") << '\n';
        os << "characteristic polynomial: " << cp.to_string() << '\n';
        os << "tree depth: " << cs.tree_depth << '\n';
        os << "cycles:";
        for (auto len : cs.cycle_lengths()) os << ' ' << len;
        os << "\nperiodic states: " << cs.periodic_states << '\n';
        if (cs.method == CycleMethod::Enumeration) os << "transient states: " << cs.transient_states << '\n';
        if (opt.poly) {
            os << "bijective part Q: " << split.q.to_string() << '\n';
            if (split.q.degree() > 0) {
                os << "factor\tmultiplicity\torder of x\n";
                for (const auto& f : factor(split.q).factors) {
                    os << f.poly.to_string() << '\t' << f.multiplicity << '\t' << order_of_x_mod(f.poly) << '\n';
                }
            }
            os << "note: exact only when the minimal and characteristic polynomials coincide\n";
        }
        emit(opt, out, os.str());
        return kExitOk;
    });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Leader-following consensus over prime fields"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", opt.config, "Scenario JSON file")->required();
        sub->add_option("--out", opt.out, "Write output to PATH");
    };
    auto* analyze_cmd = app.add_subcommand("analyze", "Check the consensus conditions");
    add_common(analyze_cmd);
    auto* synth_cmd = app.add_subcommand("synthesize", "Emit the config with a deadbeat gain K");
    add_common(synth_cmd);
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate trajectories");
    add_common(sim_cmd);
    sim_cmd->add_option("--trials", opt.trials, "Number of random trials");
    sim_cmd->add_option("--seed", opt.seed, "Base seed for initial states and switching");
    sim_cmd->add_option("--horizon", opt.horizon, "Number of steps");
    sim_cmd->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sim_cmd->add_flag("--with-states", opt.with_states, "Include follower states");
    auto* cycles_cmd = app.add_subcommand("cycles", "Cycle structure of x -> A x");
    add_common(cycles_cmd);
    cycles_cmd->add_flag("--poly", opt.poly, "Use the characteristic-polynomial route");
    cycles_cmd->add_option("--format", opt.format, "text or json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kExitOk : kExitError;
    }
    if (*analyze_cmd) return cmd_analyze(opt, out, err);
    if (*synth_cmd) return cmd_synthesize(opt, out, err);
    if (*sim_cmd) return cmd_simulate(opt, out, err);
    return cmd_cycles(opt, out, err);
}

}  // namespace ffcons::cli
