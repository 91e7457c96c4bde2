#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ffcons/consensus.hpp"
#include "ffcons/linear_system.hpp"
#include "ffcons/simulation.hpp"

namespace ffcons {

/// Malformed scenario; `field()` names the offending JSON path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct SwitchingSpec {
    std::string kind;                  // explicit | periodic | random
    std::vector<std::size_t> sequence;  // explicit sequence or periodic pattern; 1-based in JSON, 0-based here
    std::optional<std::uint64_t> seed;  // random
};

struct InitSpec {
    std::optional<std::uint64_t> seed;
    /// Leader first, then followers 1..N.
    std::optional<std::vector<std::vector<std::int64_t>>> states;
};

/// Scenario document. Integer entries are stored reduced mod p.
struct ScenarioConfig {
    std::uint64_t p = 2;
    std::size_t n = 0;
    std::size_t num_followers = 0;
    std::vector<std::vector<std::int64_t>> a;
    std::vector<std::int64_t> b;
    std::optional<std::vector<std::int64_t>> k;
    std::vector<std::vector<std::array<std::int64_t, 3>>> graphs;  // [source, target, weight]
    std::optional<SwitchingSpec> switching;
    std::optional<std::size_t> steps;
    std::optional<InitSpec> init;

    /// Values changed by reduction mod p during parsing.
    std::vector<std::string> warnings;
};

/// Throws ConfigError naming the field on any schema or validity problem.
[[nodiscard]] ScenarioConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);
/// Canonical document; parse_config(to_json(c)) reproduces c.
[[nodiscard]] nlohmann::json to_json(const ScenarioConfig& c);

[[nodiscard]] LinearSystem build_system(const ScenarioConfig& c);
[[nodiscard]] Network build_network(const ScenarioConfig& c);
[[nodiscard]] std::optional<SwitchingSignal> build_signal(const ScenarioConfig& c);
/// Explicit init states, if the config carries them.
[[nodiscard]] std::optional<NetworkState> build_init(const ScenarioConfig& c, const Network& net);

/// FNV-1a over the canonical JSON text.
[[nodiscard]] std::string config_hash(const ScenarioConfig& c);

[[nodiscard]] nlohmann::json to_json(const Matrix& m);
[[nodiscard]] nlohmann::json to_json(const Poly& f);
[[nodiscard]] nlohmann::json to_json(const AnalysisReport& r);
[[nodiscard]] nlohmann::json to_json(const CycleStructure& cs);
[[nodiscard]] nlohmann::json to_json(const Factorization& f);

/// Header "step,agent,error" (plus x1..xn when with_states), rows sorted by (step, agent).
[[nodiscard]] std::string trajectory_csv(const Trajectory& t, bool with_states = false);
/// The signal is reported with 1-based graph indices, as in the config.
[[nodiscard]] nlohmann::json trajectory_json(const Trajectory& t, bool with_states = false);

}  // namespace ffcons
