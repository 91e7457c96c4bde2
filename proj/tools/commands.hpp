#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace ffcons::cli {

// Exit statuses shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitImpossible = 2;
inline constexpr int kExitInconclusive = 3;

struct Options {
    std::string config;
    std::optional<std::string> out;
    std::size_t trials = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    bool poly = false;
    bool with_states = false;
    std::string format = "csv";
};

int cmd_analyze(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_synthesize(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_cycles(const Options& opt, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit status.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ffcons::cli
