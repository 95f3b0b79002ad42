#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace mdens {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitRuntime = 2,
    kExitPropertyFailure = 3,
};

struct CommandOptions {
    std::string command;  // sweep | field | content | check
    std::string config_path;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    std::filesystem::path out = ".";
};

// Runs one subcommand, writing its outputs and manifest.json under `out`.
int run_command(const CommandOptions& options, std::ostream& log, std::ostream& err);

// Parses argv and dispatches to run_command.
int cli_main(int argc, char** argv);

}  // namespace mdens
