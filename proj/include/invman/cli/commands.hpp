#pragma once

#include "invman/cli/config.hpp"
#include "invman/cli/tsv.hpp"
#include "invman/errors.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace invman::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitVerifyFailed = 1,
    kExitConfig = 2,
    kExitSpectral = 3,
    kExitNumerical = 4,
};

int exit_code_for(ErrorKind kind);

struct CommandResult {
    /// (file suffix, table); written as <stem>.<suffix>.tsv
    std::vector<std::pair<std::string, TsvTable>> files;
    std::vector<std::string> messages;
    int exit_code = kExitOk;
};

// Each command throws invman::Error on failure; `run` maps errors to exit codes.
CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_solve(const RunConfig& cfg);
CommandResult cmd_residual(const RunConfig& cfg);
CommandResult cmd_continue(const RunConfig& cfg);

/// Full dispatch: parse the config, run, write tables, report on `out`/`err`.
int run(std::string_view command, const std::optional<std::filesystem::path>& config,
        const std::optional<std::filesystem::path>& out_dir, std::ostream& out, std::ostream& err);

}  // namespace invman::cli
