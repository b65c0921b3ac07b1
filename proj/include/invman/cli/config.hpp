#pragma once

#include "invman/models.hpp"
#include "invman/solver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace invman::cli {

struct ResidualSection {
    double z_min = -1.5;
    double z_max = 1.5;
    double z_step = 0.025;

    /// Grid from z_min to z_max inclusive; endpoints are hit exactly.
    std::vector<double> grid() const;
};

struct ContinueSection {
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    int steps = 2;
    std::vector<double> values;  // explicit path; overrides start/stop/steps

    std::vector<double> path() const;
};

struct OutputSection {
    std::filesystem::path directory = ".";
    std::string stem = "run";
};

struct RunConfig {
    std::optional<ModelSpec> model;
    SolveConfig solve;
    std::optional<ResidualSection> residual;
    std::optional<ContinueSection> cont;
    OutputSection output;
    /// "section.key = value" lines in file order, echoed into report headers.
    std::vector<std::string> echo;
};

/// INI-style configuration. Errors carry ErrorKind::Config and name the line.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view text, std::string_view source = "<config>");

}  // namespace invman::cli
