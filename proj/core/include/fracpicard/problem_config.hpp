#pragma once

#include <filesystem>
#include <string_view>

#include "fracpicard/errors.hpp"
#include "fracpicard/problem.hpp"

namespace fracpicard {

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Problem config JSON:
///   { "alpha": 1.5, "derivative_orders": [0.5], "initial_values": [0, 0],
///     "horizon": 1, "gamma": 0, "rhs": "...", "exact": "..." }
/// gamma defaults to 0 and exact is optional. Unknown keys and wrongly typed
/// values raise ConfigError.
ProblemSpec parse_problem_config(std::string_view json_text);
ProblemSpec load_problem_config(const std::filesystem::path& path);

}  // namespace fracpicard
