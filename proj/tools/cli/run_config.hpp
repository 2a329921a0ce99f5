#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

namespace fracpicard::cli {

enum class Mode { Solve, Verify, Study, Oracle };

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,
    kNotConverged = 2,
    kVerificationFailed = 3,
};

/// Pass/fail thresholds for verify mode.
struct Thresholds {
    double ode_residual = 1e-3;
    double volterra_residual = 1e-3;
    /// |D^k y(+0) - b_k| <= ic_relative * (1 + |b_k|)
    double ic_relative = 5e-2;
    /// |fitted decay slope - (α - γ)|
    double decay_slope = 5e-2;
    /// I^α t^{-γ} at t_0
    double decay_limit = 1e-3;
};

struct RunConfig {
    std::filesystem::path problem_file;
    /// Number of grid intervals N.
    std::size_t n_points = 1024;
    double grading = 1.0;
    double tol = 1e-10;
    std::size_t max_iter = 200;
    /// "-" writes the primary CSV to stdout.
    std::string output = "-";
    /// Convergence CSV for solve mode; derived from output when empty.
    std::string convergence_output;
    Mode mode = Mode::Solve;
    Thresholds thresholds;
    /// Negative control for verify: scales y by 1.1 before checking.
    bool corrupt_trajectory = false;
    /// Cap on concurrent solves in study mode; 0 means FRACPICARD_THREADS or
    /// the hardware concurrency.
    std::size_t threads = 0;
};

std::optional<Mode> parse_mode(const std::string& text);

/// Throws std::invalid_argument when a field is out of range.
void validate_run_config(const RunConfig& config);

/// min(FRACPICARD_THREADS, hardware threads), at least 1.
std::size_t resolve_thread_count(std::size_t requested);

}  // namespace fracpicard::cli
