#include "cli/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace fracpicard::cli {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::optional<Mode> parse_mode(const std::string& text) {
    if (text == "solve") return Mode::Solve;
    if (text == "verify") return Mode::Verify;
    if (text == "study") return Mode::Study;
    if (text == "oracle") return Mode::Oracle;
    return std::nullopt;
}

void validate_run_config(const RunConfig& config) {
    if (config.n_points < 16) {
        throw std::invalid_argument("n-points must be at least 16");
    }
    if (!(config.grading >= 1.0) || !std::isfinite(config.grading)) {
        throw std::invalid_argument("grading must be >= 1");
    }
    if (!(config.tol > 0.0)) {
        throw std::invalid_argument("tol must be positive");
    }
    if (config.max_iter < 1) {
        throw std::invalid_argument("max-iter must be at least 1");
    }
    if (config.mode == Mode::Study && !is_power_of_two(config.n_points)) {
        throw std::invalid_argument("study mode needs n-points to be a power of two");
    }
    if (config.mode != Mode::Oracle && config.problem_file.empty()) {
        throw std::invalid_argument("a problem file (--config) is required");
    }
}

std::size_t resolve_thread_count(std::size_t requested) {
    std::size_t cap = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FRACPICARD_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && value > 0) cap = std::min<std::size_t>(cap, static_cast<std::size_t>(value));
    }
    if (requested > 0) cap = std::min(cap, requested);
    return std::max<std::size_t>(1, cap);
}

}  // namespace fracpicard::cli
