#pragma once

#include <iosfwd>

#include "cli/run_config.hpp"

namespace fracpicard::cli {

/// Trajectory CSV (t, y, z1..zm, phi) to config.output and convergence CSV
/// (iter, delta) next to it. Returns 0 converged, 2 not converged, 1 bad input.
int run_solve(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Solve, then residual, initial-condition and decay checks. CSV rows are
/// (check, value, threshold, pass). Returns 0 when every check passes, 3 when
/// a threshold is exceeded, 2 when the solve did not converge, 1 on bad input.
int run_verify(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Dyadic refinement N = 16, 32, ..., n_points against the problem's "exact"
/// expression. CSV (N, sup_error, observed_order, iterations).
int run_study(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Built-in oracle problems at n_points. CSV (case, N, sup_error, iterations, converged).
int run_oracle(const RunConfig& config, std::ostream& out, std::ostream& log);

int run(const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace fracpicard::cli
