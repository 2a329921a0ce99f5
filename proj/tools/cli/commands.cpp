#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cli/csv.hpp"
#include "fracpicard/errors.hpp"
#include "fracpicard/picard_solver.hpp"
#include "fracpicard/problem_config.hpp"
#include "fracpicard/verification.hpp"

namespace fracpicard::cli {
namespace {

// Streams the primary CSV to `out` for "-", otherwise to a file.
int with_output(const std::string& path, std::ostream& out, std::ostream& log,
                const std::function<void(std::ostream&)>& write) {
    if (path.empty() || path == "-") {
        write(out);
        return kSuccess;
    }
    std::ofstream file(path);
    if (!file) {
        log << "error: cannot open output file '" << path << "'\n";
        return kInputError;
    }
    write(file);
    return kSuccess;
}

std::string derived_convergence_path(const RunConfig& config) {
    if (!config.convergence_output.empty()) return config.convergence_output;
    if (config.output.empty() || config.output == "-") return {};
    std::filesystem::path p(config.output);
    const auto ext = p.extension().string();
    p.replace_filename(p.stem().string() + "_convergence" + (ext.empty() ? ".csv" : ext));
    return p.string();
}

void write_trajectory(std::ostream& os, const SolutionTrajectory& sol) {
    os << "t,y";
    for (std::size_t h = 0; h < sol.derivatives.size(); ++h) os << ",z" << (h + 1);
    os << ",phi\n";
    for (std::size_t i = 0; i < sol.grid->size(); ++i) {
        os << csv_number(sol.grid->node(i)) << ',' << csv_number(sol.y.at(i));
        for (const auto& z : sol.derivatives) os << ',' << csv_number(z.at(i));
        os << ',' << (i < sol.phi.first_node() ? std::string("nan") : csv_number(sol.phi.at(i)));
        os << '\n';
    }
}

void write_convergence(std::ostream& os, const ConvergenceReport& report) {
    os << "iter,delta\n";
    for (std::size_t k = 0; k < report.deltas.size(); ++k) {
        os << (k + 1) << ',' << csv_number(report.deltas[k]) << '\n';
    }
}

void print_warnings(const ConvergenceReport& report, std::ostream& log) {
    for (const auto& w : report.warnings) log << "warning: " << w << '\n';
}

struct Loaded {
    ProblemSpec spec;
    MultiTermProblem problem;
};

// Reads and validates the problem file; diagnostics go to log.
std::optional<Loaded> load(const RunConfig& config, std::ostream& log) {
    try {
        auto spec = load_problem_config(config.problem_file);
        auto problem = make_problem(spec);
        return Loaded{std::move(spec), std::move(problem)};
    } catch (const ValidationError& e) {
        log << "error: " << e.what() << '\n';
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
    }
    return std::nullopt;
}

SolveOptions solve_options(const RunConfig& config) {
    SolveOptions options;
    options.tol = config.tol;
    options.max_iter = config.max_iter;
    return options;
}

GridPtr make_grid(const RunConfig& config, double horizon) {
    return Grid::graded(horizon, config.n_points, config.grading);
}

double sup_error(const SolutionTrajectory& sol, const RhsExpr& exact) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.grid->size(); ++i) {
        double reference = 0.0;
        try {
            reference = eval_rhs(exact, sol.grid->node(i), {});
        } catch (const EvalError&) {
            continue;
        }
        if (!std::isfinite(reference)) continue;
        worst = std::max(worst, std::abs(sol.y.at(i) - reference));
    }
    return worst;
}

struct Check {
    std::string name;
    double value;
    double threshold;
    bool informational;
};

struct OracleCase {
    const char* name;
    ProblemSpec spec;
};

std::vector<OracleCase> oracle_cases() {
    std::vector<OracleCase> cases;
    {
        ProblemSpec s;
        s.alpha = 0.5;
        s.derivative_orders = {0.0};
        s.initial_values = {1.0};
        s.horizon = 1.0;
        s.rhs = "-z1";
        s.exact = "exp(t)*erfc(sqrt(t))";
        cases.push_back({"mittag_leffler_half", s});
    }
    {
        ProblemSpec s;
        s.alpha = 1.5;
        s.derivative_orders = {0.5};
        s.initial_values = {0.0, 0.0};
        s.horizon = 1.0;
        s.rhs = "2*t^0.5/0.88622692545275801 + 0*z1";
        s.exact = "t^2";
        cases.push_back({"manufactured_t2", s});
    }
    {
        ProblemSpec s;
        s.alpha = 2.0;
        s.derivative_orders = {0.0};
        s.initial_values = {1.0, 0.0};
        s.horizon = 2.0 * std::numbers::pi;
        s.rhs = "-z1";
        s.exact = "cos(t)";
        cases.push_back({"cosine", s});
    }
    {
        ProblemSpec s;
        s.alpha = 1.0;
        s.derivative_orders = {0.0};
        s.initial_values = {1.0};
        s.horizon = 1.0;
        s.rhs = "z1";
        s.exact = "exp(t)";
        cases.push_back({"exponential", s});
    }
    {
        ProblemSpec s;
        s.alpha = 0.75;
        s.derivative_orders = {0.0};
        s.initial_values = {1.0};
        s.horizon = 1.0;
        s.gamma = 0.25;
        s.rhs = "0.72320454231603857*t^(-0.25) - (z1 - 1 - sqrt(t))";
        s.exact = "1 + sqrt(t)";
        cases.push_back({"weighted_singular_forcing", s});
    }
    return cases;
}

}  // namespace

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& log) {
    auto loaded = load(config, log);
    if (!loaded) return kInputError;
    const auto& problem = loaded->problem;

    std::optional<SolutionTrajectory> sol;
    try {
        sol = solve(problem, make_grid(config, problem.horizon()), solve_options(config));
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kInputError;
    }
    print_warnings(sol->report, log);

    if (const int rc = with_output(config.output, out, log,
                                   [&](std::ostream& os) { write_trajectory(os, *sol); });
        rc != kSuccess) {
        return rc;
    }
    const auto conv_path = derived_convergence_path(config);
    if (!conv_path.empty()) {
        std::ofstream conv(conv_path);
        if (!conv) {
            log << "error: cannot open convergence output '" << conv_path << "'\n";
            return kInputError;
        }
        write_convergence(conv, sol->report);
    }
    log << "iterations: " << sol->report.iterations_used
        << ", converged: " << (sol->report.converged ? "yes" : "no")
        << ", contraction estimate: " << sol->report.contraction_estimate << '\n';
    return sol->report.converged ? kSuccess : kNotConverged;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& log) {
    auto loaded = load(config, log);
    if (!loaded) return kInputError;
    const auto& problem = loaded->problem;
    const auto& th = config.thresholds;

    std::optional<SolutionTrajectory> sol;
    try {
        sol = solve(problem, make_grid(config, problem.horizon()), solve_options(config));
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kInputError;
    }
    print_warnings(sol->report, log);
    if (!sol->report.converged) {
        log << "error: solve did not converge; verification skipped\n";
        return kNotConverged;
    }
    if (config.corrupt_trajectory) {
        std::vector<double> scaled(sol->y.values().begin(), sol->y.values().end());
        for (double& v : scaled) v *= 1.1;
        sol->y = SampledFunction(sol->grid, std::move(scaled));
        log << "note: trajectory deliberately corrupted (y *= 1.1)\n";
    }

    std::vector<Check> checks;
    const auto residuals = check_equivalence(*sol, problem);
    checks.push_back({"ode_residual", residuals.ode_residual, th.ode_residual, false});
    checks.push_back({"volterra_residual", residuals.volterra_residual, th.volterra_residual, false});
    for (std::size_t k = 0; k < residuals.ic_errors.size(); ++k) {
        const double b = problem.initial_values()[k];
        checks.push_back({"ic_error_" + std::to_string(k), residuals.ic_errors[k],
                          th.ic_relative * (1.0 + std::abs(b)), false});
    }

    try {
        const auto decay = lemma2_decay(problem.gamma(), problem.alpha(), sol->grid);
        const double expected = problem.alpha() - problem.gamma();
        checks.push_back({"decay_slope_error", std::abs(decay.slope - expected), th.decay_slope, false});
        checks.push_back({"decay_limit", std::abs(decay.limit_value), th.decay_limit, false});
    } catch (const Error& e) {
        log << "error: decay check failed: " << e.what() << '\n';
        checks.push_back({"decay_slope_error", std::numeric_limits<double>::infinity(), th.decay_slope, false});
    }

    const auto limits = initial_limit_checks(problem, *sol);
    for (std::size_t k = 0; k < limits.integral_limits.size(); ++k) {
        checks.push_back({"integral_at_t1_order_minus_" + std::to_string(k),
                          limits.integral_limits[k], std::numeric_limits<double>::quiet_NaN(), true});
    }

    bool all_pass = true;
    const int rc = with_output(config.output, out, log, [&](std::ostream& os) {
        os << "check,value,threshold,pass\n";
        for (const auto& c : checks) {
            const bool pass = c.informational || c.value <= c.threshold;
            all_pass = all_pass && pass;
            os << c.name << ',' << csv_number(c.value) << ','
               << (c.informational ? std::string("") : csv_number(c.threshold)) << ','
               << (c.informational ? "info" : (pass ? "pass" : "fail")) << '\n';
        }
    });
    if (rc != kSuccess) return rc;

    for (const auto& c : checks) {
        if (c.informational) {
            log << c.name << " = " << c.value << '\n';
        } else {
            log << (c.value <= c.threshold ? "PASS " : "FAIL ") << c.name << " = " << c.value
                << " (threshold " << c.threshold << ")\n";
        }
    }
    log << "nodes skipped in ODE residual: " << residuals.nodes_skipped << '\n';
    return all_pass ? kSuccess : kVerificationFailed;
}

int run_study(const RunConfig& config, std::ostream& out, std::ostream& log) {
    auto loaded = load(config, log);
    if (!loaded) return kInputError;
    const auto& problem = loaded->problem;
    if (!loaded->spec.exact) {
        log << "error: study mode needs an \"exact\" solution expression in the problem file\n";
        return kInputError;
    }
    std::optional<RhsExpr> exact;
    try {
        exact = parse_rhs(*loaded->spec.exact, 0);
    } catch (const ParseError& e) {
        log << "error: exact solution: " << e.what() << '\n';
        return kInputError;
    }

    std::vector<std::size_t> sizes;
    for (std::size_t n = 16; n <= config.n_points; n *= 2) sizes.push_back(n);

    struct Row {
        double error = 0.0;
        std::size_t iterations = 0;
        bool converged = false;
        std::exception_ptr failure;
    };
    std::vector<Row> rows(sizes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < sizes.size(); i = next++) {
            try {
                const auto grid = Grid::graded(problem.horizon(), sizes[i], config.grading);
                const auto sol = solve(problem, grid, solve_options(config));
                rows[i] = {sup_error(sol, *exact), sol.report.iterations_used, sol.report.converged, nullptr};
            } catch (...) {
                rows[i].failure = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(resolve_thread_count(config.threads), sizes.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
        worker();
    }
    for (const auto& row : rows) {
        if (row.failure) {
            try {
                std::rethrow_exception(row.failure);
            } catch (const std::exception& e) {
                log << "error: " << e.what() << '\n';
            }
            return kInputError;
        }
    }

    const int rc = with_output(config.output, out, log, [&](std::ostream& os) {
        os << "N,sup_error,observed_order,iterations\n";
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            const double order =
                i == 0 ? std::numeric_limits<double>::quiet_NaN()
                       : std::log2(rows[i - 1].error / rows[i].error);
            os << sizes[i] << ',' << csv_number(rows[i].error) << ',' << csv_number(order) << ','
               << rows[i].iterations << '\n';
        }
    });
    if (rc != kSuccess) return rc;
    const bool all_converged =
        std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.converged; });
    return all_converged ? kSuccess : kNotConverged;
}

int run_oracle(const RunConfig& config, std::ostream& out, std::ostream& log) {
    struct Result {
        std::string name;
        double error;
        std::size_t iterations;
        bool converged;
    };
    std::vector<Result> results;
    for (const auto& c : oracle_cases()) {
        try {
            const auto problem = make_problem(c.spec);
            const auto exact = parse_rhs(*c.spec.exact, 0);
            const auto sol = solve(problem, make_grid(config, problem.horizon()), solve_options(config));
            results.push_back({c.name, sup_error(sol, exact), sol.report.iterations_used,
                               sol.report.converged});
        } catch (const Error& e) {
            log << "error: oracle case " << c.name << ": " << e.what() << '\n';
            return kInputError;
        }
    }
    const int rc = with_output(config.output, out, log, [&](std::ostream& os) {
        os << "case,N,sup_error,iterations,converged\n";
        for (const auto& r : results) {
            os << r.name << ',' << config.n_points << ',' << csv_number(r.error) << ','
               << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
        }
    });
    if (rc != kSuccess) return rc;
    const bool ok = std::all_of(results.begin(), results.end(), [](const Result& r) { return r.converged; });
    return ok ? kSuccess : kNotConverged;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
    try {
        validate_run_config(config);
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return kInputError;
    }
    switch (config.mode) {
        case Mode::Solve: return run_solve(config, out, log);
        case Mode::Verify: return run_verify(config, out, log);
        case Mode::Study: return run_study(config, out, log);
        case Mode::Oracle: return run_oracle(config, out, log);
    }
    return kInputError;
}

}  // namespace fracpicard::cli
