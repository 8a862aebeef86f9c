// condexp: command-line front end over the C API.
//
// Exit codes: 0 success/pass, 2 usage or input error, 3 solver
// non-convergence or verification failure.

#include "condexp/condexp.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFailed = 3;

struct ProblemDeleter {
    void operator()(cx_problem* p) const { cx_problem_free(p); }
};
struct ReportDeleter {
    void operator()(cx_report* r) const { cx_report_free(r); }
};
using ProblemHandle = std::unique_ptr<cx_problem, ProblemDeleter>;
using ReportHandle = std::unique_ptr<cx_report, ReportDeleter>;

struct GlobalFlags {
    std::string space;
    std::string var = "X";
    std::string sigma = "G";
    std::uint64_t seed = 0;
    std::string out;
    double tol = 0.0;
};

int input_error(const std::string& context) {
    std::cerr << "condexp: " << context << ": " << cx_last_error() << '\n';
    return kExitUsage;
}

// Prints the report, writes --out, and maps the status onto an exit code.
int finish(cx_status status, cx_report* raw, const GlobalFlags& flags) {
    ReportHandle report(raw);
    if (!report) return input_error("error");
    // With --out - stdout carries only the JSON; the table moves to stderr.
    (flags.out == "-" ? std::cerr : std::cout) << cx_report_text(report.get());
    if (!flags.out.empty()) {
        if (flags.out == "-") {
            std::cout << cx_report_json(report.get());
        } else if (cx_report_save(report.get(), flags.out.c_str()) != CX_OK) {
            return input_error("writing report");
        }
    }
    switch (status) {
    case CX_OK: return kExitOk;
    case CX_ERR_NOT_CONVERGED:
    case CX_ERR_VERIFICATION_FAILED:
        std::cerr << "condexp: " << cx_status_string(status) << '\n';
        return kExitFailed;
    default: return kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional expectation on finite probability spaces"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    app.add_option("--space", flags.space, "Problem file (JSON)")->required();
    app.add_option("--var", flags.var, "Random variable name")->capture_default_str();
    app.add_option("--sigma", flags.sigma, "Sigma-algebra name")->capture_default_str();
    app.add_option("--seed", flags.seed, "Seed for sampled checks")->capture_default_str();
    app.add_option("--out", flags.out, "Write the machine-readable report here ('-' for stdout)");
    app.add_option("--tol", flags.tol,
                   "solve: gradient tolerance; verify/check-derivatives: every check tolerance")
        ->check(CLI::PositiveNumber);

    auto* solve = app.add_subcommand("solve", "Compute E(X|G)");
    std::string method = "oracle";
    std::string step_policy = "jacobi";
    std::string init = "zero";
    double eta = 0.0;
    std::size_t max_iter = 10000;
    std::vector<std::string> basis;
    bool verify_after = false;
    solve->add_option("--method", method, "oracle | projection | gradient")
        ->check(CLI::IsMember({"oracle", "projection", "gradient"}))
        ->capture_default_str();
    solve->add_option("--step-policy", step_policy, "jacobi | fixed")
        ->check(CLI::IsMember({"jacobi", "fixed"}))
        ->capture_default_str();
    solve->add_option("--eta", eta, "Fixed step size (default 1/max P(atom))")
        ->check(CLI::PositiveNumber);
    solve->add_option("--max-iter", max_iter, "Gradient iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solve->add_option("--init", init, "zero | mean")
        ->check(CLI::IsMember({"zero", "mean"}))
        ->capture_default_str();
    solve->add_option("--basis", basis, "Variables spanning the projection subspace")
        ->delimiter(',');
    solve->add_flag("--verify", verify_after, "Run the verification suite on the result");

    auto* verify = app.add_subcommand("verify", "Check the defining identities of E(X|G)");
    std::size_t samples = 100;
    std::string claimed;
    std::string coarse;
    verify->add_option("--samples", samples, "Random events/directions per check")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    verify->add_option("--claimed", claimed, "Variable holding a claimed E(X|G)");
    verify->add_option("--coarse", coarse, "Coarser sigma-algebra for the tower check");

    auto* derivs = app.add_subcommand("check-derivatives",
                                      "Compare difference quotients with the closed-form "
                                      "Gateaux derivatives of T and J");
    std::size_t directions = 20;
    std::vector<double> steps;
    derivs->add_option("--directions", directions, "Random direction triples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    derivs->add_option("--steps", steps, "Step sizes, strictly decreasing")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);

    auto* density = app.add_subcommand("density", "Staircase and truncation traces");
    std::size_t k_max = 10;
    std::vector<double> schedule;
    density->add_option("--k-max", k_max, "Finest staircase level")
        ->check(CLI::Range(1, 62))
        ->capture_default_str();
    density->add_option("--schedule", schedule, "Increasing truncation levels")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    cx_problem* raw_problem = nullptr;
    if (cx_problem_load(flags.space.c_str(), &raw_problem) != CX_OK)
        return input_error(flags.space);
    ProblemHandle problem(raw_problem);

    cx_report* report = nullptr;
    cx_status status = CX_OK;
    if (*solve) {
        cx_solve_options o;
        cx_solve_options_init(&o);
        o.variable = flags.var.c_str();
        o.sigma = flags.sigma.c_str();
        o.method = method == "projection" ? CX_METHOD_PROJECTION
                   : method == "gradient" ? CX_METHOD_GRADIENT
                                          : CX_METHOD_ORACLE;
        o.step_policy = step_policy == "fixed" ? CX_STEP_FIXED : CX_STEP_JACOBI;
        o.eta = eta;
        if (flags.tol > 0.0) o.tolerance = flags.tol;
        o.max_iterations = max_iter;
        o.initial_point = init == "mean" ? CX_INIT_MEAN : CX_INIT_ZERO;
        std::vector<const char*> names;
        for (const auto& b : basis) names.push_back(b.c_str());
        o.basis = names.empty() ? nullptr : names.data();
        o.basis_count = names.size();
        o.verify = verify_after ? 1 : 0;
        o.seed = flags.seed;
        status = cx_solve(problem.get(), &o, &report);
    } else if (*verify) {
        cx_verify_options o;
        cx_verify_options_init(&o);
        o.variable = flags.var.c_str();
        o.sigma = flags.sigma.c_str();
        o.seed = flags.seed;
        o.samples = samples;
        o.tolerance = flags.tol;
        o.claimed = claimed.empty() ? nullptr : claimed.c_str();
        o.coarse = coarse.empty() ? nullptr : coarse.c_str();
        status = cx_verify(problem.get(), &o, &report);
    } else if (*derivs) {
        cx_derivative_options o;
        cx_derivative_options_init(&o);
        o.variable = flags.var.c_str();
        o.sigma = flags.sigma.c_str();
        o.seed = flags.seed;
        o.directions = directions;
        o.steps = steps.empty() ? nullptr : steps.data();
        o.step_count = steps.size();
        o.tolerance = flags.tol;
        status = cx_check_derivatives(problem.get(), &o, &report);
    } else {
        cx_density_options o;
        cx_density_options_init(&o);
        o.variable = flags.var.c_str();
        o.sigma = flags.sigma.c_str();
        o.k_max = k_max;
        o.schedule = schedule.empty() ? nullptr : schedule.data();
        o.schedule_count = schedule.size();
        status = cx_density(problem.get(), &o, &report);
    }

    if (!report) return input_error(app.get_subcommands().front()->get_name());
    return finish(status, report, flags);
}
