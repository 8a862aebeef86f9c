#include "condexp/commands.hpp"

#include "condexp/density.hpp"
#include "condexp/error.hpp"
#include "condexp/functional.hpp"
#include "json_io.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace condexp {

using detail::Json;

namespace {

class Stopwatch {
public:
    double elapsed_ms() const {
        const auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string members_text(const Event& e) {
    std::ostringstream out;
    out << '{';
    for (std::size_t k = 0; k < e.size(); ++k) out << (k ? "," : "") << e.members()[k];
    out << '}';
    return out.str();
}

Json header(const char* command, const ProblemFile& problem, const std::string& variable,
            const std::string& sigma) {
    Json doc = Json::object();
    doc["command"] = command;
    doc["problem"] = detail::problem_to_json(problem);
    doc["variable"] = variable;
    doc["sigma"] = sigma;
    return doc;
}

void text_header(std::ostream& out, const ProblemFile& problem, const std::string& variable,
                 const SigmaAlgebra& g, const std::string& sigma) {
    out << "space: " << problem.outcome_count() << " outcomes, variable: " << variable
        << ", sigma-algebra: " << sigma << " (" << g.atom_count() << " atoms)\n";
}

Json checks_json(const VerificationReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) {
        Json entry = Json::object();
        entry["name"] = c.name;
        entry["max_defect"] = c.max_defect;
        entry["tolerance"] = c.tolerance;
        entry["pass"] = c.pass;
        if (!c.detail.empty()) entry["detail"] = c.detail;
        checks.push_back(std::move(entry));
    }
    Json doc = Json::object();
    doc["overall_pass"] = report.overall_pass();
    doc["checks"] = std::move(checks);
    return doc;
}

void checks_text(std::ostream& out, const VerificationReport& report) {
    out << "check                                   max defect      tolerance       result\n";
    for (const auto& c : report.checks) {
        out << std::left << std::setw(40) << c.name << std::setw(16) << std::setprecision(6)
            << c.max_defect << std::setw(16) << c.tolerance << (c.pass ? "pass" : "FAIL");
        if (!c.detail.empty()) out << "  (" << c.detail << ")";
        out << '\n';
    }
    out << std::right << "overall: " << (report.overall_pass() ? "PASS" : "FAIL") << '\n';
}

Json derivative_json(const DerivativeCheckReport& report) {
    Json doc = Json::object();
    doc["directions"] = report.direction_count;
    doc["steps"] = report.step_sizes;
    Json formulas = Json::array();
    for (const auto& f : report.formulas) {
        Json entry = Json::object();
        entry["name"] = f.name;
        entry["tolerance"] = f.tolerance;
        entry["max_defect"] = f.max_defect;
        entry["defects"] = f.defects;
        entry["pass"] = f.pass;
        formulas.push_back(std::move(entry));
    }
    doc["formulas"] = std::move(formulas);
    doc["pass"] = report.pass();
    return doc;
}

void derivative_text(std::ostream& out, const DerivativeCheckReport& report) {
    out << "defect per step size (" << report.direction_count << " directions)\n";
    out << std::left << std::setw(22) << "formula";
    for (double t : report.step_sizes) out << std::setw(12) << t;
    out << std::setw(12) << "tolerance" << "result\n";
    for (const auto& f : report.formulas) {
        out << std::setw(22) << f.name << std::setprecision(3);
        for (double d : f.defects) out << std::setw(12) << d;
        out << std::setw(12) << f.tolerance << (f.pass ? "pass" : "FAIL") << '\n';
    }
    out << std::right;
}

VerificationReport derivative_checks_as_report(const DerivativeCheckReport& report) {
    VerificationReport out;
    for (const auto& f : report.formulas)
        out.add(Check{"derivative." + f.name, f.max_defect, f.tolerance, f.pass, {}});
    return out;
}

Json trace_json(const ApproximationTrace& trace, const char* parameter_name) {
    Json doc = Json::object();
    doc["levels"] = trace.levels;
    doc[parameter_name] = trace.parameter;
    doc["errors_l2"] = trace.errors_l2;
    doc["errors_l1"] = trace.errors_l1;
    doc["bound"] = trace.bound;
    doc["within_bound"] = trace.within_bound;
    doc["monotone"] = trace.monotone;
    return doc;
}

void trace_text(std::ostream& out, const ApproximationTrace& trace, const char* parameter_name,
                const char* bound_name) {
    out << std::left << std::setw(6) << "level" << std::setw(16) << parameter_name
        << std::setw(16) << "L2 error" << std::setw(16) << "L1 error" << bound_name << '\n';
    out << std::setprecision(8);
    for (std::size_t k = 0; k < trace.levels; ++k) {
        out << std::setw(6) << k + 1 << std::setw(16) << trace.parameter[k] << std::setw(16)
            << trace.errors_l2[k] << std::setw(16) << trace.errors_l1[k] << trace.bound[k]
            << '\n';
    }
    out << std::right << "within bound: " << (trace.within_bound ? "yes" : "NO")
        << ", monotone: " << (trace.monotone ? "yes" : "no") << '\n';
}

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

RunReport run_solve(const ProblemFile& problem, const SolveOptions& options) {
    const Stopwatch clock;
    const ProbabilitySpace space = problem.space();
    const RandomVariable x = problem.variable(options.variable);
    const SigmaAlgebra g = problem.sigma(options.sigma);

    RunReport report;
    report.command = "solve";
    Json doc = header("solve", problem, options.variable, options.sigma);
    doc["method"] = to_string(options.method);

    CondExpResult result;
    bool converged = true;
    std::vector<double> energy_trace;
    switch (options.method) {
    case Method::Oracle:
        result = solve_oracle(space, g, x);
        break;
    case Method::Projection: {
        std::vector<RandomVariable> basis;
        for (const auto& name : options.basis) basis.push_back(problem.variable(name));
        result = solve_projection(space, g, x, basis);
        doc["basis"] = options.basis;
        break;
    }
    case Method::Gradient: {
        GradientOutcome outcome = solve_gradient(space, g, x, options.gradient);
        Json config = Json::object();
        config["step_policy"] = to_string(options.gradient.step_policy);
        if (options.gradient.step_policy == StepPolicy::Fixed) config["eta"] = outcome.step_size;
        config["tolerance"] = options.gradient.tolerance;
        config["max_iterations"] = options.gradient.max_iterations;
        config["initial_point"] = to_string(options.gradient.initial_point);
        doc["gradient"] = std::move(config);
        converged = outcome.converged;
        energy_trace = std::move(outcome.energy_trace);
        result = std::move(outcome.result);
        break;
    }
    }

    const std::vector<double> probs = atom_probabilities(space, g);
    Json atoms = Json::array();
    for (std::size_t j = 0; j < g.atom_count(); ++j) {
        Json atom = Json::object();
        atom["index"] = j;
        atom["members"] = std::vector<std::size_t>(g.atom(j).members().begin(),
                                                   g.atom(j).members().end());
        atom["probability"] = probs[j];
        atom["value"] = result.atom_values[j];
        atoms.push_back(std::move(atom));
    }
    Json res = Json::object();
    res["converged"] = converged;
    res["iterations"] = result.iterations;
    res["final_gradient_norm"] = result.final_gradient_norm;
    res["null_atoms"] = result.null_atoms;
    res["atoms"] = std::move(atoms);
    res["xi"] = std::vector<double>(result.xi.values().begin(), result.xi.values().end());
    doc["result"] = std::move(res);
    if (options.method == Method::Gradient) doc["energy_trace"] = energy_trace;

    std::ostringstream text;
    text_header(text, problem, options.variable, g, options.sigma);
    text << "method: " << to_string(options.method) << '\n';
    text << "atom  P(atom)           xi                    members\n";
    for (std::size_t j = 0; j < g.atom_count(); ++j) {
        text << std::left << std::setw(6) << j << std::setw(18) << std::setprecision(10)
             << probs[j] << std::setw(22) << std::setprecision(15) << result.atom_values[j]
             << members_text(g.atom(j)) << std::right << '\n';
    }
    if (!result.null_atoms.empty())
        text << "null atoms carry the value 0 by convention: " << result.null_atoms.size()
             << '\n';
    if (options.method == Method::Gradient) {
        text << "iterations: " << result.iterations << ", final gradient norm: "
             << std::setprecision(6) << result.final_gradient_norm
             << (converged ? "" : "  (NOT CONVERGED)") << '\n';
    }
    if (!converged) report.status = RunStatus::NotConverged;

    if (options.verify) {
        VerificationReport checks =
            verify_defining_property(space, g, x, result.xi, {1e-12, 32, options.seed});
        checks.append(verify_product_identity(space, g, x, result.xi, 100, options.seed));
        checks.append(verify_dirichlet(space, g, x, result.xi, {100, options.seed}));
        const EnergyProblem energy(space, x, g);
        const auto steps = default_step_sizes();
        checks.append(
            derivative_checks_as_report(check_derivatives(energy, 20, steps, options.seed)));
        doc["verification"] = checks_json(checks);
        text << '\n';
        checks_text(text, checks);
        if (!checks.overall_pass() && report.status == RunStatus::Ok)
            report.status = RunStatus::VerificationFailed;
    }

    text << "elapsed: " << std::setprecision(4) << clock.elapsed_ms() << " ms\n";
    report.json = render(doc);
    report.text = text.str();
    return report;
}

RunReport run_verify(const ProblemFile& problem, const VerifyOptions& options) {
    const Stopwatch clock;
    const ProbabilitySpace space = problem.space();
    const RandomVariable x = problem.variable(options.variable);
    const SigmaAlgebra g = problem.sigma(options.sigma);
    std::optional<SigmaAlgebra> coarse;
    if (!options.coarse.empty()) coarse = problem.sigma(options.coarse);

    const RandomVariable xi =
        options.claimed.empty() ? solve_oracle(space, g, x).xi : problem.variable(options.claimed);

    Json doc = header("verify", problem, options.variable, options.sigma);
    doc["seed"] = options.seed;
    doc["samples"] = options.samples;
    doc["claimed"] = options.claimed.empty() ? Json(nullptr) : Json(options.claimed);
    doc["coarse"] = options.coarse.empty() ? Json(nullptr) : Json(options.coarse);
    doc["xi"] = std::vector<double>(xi.values().begin(), xi.values().end());

    VerificationReport checks;
    if (!is_measurable(space, g, xi)) {
        checks.add(Check{"measurability", 1.0, 0.0, false,
                         "claimed solution is not constant on the atoms of " + options.sigma});
    } else {
        DefiningPropertyOptions defining{1e-12, options.samples, options.seed};
        double product_tol = 1e-10;
        DirichletOptions dirichlet{options.samples, options.seed};
        double tower_tol = 1e-11;
        if (options.tolerance) {
            defining.tolerance = product_tol = dirichlet.relative_tolerance = tower_tol =
                *options.tolerance;
        }
        checks = verify_defining_property(space, g, x, xi, defining);
        checks.append(verify_product_identity(space, g, x, xi, options.samples, options.seed,
                                              product_tol));
        if (options.samples > 0) checks.append(verify_dirichlet(space, g, x, xi, dirichlet));
        if (coarse) checks.append(tower_check(space, *coarse, g, x, tower_tol));
    }
    doc["verification"] = checks_json(checks);

    std::ostringstream text;
    text_header(text, problem, options.variable, g, options.sigma);
    text << "claimed solution: " << (options.claimed.empty() ? "oracle" : options.claimed)
         << '\n';
    checks_text(text, checks);
    text << "elapsed: " << std::setprecision(4) << clock.elapsed_ms() << " ms\n";

    RunReport report;
    report.command = "verify";
    report.status = checks.overall_pass() ? RunStatus::Ok : RunStatus::VerificationFailed;
    report.json = render(doc);
    report.text = text.str();
    return report;
}

RunReport run_check_derivatives(const ProblemFile& problem, const DerivativeOptions& options) {
    const Stopwatch clock;
    const EnergyProblem energy(problem.space(), problem.variable(options.variable),
                               problem.sigma(options.sigma));
    const std::vector<double> steps =
        options.steps.empty() ? default_step_sizes() : options.steps;
    DerivativeCheckReport checked =
        check_derivatives(energy, options.directions, steps, options.seed);
    if (options.tolerance) {
        for (auto& f : checked.formulas) {
            f.tolerance = *options.tolerance;
            f.pass = f.max_defect <= f.tolerance;
        }
    }

    Json doc = header("check-derivatives", problem, options.variable, options.sigma);
    doc["seed"] = options.seed;
    doc["derivatives"] = derivative_json(checked);

    std::ostringstream text;
    text_header(text, problem, options.variable, energy.g(), options.sigma);
    derivative_text(text, checked);
    text << "overall: " << (checked.pass() ? "PASS" : "FAIL") << '\n';
    text << "elapsed: " << std::setprecision(4) << clock.elapsed_ms() << " ms\n";

    RunReport report;
    report.command = "check-derivatives";
    report.status = checked.pass() ? RunStatus::Ok : RunStatus::VerificationFailed;
    report.json = render(doc);
    report.text = text.str();
    return report;
}

RunReport run_density(const ProblemFile& problem, const DensityOptions& options) {
    const Stopwatch clock;
    const ProbabilitySpace space = problem.space();
    const RandomVariable x = problem.variable(options.variable);
    const SigmaAlgebra g = problem.sigma(options.sigma);

    std::vector<double> schedule = options.schedule;
    if (schedule.empty()) {
        double top = 0.0;
        for (double v : x.values()) top = std::max(top, std::abs(v));
        for (double n = 1.0;; n *= 10.0) {
            schedule.push_back(n);
            if (n >= top) break;
        }
    }

    // The staircase lives in L2(G), so it approximates the G-measurable
    // E(X|G); for G-measurable X that is X itself.
    const RandomVariable target = solve_oracle(space, g, x).xi;
    const ApproximationTrace stairs = approximation_trace(space, g, target, options.k_max);
    const ApproximationTrace extension = l1_extension_trace(space, g, x, schedule);
    const bool pass = stairs.within_bound && extension.within_bound;

    Json doc = header("density", problem, options.variable, options.sigma);
    doc["staircase"] = trace_json(stairs, "step_width");
    doc["l1_extension"] = trace_json(extension, "truncation_level");
    doc["pass"] = pass;

    std::ostringstream text;
    text_header(text, problem, options.variable, g, options.sigma);
    text << "staircase approximation of E(X|G)\n";
    trace_text(text, stairs, "step width", "envelope");
    text << "\nL1 extension by truncation\n";
    trace_text(text, extension, "n", "||X_n - X||_1");
    text << "overall: " << (pass ? "PASS" : "FAIL") << '\n';
    text << "elapsed: " << std::setprecision(4) << clock.elapsed_ms() << " ms\n";

    RunReport report;
    report.command = "density";
    report.status = pass ? RunStatus::Ok : RunStatus::VerificationFailed;
    report.json = render(doc);
    report.text = text.str();
    return report;
}

}  // namespace condexp
