#include "condexp/condexp.h"

#include "condexp/commands.hpp"
#include "condexp/error.hpp"
#include "condexp/problem_file.hpp"
#include "condexp/solvers.hpp"

#include <algorithm>
#include <fstream>
#include <new>
#include <string>

struct cx_problem {
    condexp::ProblemFile file;
};

struct cx_report {
    condexp::RunReport report;
};

namespace {

thread_local std::string last_error;

cx_status to_status(condexp::ErrorCode code) {
    using condexp::ErrorCode;
    switch (code) {
    case ErrorCode::Parse: return CX_ERR_PARSE;
    case ErrorCode::UnknownName: return CX_ERR_UNKNOWN_NAME;
    case ErrorCode::NotMeasurable: return CX_ERR_NOT_MEASURABLE;
    case ErrorCode::DegenerateBasis: return CX_ERR_DEGENERATE;
    default: return CX_ERR_INVALID_ARGUMENT;
    }
}

cx_status fail(cx_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <typename Fn>
cx_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const condexp::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(CX_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CX_ERR_INTERNAL, e.what());
    }
}

std::string name_or(const char* name, const char* fallback) {
    return name ? std::string(name) : std::string(fallback);
}

cx_status deliver(condexp::RunReport report, cx_report** out) {
    const auto status = report.status;
    *out = new cx_report{std::move(report)};
    switch (status) {
    case condexp::RunStatus::Ok: return CX_OK;
    case condexp::RunStatus::NotConverged:
        last_error = "gradient descent did not converge";
        return CX_ERR_NOT_CONVERGED;
    case condexp::RunStatus::VerificationFailed:
        last_error = "verification failed";
        return CX_ERR_VERIFICATION_FAILED;
    }
    return CX_ERR_INTERNAL;
}

condexp::Method to_method(cx_method m) {
    switch (m) {
    case CX_METHOD_ORACLE: return condexp::Method::Oracle;
    case CX_METHOD_PROJECTION: return condexp::Method::Projection;
    case CX_METHOD_GRADIENT: return condexp::Method::Gradient;
    }
    throw condexp::Error(condexp::ErrorCode::InvalidArgument, "unknown method");
}

}  // namespace

extern "C" {

const char* cx_version(void) { return "1.0.0"; }

const char* cx_status_string(cx_status status) {
    switch (status) {
    case CX_OK: return "ok";
    case CX_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CX_ERR_PARSE: return "parse error";
    case CX_ERR_UNKNOWN_NAME: return "unknown name";
    case CX_ERR_NOT_MEASURABLE: return "not measurable";
    case CX_ERR_DEGENERATE: return "degenerate basis";
    case CX_ERR_NOT_CONVERGED: return "not converged";
    case CX_ERR_VERIFICATION_FAILED: return "verification failed";
    case CX_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* cx_last_error(void) { return last_error.c_str(); }

void cx_solve_options_init(cx_solve_options* options) {
    if (!options) return;
    const condexp::GradientConfig defaults;
    *options = cx_solve_options{};
    options->variable = "X";
    options->sigma = "G";
    options->method = CX_METHOD_ORACLE;
    options->step_policy = CX_STEP_JACOBI;
    options->eta = 0.0;
    options->tolerance = defaults.tolerance;
    options->max_iterations = defaults.max_iterations;
    options->initial_point = CX_INIT_ZERO;
}

void cx_verify_options_init(cx_verify_options* options) {
    if (!options) return;
    *options = cx_verify_options{};
    options->variable = "X";
    options->sigma = "G";
    options->samples = 100;
}

void cx_derivative_options_init(cx_derivative_options* options) {
    if (!options) return;
    *options = cx_derivative_options{};
    options->variable = "X";
    options->sigma = "G";
    options->directions = 20;
}

void cx_density_options_init(cx_density_options* options) {
    if (!options) return;
    *options = cx_density_options{};
    options->variable = "X";
    options->sigma = "G";
    options->k_max = 10;
}

cx_status cx_problem_load(const char* path, cx_problem** out) {
    if (!path || !out) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new cx_problem{condexp::ProblemFile::load(path)};
        return CX_OK;
    });
}

cx_status cx_problem_parse(const char* text, size_t length, cx_problem** out) {
    if (!text || !out) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new cx_problem{condexp::ProblemFile::parse(std::string_view(text, length))};
        return CX_OK;
    });
}

cx_status cx_problem_create(const double* weights, size_t count, cx_problem** out) {
    if ((!weights && count) || !out) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        condexp::ProblemFile file;
        file.probabilities.assign(weights, weights + count);
        file.validate();
        *out = new cx_problem{std::move(file)};
        return CX_OK;
    });
}

cx_status cx_problem_add_variable(cx_problem* problem, const char* name, const double* values,
                                  size_t count) {
    if (!problem || !name || (!values && count))
        return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        problem->file.add_variable(name, std::vector<double>(values, values + count));
        return CX_OK;
    });
}

cx_status cx_problem_add_sigma_labels(cx_problem* problem, const char* name,
                                      const size_t* atom_labels, size_t count) {
    if (!problem || !name || (!atom_labels && count))
        return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        if (count != problem->file.outcome_count())
            return fail(CX_ERR_INVALID_ARGUMENT, "one atom label per outcome required");
        const auto g = condexp::SigmaAlgebra::from_labels({atom_labels, count});
        condexp::SigmaSpec spec;
        for (const auto& atom : g.atoms())
            spec.sets.emplace_back(atom.members().begin(), atom.members().end());
        problem->file.add_sigma(name, std::move(spec));
        return CX_OK;
    });
}

cx_status cx_problem_add_sigma_generators(cx_problem* problem, const char* name,
                                          const size_t* indices, const size_t* offsets,
                                          size_t generator_count) {
    if (!problem || !name || !offsets) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        condexp::SigmaSpec spec;
        spec.kind = condexp::SigmaSpec::Kind::Generators;
        for (size_t k = 0; k < generator_count; ++k) {
            if (offsets[k + 1] < offsets[k] || (!indices && offsets[k + 1] > offsets[k]))
                return fail(CX_ERR_INVALID_ARGUMENT, "malformed generator offsets");
            spec.sets.emplace_back(indices + offsets[k], indices + offsets[k + 1]);
        }
        problem->file.add_sigma(name, std::move(spec));
        return CX_OK;
    });
}

size_t cx_problem_outcome_count(const cx_problem* problem) {
    return problem ? problem->file.outcome_count() : 0;
}

size_t cx_problem_atom_count(const cx_problem* problem, const char* sigma) {
    if (!problem || !sigma) return 0;
    try {
        return problem->file.sigma(sigma).atom_count();
    } catch (const std::exception& e) {
        last_error = e.what();
        return 0;
    }
}

cx_status cx_problem_save(const cx_problem* problem, const char* path) {
    if (!problem || !path) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        problem->file.save(path);
        return CX_OK;
    });
}

void cx_problem_free(cx_problem* problem) { delete problem; }

cx_status cx_conditional_expectation(const cx_problem* problem, const char* variable,
                                     const char* sigma, cx_method method, double* xi,
                                     size_t count) {
    if (!problem || !variable || !sigma || !xi)
        return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto& file = problem->file;
        if (count != file.outcome_count())
            return fail(CX_ERR_INVALID_ARGUMENT, "output buffer must hold one value per outcome");
        const auto space = file.space();
        const auto x = file.variable(variable);
        const auto g = file.sigma(sigma);
        condexp::CondExpResult result;
        switch (to_method(method)) {
        case condexp::Method::Oracle: result = condexp::solve_oracle(space, g, x); break;
        case condexp::Method::Projection: result = condexp::solve_projection(space, g, x); break;
        case condexp::Method::Gradient: {
            auto outcome = condexp::solve_gradient(space, g, x);
            if (!outcome.converged)
                return fail(CX_ERR_NOT_CONVERGED, "gradient descent did not converge");
            result = std::move(outcome.result);
            break;
        }
        }
        std::copy(result.xi.values().begin(), result.xi.values().end(), xi);
        return CX_OK;
    });
}

cx_status cx_solve(const cx_problem* problem, const cx_solve_options* options, cx_report** out) {
    if (!problem || !out) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    cx_solve_options defaults;
    cx_solve_options_init(&defaults);
    const cx_solve_options& o = options ? *options : defaults;
    return guarded([&] {
        condexp::SolveOptions opts;
        opts.variable = name_or(o.variable, "X");
        opts.sigma = name_or(o.sigma, "G");
        opts.method = to_method(o.method);
        opts.gradient.step_policy = o.step_policy == CX_STEP_FIXED
                                        ? condexp::StepPolicy::Fixed
                                        : condexp::StepPolicy::JacobiPreconditioned;
        if (o.eta > 0.0) opts.gradient.eta = o.eta;
        opts.gradient.tolerance = o.tolerance;
        opts.gradient.max_iterations = o.max_iterations;
        opts.gradient.initial_point = o.initial_point == CX_INIT_MEAN
                                          ? condexp::InitialPoint::UnconditionalMean
                                          : condexp::InitialPoint::Zero;
        for (size_t k = 0; k < o.basis_count; ++k) {
            if (!o.basis || !o.basis[k])
                return fail(CX_ERR_INVALID_ARGUMENT, "null basis name");
            opts.basis.emplace_back(o.basis[k]);
        }
        opts.verify = o.verify != 0;
        opts.seed = o.seed;
        return deliver(condexp::run_solve(problem->file, opts), out);
    });
}

cx_status cx_verify(const cx_problem* problem, const cx_verify_options* options,
                    cx_report** out) {
    if (!problem || !out) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    cx_verify_options defaults;
    cx_verify_options_init(&defaults);
    const cx_verify_options& o = options ? *options : defaults;
    return guarded([&] {
        condexp::VerifyOptions opts;
        opts.variable = name_or(o.variable, "X");
        opts.sigma = name_or(o.sigma, "G");
        opts.seed = o.seed;
        opts.samples = o.samples;
        if (o.tolerance > 0.0) opts.tolerance = o.tolerance;
        opts.claimed = name_or(o.claimed, "");
        opts.coarse = name_or(o.coarse, "");
        return deliver(condexp::run_verify(problem->file, opts), out);
    });
}

cx_status cx_check_derivatives(const cx_problem* problem, const cx_derivative_options* options,
                               cx_report** out) {
    if (!problem || !out) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    cx_derivative_options defaults;
    cx_derivative_options_init(&defaults);
    const cx_derivative_options& o = options ? *options : defaults;
    return guarded([&] {
        condexp::DerivativeOptions opts;
        opts.variable = name_or(o.variable, "X");
        opts.sigma = name_or(o.sigma, "G");
        opts.seed = o.seed;
        opts.directions = o.directions;
        if (o.steps) opts.steps.assign(o.steps, o.steps + o.step_count);
        if (o.tolerance > 0.0) opts.tolerance = o.tolerance;
        return deliver(condexp::run_check_derivatives(problem->file, opts), out);
    });
}

cx_status cx_density(const cx_problem* problem, const cx_density_options* options,
                     cx_report** out) {
    if (!problem || !out) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    cx_density_options defaults;
    cx_density_options_init(&defaults);
    const cx_density_options& o = options ? *options : defaults;
    return guarded([&] {
        condexp::DensityOptions opts;
        opts.variable = name_or(o.variable, "X");
        opts.sigma = name_or(o.sigma, "G");
        opts.k_max = o.k_max;
        if (o.schedule) opts.schedule.assign(o.schedule, o.schedule + o.schedule_count);
        return deliver(condexp::run_density(problem->file, opts), out);
    });
}

cx_status cx_report_status(const cx_report* report) {
    if (!report) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    switch (report->report.status) {
    case condexp::RunStatus::Ok: return CX_OK;
    case condexp::RunStatus::NotConverged: return CX_ERR_NOT_CONVERGED;
    case condexp::RunStatus::VerificationFailed: return CX_ERR_VERIFICATION_FAILED;
    }
    return CX_ERR_INTERNAL;
}

const char* cx_report_json(const cx_report* report) {
    return report ? report->report.json.c_str() : "";
}

const char* cx_report_text(const cx_report* report) {
    return report ? report->report.text.c_str() : "";
}

cx_status cx_report_save(const cx_report* report, const char* path) {
    if (!report || !path) return fail(CX_ERR_INVALID_ARGUMENT, "null argument");
    std::ofstream out(path, std::ios::binary);
    if (!out) return fail(CX_ERR_INVALID_ARGUMENT, std::string("cannot write ") + path);
    out << report->report.json;
    return out ? CX_OK : fail(CX_ERR_INTERNAL, std::string("write failed: ") + path);
}

void cx_report_free(cx_report* report) { delete report; }

}  // extern "C"
