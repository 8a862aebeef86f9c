#include "condexp/functional.hpp"

#include "condexp/error.hpp"
#include "condexp/sampling.hpp"
#include "double_double.hpp"

#include <algorithm>
#include <cmath>

namespace condexp {

using detail::DoubleDouble;

EnergyProblem::EnergyProblem(ProbabilitySpace space, RandomVariable x, SigmaAlgebra g)
    : space_(std::move(space)), x_(std::move(x)), g_(std::move(g)) {
    require_member(space_, x_);
    require_compatible(space_, g_);
}

double t_apply(const EnergyProblem& problem, const RandomVariable& y) {
    return inner_product(problem.space(), problem.x(), y);
}

double half_squared_norm(const EnergyProblem& problem, const RandomVariable& y) {
    return 0.5 * inner_product(problem.space(), y, y);
}

double j_eval(const EnergyProblem& problem, const RandomVariable& y) {
    return half_squared_norm(problem, y) - t_apply(problem, y);
}

double j_gateaux(const EnergyProblem& problem, const RandomVariable& z,
                 const RandomVariable& y) {
    return inner_product(problem.space(), z, y) - t_apply(problem, y);
}

double j_second(const EnergyProblem& problem, const RandomVariable& y,
                const RandomVariable& w) {
    return inner_product(problem.space(), y, w);
}

const char* to_string(FunctionalId id) noexcept {
    switch (id) {
    case FunctionalId::T: return "T";
    case FunctionalId::HalfSquaredNorm: return "half_squared_norm";
    case FunctionalId::J: return "J";
    }
    return "?";
}

namespace {

void require_nonzero_step(double t) {
    if (t == 0.0 || !std::isfinite(t))
        throw Error(ErrorCode::InvalidArgument, "difference quotient needs a finite t != 0");
}

// Functional value at u + t v, evaluated in double-double. The products
// t * v_i are exact, so the perturbed point itself carries no rounding.
DoubleDouble evaluate_shifted(const EnergyProblem& problem, FunctionalId functional,
                              const RandomVariable& u, const RandomVariable& v, double t) {
    const auto& space = problem.space();
    const auto& x = problem.x();
    DoubleDouble total;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double p = space.weight(i);
        if (p == 0.0) continue;
        const DoubleDouble point = DoubleDouble(u[i]) + detail::two_prod(t, v[i]);
        DoubleDouble term;
        switch (functional) {
        case FunctionalId::T: term = point * x[i]; break;
        case FunctionalId::HalfSquaredNorm: term = point * point * 0.5; break;
        case FunctionalId::J: term = point * point * 0.5 - point * x[i]; break;
        }
        total = total + term * p;
    }
    return total;
}

// J'_{u + t v}(w) = <u + t v, w> - T(w) in double-double.
DoubleDouble gateaux_shifted(const EnergyProblem& problem, const RandomVariable& u,
                             const RandomVariable& v, const RandomVariable& w, double t) {
    const auto& space = problem.space();
    const auto& x = problem.x();
    DoubleDouble total;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double p = space.weight(i);
        if (p == 0.0) continue;
        const DoubleDouble point = DoubleDouble(u[i]) + detail::two_prod(t, v[i]);
        total = total + (point * w[i] - detail::two_prod(x[i], w[i])) * p;
    }
    return total;
}

void require_members(const EnergyProblem& problem,
                     std::initializer_list<const RandomVariable*> vars) {
    for (const auto* v : vars) require_member(problem.space(), *v);
}

}  // namespace

double directional_quotient(const EnergyProblem& problem, FunctionalId functional,
                            const RandomVariable& u, const RandomVariable& v, double t) {
    require_nonzero_step(t);
    require_members(problem, {&u, &v});
    const DoubleDouble shifted = evaluate_shifted(problem, functional, u, v, t);
    const DoubleDouble base = evaluate_shifted(problem, functional, u, v, 0.0);
    return ((shifted - base) / t).value();
}

double derivative_quotient(const EnergyProblem& problem, const RandomVariable& u,
                           const RandomVariable& v, const RandomVariable& w, double t) {
    require_nonzero_step(t);
    require_members(problem, {&u, &v, &w});
    const DoubleDouble shifted = gateaux_shifted(problem, u, v, w, t);
    const DoubleDouble base = gateaux_shifted(problem, u, v, w, 0.0);
    return ((shifted - base) / t).value();
}

bool DerivativeCheckReport::pass() const noexcept {
    return std::all_of(formulas.begin(), formulas.end(),
                       [](const FormulaCheck& f) { return f.pass; });
}

double scaled_defect(double actual, double expected) noexcept {
    return std::abs(actual - expected) / std::max(1.0, std::abs(expected));
}

std::vector<double> default_step_sizes() {
    return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
}

DerivativeCheckReport check_derivatives(const EnergyProblem& problem,
                                        std::size_t directions,
                                        std::span<const double> steps,
                                        std::uint64_t seed) {
    if (directions == 0)
        throw Error(ErrorCode::InvalidArgument, "derivative check needs at least one direction");
    if (steps.empty())
        throw Error(ErrorCode::InvalidArgument, "derivative check needs at least one step size");
    for (std::size_t s = 0; s < steps.size(); ++s) {
        if (!(steps[s] > 0.0) || !std::isfinite(steps[s]))
            throw Error(ErrorCode::InvalidArgument, "step sizes must be positive and finite");
        if (s > 0 && !(steps[s] < steps[s - 1]))
            throw Error(ErrorCode::InvalidArgument, "step sizes must be strictly decreasing");
    }

    DerivativeCheckReport report;
    report.direction_count = directions;
    report.step_sizes.assign(steps.begin(), steps.end());

    FormulaCheck linear{"T_quotient", {}, 0.0, kLinearIdentityTolerance, false};
    FormulaCheck norm{"half_norm_quotient", {}, 0.0, kAccumulatedTolerance, false};
    FormulaCheck first{"J_first_quotient", {}, 0.0, kAccumulatedTolerance, false};
    FormulaCheck second{"J_second_quotient", {}, 0.0, kAccumulatedTolerance, false};
    for (auto* f : {&linear, &norm, &first, &second}) f->defects.assign(steps.size(), 0.0);

    Rng rng(seed);
    const auto& space = problem.space();
    for (std::size_t d = 0; d < directions; ++d) {
        const RandomVariable u = random_measurable(problem.g(), rng);
        const RandomVariable v = random_measurable(problem.g(), rng);
        const RandomVariable w = random_measurable(problem.g(), rng);

        const double t_of_v = t_apply(problem, v);
        const double uv = inner_product(space, u, v);
        const double vv = inner_product(space, v, v);
        const double gateaux = j_gateaux(problem, u, v);
        const double hessian = j_second(problem, v, w);

        for (std::size_t s = 0; s < steps.size(); ++s) {
            const double t = steps[s];
            const double remainder = 0.5 * t * vv;
            auto note = [s](FormulaCheck& f, double defect) {
                f.defects[s] = std::max(f.defects[s], defect);
            };
            note(linear, scaled_defect(directional_quotient(problem, FunctionalId::T, u, v, t),
                                       t_of_v));
            note(norm, scaled_defect(
                           directional_quotient(problem, FunctionalId::HalfSquaredNorm, u, v, t),
                           uv + remainder));
            note(first, scaled_defect(directional_quotient(problem, FunctionalId::J, u, v, t),
                                      gateaux + remainder));
            note(second, scaled_defect(derivative_quotient(problem, u, v, w, t), hessian));
        }
    }

    for (auto* f : {&linear, &norm, &first, &second}) {
        f->max_defect = *std::max_element(f->defects.begin(), f->defects.end());
        f->pass = f->max_defect <= f->tolerance;
        report.formulas.push_back(std::move(*f));
    }
    return report;
}

double minimum_gap(const EnergyProblem& problem, const RandomVariable& xi,
                   const RandomVariable& y) {
    require_measurable(problem.space(), problem.g(), xi, "claimed minimizer");
    require_measurable(problem.space(), problem.g(), y, "comparison point");
    return j_eval(problem, y) - j_eval(problem, xi);
}

}  // namespace condexp
