#include "condexp/solvers.hpp"

#include "condexp/error.hpp"
#include "condexp/functional.hpp"
#include "condexp/gram.hpp"
#include "condexp/sampling.hpp"
#include "condexp/summation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace condexp {

const char* to_string(Method m) noexcept {
    switch (m) {
    case Method::Oracle: return "oracle";
    case Method::Projection: return "projection";
    case Method::Gradient: return "gradient";
    }
    return "?";
}

const char* to_string(StepPolicy p) noexcept {
    switch (p) {
    case StepPolicy::Fixed: return "fixed";
    case StepPolicy::JacobiPreconditioned: return "jacobi";
    }
    return "?";
}

const char* to_string(InitialPoint p) noexcept {
    switch (p) {
    case InitialPoint::Zero: return "zero";
    case InitialPoint::UnconditionalMean: return "mean";
    }
    return "?";
}

namespace {

void require_problem(const ProbabilitySpace& space, const SigmaAlgebra& g,
                     const RandomVariable& x) {
    require_compatible(space, g);
    require_member(space, x);
}

CondExpResult make_result(const SigmaAlgebra& g, const std::vector<double>& probs,
                          std::vector<double> atom_values, Method method) {
    CondExpResult r;
    r.method = method;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        if (probs[j] == 0.0) {
            atom_values[j] = 0.0;
            r.null_atoms.push_back(j);
        }
    }
    r.xi = from_atom_values(g, atom_values);
    r.atom_values = std::move(atom_values);
    return r;
}

// T(1_{B_j}) for every atom.
std::vector<double> atom_integrals(const ProbabilitySpace& space, const SigmaAlgebra& g,
                                   const RandomVariable& x) {
    std::vector<double> out;
    out.reserve(g.atom_count());
    for (const auto& a : g.atoms()) out.push_back(integrate_over(space, x, a));
    return out;
}

}  // namespace

CondExpResult solve_oracle(const ProbabilitySpace& space, const SigmaAlgebra& g,
                           const RandomVariable& x) {
    require_problem(space, g, x);
    const std::vector<double> probs = atom_probabilities(space, g);
    const std::vector<double> integrals = atom_integrals(space, g, x);
    std::vector<double> values(g.atom_count(), 0.0);
    for (std::size_t j = 0; j < values.size(); ++j)
        if (probs[j] > 0.0) values[j] = integrals[j] / probs[j];
    return make_result(g, probs, std::move(values), Method::Oracle);
}

CondExpResult solve_projection(const ProbabilitySpace& space, const SigmaAlgebra& g,
                               const RandomVariable& x,
                               const std::vector<RandomVariable>& basis) {
    require_problem(space, g, x);
    std::vector<RandomVariable> elements;
    if (basis.empty()) {
        elements.reserve(g.atom_count());
        for (const auto& a : g.atoms()) elements.push_back(indicator(space.size(), a));
    } else {
        for (std::size_t k = 0; k < basis.size(); ++k) {
            require_member(space, basis[k]);
            if (!is_measurable(space, g, basis[k])) {
                std::ostringstream msg;
                msg << "basis element " << k << " is not G-measurable";
                throw Error(ErrorCode::NotMeasurable, msg.str());
            }
        }
        elements = basis;
    }

    const std::size_t m = elements.size();
    SymmetricMatrix gram(m);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        rhs[i] = inner_product(space, x, elements[i]);
        for (std::size_t j = 0; j <= i; ++j)
            gram(i, j) = gram(j, i) = inner_product(space, elements[i], elements[j]);
    }
    const GramSolution sol = solve_gram(gram, rhs);

    const std::vector<double> probs = atom_probabilities(space, g);
    const auto live = static_cast<std::size_t>(
        std::count_if(probs.begin(), probs.end(), [](double p) { return p > 0.0; }));
    if (sol.rank < live) {
        std::ostringstream msg;
        msg << "basis spans " << sol.rank << " dimensions but G has " << live
            << " non-null atoms";
        throw Error(ErrorCode::DegenerateBasis, msg.str());
    }

    std::vector<double> combined(space.size(), 0.0);
    for (std::size_t i = 0; i < space.size(); ++i) {
        CompensatedSum acc;
        for (std::size_t k = 0; k < m; ++k) acc.add(sol.coefficients[k] * elements[k][i]);
        combined[i] = acc.value();
    }
    // Basis elements are measurable only within tolerance; the weighted atom
    // average makes the result exactly constant per atom.
    const RandomVariable projected(std::move(combined));
    std::vector<double> values(g.atom_count(), 0.0);
    for (std::size_t j = 0; j < values.size(); ++j)
        if (probs[j] > 0.0) values[j] = integrate_over(space, projected, g.atom(j)) / probs[j];
    return make_result(g, probs, std::move(values), Method::Projection);
}

void GradientConfig::validate() const {
    if (!(tolerance > 0.0))
        throw Error(ErrorCode::InvalidArgument, "gradient tolerance must be positive");
    if (max_iterations < 1)
        throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
    if (eta && !(*eta > 0.0 && std::isfinite(*eta)))
        throw Error(ErrorCode::InvalidArgument, "fixed step size must be positive");
}

GradientOutcome solve_gradient(const ProbabilitySpace& space, const SigmaAlgebra& g,
                               const RandomVariable& x, const GradientConfig& config) {
    require_problem(space, g, x);
    config.validate();

    const std::vector<double> probs = atom_probabilities(space, g);
    const std::vector<double> targets = atom_integrals(space, g, x);
    const std::size_t m = g.atom_count();

    std::vector<double> coeff(m, 0.0);
    if (config.warm_start) {
        if (config.warm_start->size() != m)
            throw Error(ErrorCode::SizeMismatch, "warm start needs one value per atom");
        coeff = *config.warm_start;
    } else if (config.initial_point == InitialPoint::UnconditionalMean) {
        coeff.assign(m, expectation(space, x));
    }
    for (std::size_t j = 0; j < m; ++j)
        if (probs[j] == 0.0) coeff[j] = 0.0;

    GradientOutcome out;
    const double max_prob = *std::max_element(probs.begin(), probs.end());
    out.step_size = config.step_policy == StepPolicy::Fixed ? config.eta.value_or(1.0 / max_prob)
                                                            : 0.0;

    // In atom coordinates J(c) = sum_j (P_j c_j^2 / 2 - T_j c_j) and the
    // gradient component j is J'_c(1_{B_j}) = P_j c_j - T_j.
    auto energy = [&] {
        CompensatedSum acc;
        for (std::size_t j = 0; j < m; ++j)
            acc.add(0.5 * probs[j] * coeff[j] * coeff[j] - targets[j] * coeff[j]);
        return acc.value();
    };
    std::vector<double> grad(m, 0.0);
    auto gradient_norm = [&] {
        CompensatedSum acc;
        for (std::size_t j = 0; j < m; ++j) {
            grad[j] = probs[j] > 0.0 ? probs[j] * coeff[j] - targets[j] : 0.0;
            acc.add(grad[j] * grad[j]);
        }
        return std::sqrt(acc.value());
    };

    std::size_t iteration = 0;
    double norm = gradient_norm();
    out.energy_trace.push_back(energy());
    while (norm > config.tolerance && iteration < config.max_iterations) {
        for (std::size_t j = 0; j < m; ++j) {
            if (probs[j] == 0.0) continue;
            if (config.step_policy == StepPolicy::JacobiPreconditioned)
                coeff[j] -= grad[j] / probs[j];
            else
                coeff[j] -= out.step_size * grad[j];
        }
        ++iteration;
        norm = gradient_norm();
        out.energy_trace.push_back(energy());
    }

    out.converged = norm <= config.tolerance;
    out.result = make_result(g, probs, std::move(coeff), Method::Gradient);
    out.result.iterations = iteration;
    out.result.final_gradient_norm = norm;
    return out;
}

bool VerificationReport::overall_pass() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void VerificationReport::append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

namespace {

Check make_check(std::string name, double defect, double tolerance, std::string detail = {}) {
    return Check{std::move(name), defect, tolerance, defect <= tolerance, std::move(detail)};
}

}  // namespace

VerificationReport verify_defining_property(const ProbabilitySpace& space,
                                            const SigmaAlgebra& g, const RandomVariable& x,
                                            const RandomVariable& xi,
                                            const DefiningPropertyOptions& options) {
    require_problem(space, g, x);
    require_member(space, xi);
    require_measurable(space, g, xi, "claimed conditional expectation");

    const double tol = options.tolerance * (1.0 + norm2(space, x));
    VerificationReport report;
    for (std::size_t j = 0; j < g.atom_count(); ++j) {
        const Event& a = g.atom(j);
        const double defect = std::abs(integrate_over(space, x, a) - integrate_over(space, xi, a));
        std::ostringstream name;
        name << "atom[" << j << "]";
        report.add(make_check(name.str(), defect, tol));
    }

    if (options.union_samples > 0) {
        Rng rng(options.seed);
        std::bernoulli_distribution coin(0.5);
        double worst = 0.0;
        for (std::size_t s = 0; s < options.union_samples; ++s) {
            std::vector<bool> selected(g.atom_count());
            for (std::size_t j = 0; j < selected.size(); ++j) selected[j] = coin(rng);
            const Event b = union_of_atoms(g, selected);
            worst = std::max(worst,
                             std::abs(integrate_over(space, x, b) - integrate_over(space, xi, b)));
        }
        std::ostringstream detail;
        detail << options.union_samples << " random unions of atoms";
        report.add(make_check("atom_unions", worst, tol, detail.str()));
    }
    return report;
}

VerificationReport verify_product_identity(const ProbabilitySpace& space,
                                           const SigmaAlgebra& g, const RandomVariable& x,
                                           const RandomVariable& xi,
                                           std::size_t sample_count, std::uint64_t seed,
                                           double tolerance) {
    require_problem(space, g, x);
    require_member(space, xi);
    require_measurable(space, g, xi, "claimed conditional expectation");

    const double x_norm = norm2(space, x);
    auto normalized_defect = [&](const RandomVariable& y) {
        const double d = std::abs(inner_product(space, x, y) - inner_product(space, xi, y));
        return d / (1.0 + x_norm * norm2(space, y));
    };

    VerificationReport report;
    double worst = 0.0;
    for (const auto& a : g.atoms())
        worst = std::max(worst, normalized_defect(indicator(space.size(), a)));
    report.add(make_check("product_identity.indicators", worst, tolerance));

    if (sample_count > 0) {
        Rng rng(seed);
        worst = 0.0;
        for (std::size_t s = 0; s < sample_count; ++s)
            worst = std::max(worst, normalized_defect(random_measurable(g, rng)));
        std::ostringstream detail;
        detail << sample_count << " random G-measurable directions";
        report.add(make_check("product_identity.random", worst, tolerance, detail.str()));
    }
    return report;
}

VerificationReport tower_check(const ProbabilitySpace& space, const SigmaAlgebra& coarse,
                               const SigmaAlgebra& fine, const RandomVariable& x,
                               double tolerance) {
    require_problem(space, fine, x);
    require_compatible(space, coarse);
    if (!refines(fine, coarse))
        throw Error(ErrorCode::NotRefinement,
                    "tower check needs the fine sigma-algebra to refine the coarse one");

    const CondExpResult inner = solve_oracle(space, fine, x);
    const CondExpResult nested = solve_oracle(space, coarse, inner.xi);
    const CondExpResult direct = solve_oracle(space, coarse, x);
    VerificationReport report;
    report.add(make_check("tower", almost_sure_distance(space, nested.xi, direct.xi), tolerance));
    return report;
}

VerificationReport verify_dirichlet(const ProbabilitySpace& space, const SigmaAlgebra& g,
                                    const RandomVariable& x, const RandomVariable& xi,
                                    const DirichletOptions& options) {
    const EnergyProblem problem(space, x, g);
    require_measurable(space, g, xi, "claimed minimizer");

    Rng rng(options.seed);
    double worst_relative = 0.0;
    double most_negative = 0.0;
    std::size_t false_zeros = 0;
    for (std::size_t s = 0; s < options.samples; ++s) {
        const RandomVariable y = random_measurable(g, rng);
        const double gap = minimum_gap(problem, xi, y);
        const double distance = norm2(space, y - xi);
        const double predicted = 0.5 * distance * distance;
        most_negative = std::min(most_negative, gap);
        if (predicted > 0.0)
            worst_relative = std::max(worst_relative, std::abs(gap - predicted) / predicted);
        else
            worst_relative = std::max(worst_relative, std::abs(gap));
        if (gap == 0.0 && distance > options.zero_gap_distance) ++false_zeros;
    }

    VerificationReport report;
    std::ostringstream detail;
    detail << options.samples << " random G-measurable Y";
    report.add(make_check("dirichlet.nonnegative_gap", 0.0 - most_negative, 0.0, detail.str()));
    report.add(make_check("dirichlet.gap_equals_half_distance", worst_relative,
                          options.relative_tolerance, detail.str()));
    report.add(make_check("dirichlet.zero_only_at_minimizer", static_cast<double>(false_zeros),
                          0.0));
    return report;
}

}  // namespace condexp
