#pragma once

#include "condexp/prob_space.hpp"
#include "condexp/sigma_algebra.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace condexp {

/// The data defining the linear functional T(Y) = <X, Y> and the energy
/// J(Y) = 1/2 ||Y||^2 - T(Y) whose minimizer over G-measurable Y is E(X|G).
class EnergyProblem {
public:
    EnergyProblem(ProbabilitySpace space, RandomVariable x, SigmaAlgebra g);

    const ProbabilitySpace& space() const noexcept { return space_; }
    const RandomVariable& x() const noexcept { return x_; }
    const SigmaAlgebra& g() const noexcept { return g_; }

private:
    ProbabilitySpace space_;
    RandomVariable x_;
    SigmaAlgebra g_;
};

double t_apply(const EnergyProblem& problem, const RandomVariable& y);
double half_squared_norm(const EnergyProblem& problem, const RandomVariable& y);
double j_eval(const EnergyProblem& problem, const RandomVariable& y);

/// First derivative of J at z in direction y: <z, y> - T(y).
double j_gateaux(const EnergyProblem& problem, const RandomVariable& z,
                 const RandomVariable& y);

/// Second derivative of J, <y, w>; the base point does not enter.
double j_second(const EnergyProblem& problem, const RandomVariable& y,
                const RandomVariable& w);

enum class FunctionalId { T, HalfSquaredNorm, J };

const char* to_string(FunctionalId id) noexcept;

/// (F(u + t v) - F(u)) / t. The perturbed point and both evaluations are
/// carried in double-double precision so that small t does not lose the
/// quotient to cancellation. Throws Error{InvalidArgument} for t == 0.
double directional_quotient(const EnergyProblem& problem, FunctionalId functional,
                            const RandomVariable& u, const RandomVariable& v, double t);

/// (J'_{u+tv}(w) - J'_u(w)) / t, the quotient defining the second derivative.
double derivative_quotient(const EnergyProblem& problem, const RandomVariable& u,
                           const RandomVariable& v, const RandomVariable& w, double t);

struct FormulaCheck {
    std::string name;
    std::vector<double> defects;  // worst defect per step size
    double max_defect = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct DerivativeCheckReport {
    std::size_t direction_count = 0;
    std::vector<double> step_sizes;
    std::vector<FormulaCheck> formulas;

    bool pass() const noexcept;
};

inline constexpr double kLinearIdentityTolerance = 1e-12;
inline constexpr double kAccumulatedTolerance = 1e-10;

/// Scaled defect |actual - expected| / max(1, |expected|): absolute for
/// quantities of unit size or below, relative above.
double scaled_defect(double actual, double expected) noexcept;

/// Compares finite-difference quotients against the closed-form derivatives
/// on `directions` random G-measurable triples (u, v, w) at each step size.
/// J is quadratic, so every identity checked is exact at finite t:
///   T quotient            == T(v)
///   1/2||.||^2 quotient   == <u, v> + t/2 ||v||^2
///   J quotient            == J'_u(v) + t/2 ||v||^2
///   J' quotient           == J''(v, w)
/// Step sizes must be positive and strictly decreasing.
DerivativeCheckReport check_derivatives(const EnergyProblem& problem,
                                        std::size_t directions,
                                        std::span<const double> steps,
                                        std::uint64_t seed);

std::vector<double> default_step_sizes();

/// J(y) - J(xi) for G-measurable xi and y. When xi = E(X|G) this equals
/// 1/2 ||y - xi||^2.
double minimum_gap(const EnergyProblem& problem, const RandomVariable& xi,
                   const RandomVariable& y);

}  // namespace condexp
