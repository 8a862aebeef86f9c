#pragma once

#include "condexp/prob_space.hpp"
#include "condexp/sigma_algebra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace condexp {

enum class Method { Oracle, Projection, Gradient };

const char* to_string(Method m) noexcept;

/// A computed E(X|G). Atoms of probability zero carry the value 0; their
/// positions are listed in null_atoms.
struct CondExpResult {
    RandomVariable xi;
    std::vector<double> atom_values;
    Method method = Method::Oracle;
    std::size_t iterations = 0;
    double final_gradient_norm = 0.0;
    std::vector<std::size_t> null_atoms;
};

enum class StepPolicy { Fixed, JacobiPreconditioned };
enum class InitialPoint { Zero, UnconditionalMean };

const char* to_string(StepPolicy p) noexcept;
const char* to_string(InitialPoint p) noexcept;

struct GradientConfig {
    StepPolicy step_policy = StepPolicy::JacobiPreconditioned;
    /// Fixed step size; defaults to 1 / max_j P(B_j) when unset.
    std::optional<double> eta;
    /// Stop once the Euclidean norm of the gradient over non-null atoms is
    /// at or below this value.
    double tolerance = 1e-10;
    std::size_t max_iterations = 10000;
    InitialPoint initial_point = InitialPoint::Zero;
    /// Per-atom starting coefficients; overrides initial_point when set.
    std::optional<std::vector<double>> warm_start;

    /// Throws Error{InvalidArgument}.
    void validate() const;
};

struct GradientOutcome {
    CondExpResult result;
    bool converged = false;
    /// J at every iterate, starting with the initial point.
    std::vector<double> energy_trace;
    double step_size = 0.0;
};

/// Atom averages: xi = integral of X over the atom divided by its probability.
CondExpResult solve_oracle(const ProbabilitySpace& space, const SigmaAlgebra& g,
                           const RandomVariable& x);

/// Orthogonal projection of X onto span(basis) by solving the Gram system
/// sum_j c_j <e_j, e_i> = <X, e_i>. The basis defaults to the atom
/// indicators; a user basis must be G-measurable and span every non-null
/// atom indicator, and may be redundant.
CondExpResult solve_projection(const ProbabilitySpace& space, const SigmaAlgebra& g,
                               const RandomVariable& x,
                               const std::vector<RandomVariable>& basis = {});

/// Descent on J in atom coordinates. Never throws on non-convergence: the
/// outcome carries converged = false and the last iterate.
GradientOutcome solve_gradient(const ProbabilitySpace& space, const SigmaAlgebra& g,
                               const RandomVariable& x, const GradientConfig& config = {});

struct Check {
    std::string name;
    double max_defect = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<Check> checks;

    bool overall_pass() const noexcept;
    void add(Check c) { checks.push_back(std::move(c)); }
    void append(const VerificationReport& other);
};

struct DefiningPropertyOptions {
    /// Defects are compared against tolerance * (1 + ||X||_2).
    double tolerance = 1e-12;
    /// Random unions of atoms checked on top of the atoms themselves.
    std::size_t union_samples = 32;
    std::uint64_t seed = 0;
};

/// Checks that X and xi have the same integral over every atom of G and over
/// random unions of atoms. Throws Error{NotMeasurable} if xi is not G-measurable.
VerificationReport verify_defining_property(const ProbabilitySpace& space,
                                            const SigmaAlgebra& g, const RandomVariable& x,
                                            const RandomVariable& xi,
                                            const DefiningPropertyOptions& options = {});

/// Checks <X, Y> = <xi, Y> for every atom indicator and `sample_count` random
/// G-measurable Y. Defects are normalized by 1 + ||X||_2 ||Y||_2.
VerificationReport verify_product_identity(const ProbabilitySpace& space,
                                           const SigmaAlgebra& g, const RandomVariable& x,
                                           const RandomVariable& xi,
                                           std::size_t sample_count, std::uint64_t seed,
                                           double tolerance = 1e-10);

/// Checks E(E(X|fine)|coarse) = E(X|coarse) on non-null outcomes.
/// Throws Error{NotRefinement} unless `fine` refines `coarse`.
VerificationReport tower_check(const ProbabilitySpace& space, const SigmaAlgebra& coarse,
                               const SigmaAlgebra& fine, const RandomVariable& x,
                               double tolerance = 1e-11);

struct DirichletOptions {
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    double relative_tolerance = 1e-10;
    /// A zero gap is only acceptable when ||Y - xi||_2 is at most this.
    double zero_gap_distance = 1e-9;
};

/// Samples G-measurable Y and checks J(Y) - J(xi) >= 0 and that the gap
/// equals 1/2 ||Y - xi||^2.
VerificationReport verify_dirichlet(const ProbabilitySpace& space, const SigmaAlgebra& g,
                                    const RandomVariable& x, const RandomVariable& xi,
                                    const DirichletOptions& options = {});

}  // namespace condexp
