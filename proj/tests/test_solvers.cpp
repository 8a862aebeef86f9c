#include "condexp/error.hpp"
#include "condexp/functional.hpp"
#include "condexp/solvers.hpp"
#include "support/random_problems.hpp"

#include <doctest.h>

#include <cmath>

using namespace condexp;

namespace {

const ProbabilitySpace uniform4 = ProbabilitySpace::uniform(4);
const RandomVariable x1234{1, 2, 3, 4};
const SigmaAlgebra pairs4 = SigmaAlgebra::from_labels(std::vector<std::size_t>{0, 0, 1, 1});

double l2_distance(const ProbabilitySpace& s, const RandomVariable& a, const RandomVariable& b) {
    return norm2(s, a - b);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("oracle on the four-point example") {
    const auto r = solve_oracle(uniform4, pairs4, x1234);
    CHECK(r.xi == RandomVariable{1.5, 1.5, 3.5, 3.5});
    CHECK(r.atom_values == std::vector<double>{1.5, 3.5});
    CHECK(r.null_atoms.empty());
    CHECK(solve_oracle(uniform4, SigmaAlgebra::trivial(4), x1234).xi ==
          RandomVariable::constant(4, 2.5));
    CHECK(solve_oracle(uniform4, discrete(4), x1234).xi == x1234);
}

TEST_CASE("oracle puts zero on null atoms") {
    const double w[] = {0.5, 0.5, 0.0, 0.0};
    const auto space = ProbabilitySpace::create(w);
    const auto r = solve_oracle(space, pairs4, x1234);
    CHECK(r.xi == RandomVariable{1.5, 1.5, 0, 0});
    CHECK(r.null_atoms == std::vector<std::size_t>{1});
}

TEST_CASE("oracle input validation") {
    CHECK(code_of([] { solve_oracle(uniform4, pairs4, RandomVariable{1, 2}); }) ==
          ErrorCode::SizeMismatch);
    CHECK(code_of([] { solve_oracle(uniform4, discrete(3), x1234); }) ==
          ErrorCode::SizeMismatch);
}

TEST_CASE("projection with the default and an overlapping basis") {
    const auto r = solve_projection(uniform4, pairs4, x1234);
    CHECK(l2_distance(uniform4, r.xi, RandomVariable{1.5, 1.5, 3.5, 3.5}) <= 1e-14);

    const std::vector<RandomVariable> overlapping{RandomVariable::constant(4, 1.0),
                                                  RandomVariable{1, 1, 0, 0}};
    const auto o = solve_projection(uniform4, pairs4, x1234, overlapping);
    CHECK(l2_distance(uniform4, o.xi, RandomVariable{1.5, 1.5, 3.5, 3.5}) <= 1e-14);

    const std::vector<RandomVariable> redundant{RandomVariable::constant(4, 1.0),
                                                RandomVariable{1, 1, 0, 0},
                                                RandomVariable{0, 0, 1, 1}};
    const auto d = solve_projection(uniform4, pairs4, x1234, redundant);
    CHECK(l2_distance(uniform4, d.xi, RandomVariable{1.5, 1.5, 3.5, 3.5}) <= 1e-13);
}

TEST_CASE("projection basis errors") {
    const std::vector<RandomVariable> not_measurable{RandomVariable{1, 0, 0, 0},
                                                     RandomVariable{0, 0, 1, 1}};
    CHECK(code_of([&] { solve_projection(uniform4, pairs4, x1234, not_measurable); }) ==
          ErrorCode::NotMeasurable);
    const std::vector<RandomVariable> too_small{RandomVariable::constant(4, 1.0)};
    CHECK(code_of([&] { solve_projection(uniform4, pairs4, x1234, too_small); }) ==
          ErrorCode::DegenerateBasis);
}

TEST_CASE("gradient descent") {
    SUBCASE("jacobi converges in one step") {
        const auto out = solve_gradient(uniform4, pairs4, x1234);
        CHECK(out.converged);
        CHECK(out.result.iterations == 1);
        CHECK(out.result.xi == RandomVariable{1.5, 1.5, 3.5, 3.5});
        CHECK(out.energy_trace.size() == 2);
        CHECK(out.energy_trace.back() == doctest::Approx(-3.625));
    }
    SUBCASE("fixed step with the default step size") {
        GradientConfig config;
        config.step_policy = StepPolicy::Fixed;
        const auto out = solve_gradient(uniform4, pairs4, x1234, config);
        CHECK(out.converged);
        CHECK(out.step_size == 2.0);
        CHECK(l2_distance(uniform4, out.result.xi, RandomVariable{1.5, 1.5, 3.5, 3.5}) <= 1e-9);
    }
    SUBCASE("warm start at the solution takes no steps") {
        GradientConfig config;
        config.warm_start = std::vector<double>{1.5, 3.5};
        const auto out = solve_gradient(uniform4, pairs4, x1234, config);
        CHECK(out.converged);
        CHECK(out.result.iterations == 0);
        CHECK(out.energy_trace.size() == 1);
    }
    SUBCASE("unconditional mean start") {
        GradientConfig config;
        config.initial_point = InitialPoint::UnconditionalMean;
        config.step_policy = StepPolicy::Fixed;
        config.eta = 1.0;
        const auto out = solve_gradient(uniform4, pairs4, x1234, config);
        CHECK(out.energy_trace.front() == doctest::Approx(-3.125));
        CHECK(out.converged);
    }
    SUBCASE("budget exhausted reports non-convergence") {
        GradientConfig config;
        config.step_policy = StepPolicy::Fixed;
        config.eta = 0.01;
        config.max_iterations = 3;
        const auto out = solve_gradient(uniform4, pairs4, x1234, config);
        CHECK_FALSE(out.converged);
        CHECK(out.result.iterations == 3);
        CHECK(out.energy_trace.size() == 4);
        CHECK(out.result.final_gradient_norm > config.tolerance);
    }
    SUBCASE("invalid configuration") {
        GradientConfig config;
        config.eta = -1.0;
        config.step_policy = StepPolicy::Fixed;
        CHECK_THROWS_AS(solve_gradient(uniform4, pairs4, x1234, config), Error);
        GradientConfig warm;
        warm.warm_start = std::vector<double>{1.0};
        CHECK_THROWS_AS(solve_gradient(uniform4, pairs4, x1234, warm), Error);
    }
}

TEST_CASE("defining property detects a corrupted solution") {
    const RandomVariable good{1.5, 1.5, 3.5, 3.5};
    CHECK(verify_defining_property(uniform4, pairs4, x1234, good).overall_pass());

    const RandomVariable bad{1.6, 1.6, 3.5, 3.5};
    const auto report = verify_defining_property(uniform4, pairs4, x1234, bad);
    CHECK_FALSE(report.overall_pass());
    REQUIRE(report.checks.size() >= 2);
    CHECK(report.checks[0].name == "atom[0]");
    CHECK(report.checks[0].max_defect == doctest::Approx(0.05));
    CHECK(report.checks[1].pass);

    CHECK(code_of([] {
              verify_defining_property(uniform4, pairs4, x1234, RandomVariable{1.5, 1.6, 3.5, 3.5});
          }) == ErrorCode::NotMeasurable);
}

TEST_CASE("changing a null atom does not affect verification") {
    const double w[] = {0.5, 0.5, 0.0, 0.0};
    const auto space = ProbabilitySpace::create(w);
    const RandomVariable altered{1.5, 1.5, 42.0, 42.0};
    CHECK(verify_defining_property(space, pairs4, x1234, altered).overall_pass());
    CHECK(verify_product_identity(space, pairs4, x1234, altered, 20, 1).overall_pass());
    CHECK(verify_dirichlet(space, pairs4, x1234, altered).overall_pass());
}

TEST_CASE("product identity and dirichlet checks on the example") {
    const RandomVariable good{1.5, 1.5, 3.5, 3.5};
    const auto pi = verify_product_identity(uniform4, pairs4, x1234, good, 100, 7);
    CHECK(pi.overall_pass());
    CHECK_FALSE(
        verify_product_identity(uniform4, pairs4, x1234, RandomVariable{1.6, 1.6, 3.5, 3.5}, 10, 7)
            .overall_pass());
    const auto d = verify_dirichlet(uniform4, pairs4, x1234, good);
    CHECK(d.overall_pass());
    CHECK(d.checks.size() == 3);
}

TEST_CASE("tower property on the eight-point example") {
    const auto space = ProbabilitySpace::uniform(8);
    const RandomVariable x{1, 2, 3, 4, 5, 6, 7, 8};
    const auto fine = SigmaAlgebra::from_labels(std::vector<std::size_t>{0, 0, 1, 1, 2, 2, 3, 3});
    const auto coarse = SigmaAlgebra::from_labels(std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1});
    const auto inner = solve_oracle(space, fine, x).xi;
    CHECK(inner == RandomVariable{1.5, 1.5, 3.5, 3.5, 5.5, 5.5, 7.5, 7.5});
    CHECK(solve_oracle(space, coarse, inner).xi ==
          RandomVariable{2.5, 2.5, 2.5, 2.5, 6.5, 6.5, 6.5, 6.5});
    CHECK(tower_check(space, coarse, fine, x).overall_pass());
    CHECK(code_of([&] { tower_check(space, fine, coarse, x); }) == ErrorCode::NotRefinement);
}

TEST_CASE("property: oracle matches the brute-force label average") {
    Rng rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = testing::random_problem(rng);
        const auto expected = testing::brute_force_conditional(p.space, p.labels, p.x);
        const auto r = solve_oracle(p.space, p.g, p.x);
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(std::abs(r.xi[i] - expected[i]) <= 1e-14);
    }
}

TEST_CASE("property: the three solvers agree") {
    Rng rng(103);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = testing::random_problem(rng);
        const auto oracle = solve_oracle(p.space, p.g, p.x).xi;
        CHECK(l2_distance(p.space, oracle, solve_projection(p.space, p.g, p.x).xi) <= 1e-10);
        CHECK(l2_distance(p.space, oracle, solve_gradient(p.space, p.g, p.x).result.xi) <= 1e-12);
    }
}

TEST_CASE("property: linearity, L1 contraction and uniqueness") {
    Rng rng(107);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = testing::random_problem(rng);
        const auto z = random_variable(p.space.size(), rng);
        const double a = std::uniform_real_distribution<double>(-2, 2)(rng);
        const double b = std::uniform_real_distribution<double>(-2, 2)(rng);
        const auto ex = solve_oracle(p.space, p.g, p.x).xi;
        const auto ez = solve_oracle(p.space, p.g, z).xi;
        const auto combined = solve_oracle(p.space, p.g, a * p.x + b * z).xi;
        CHECK(l2_distance(p.space, combined, a * ex + b * ez) <= 1e-12);

        CHECK(norm1(p.space, ex) <= norm1(p.space, p.x) * (1 + 1e-12) + 1e-15);

        // A candidate passing the defining property can only differ on null outcomes.
        std::vector<double> altered(ex.values().begin(), ex.values().end());
        for (std::size_t i = 0; i < altered.size(); ++i)
            if (p.space.is_null(i)) altered[i] = 1e6;
        const RandomVariable other(altered);
        CHECK(verify_defining_property(p.space, p.g, p.x, other).overall_pass());
        CHECK(almost_surely_equal(p.space, ex, other));

        // Constants are fixed points; measurable factors pull out.
        const auto y = random_measurable(p.g, rng);
        CHECK(l2_distance(p.space, solve_oracle(p.space, p.g, y).xi, y) <= 1e-12);
    }
}

TEST_CASE("property: verification suites pass on oracle output and catch corruption") {
    Rng rng(109);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = testing::random_problem(rng);
        const auto r = solve_oracle(p.space, p.g, p.x);
        DefiningPropertyOptions dp;
        dp.seed = static_cast<std::uint64_t>(trial);
        CHECK(verify_defining_property(p.space, p.g, p.x, r.xi, dp).overall_pass());
        CHECK(verify_product_identity(p.space, p.g, p.x, r.xi, 20, trial).overall_pass());
        DirichletOptions dd;
        dd.samples = 20;
        dd.seed = static_cast<std::uint64_t>(trial);
        CHECK(verify_dirichlet(p.space, p.g, p.x, r.xi, dd).overall_pass());

        const auto probs = atom_probabilities(p.space, p.g);
        for (std::size_t j = 0; j < probs.size(); ++j) {
            if (probs[j] == 0.0) continue;
            auto values = r.atom_values;
            values[j] += 0.1;
            CHECK_FALSE(verify_defining_property(p.space, p.g, p.x, from_atom_values(p.g, values))
                            .overall_pass());
            break;
        }
    }
}
