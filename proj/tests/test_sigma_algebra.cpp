#include "condexp/error.hpp"
#include "condexp/sigma_algebra.hpp"
#include "support/random_problems.hpp"

#include <doctest.h>

using namespace condexp;

namespace {

std::vector<Event> atoms(std::initializer_list<std::initializer_list<std::size_t>> sets) {
    std::vector<Event> out;
    for (auto s : sets) out.emplace_back(s);
    return out;
}

}  // namespace

TEST_CASE("generate builds atoms from membership signatures") {
    const std::vector<Event> one{Event{0, 1}};
    CHECK(generate(4, one).atoms() == atoms({{0, 1}, {2, 3}}));

    CHECK(generate(4, {}).atoms() == atoms({{0, 1, 2, 3}}));

    const std::vector<Event> two{Event{0, 1}, Event{1, 2}};
    CHECK(generate(4, two).atoms() == atoms({{0}, {1}, {2}, {3}}));

    const std::vector<Event> bad{Event{0, 4}};
    CHECK_THROWS_AS(generate(4, bad), Error);
}

TEST_CASE("atoms are ordered by smallest member") {
    const std::vector<Event> gens{Event{3}, Event{1, 3}};
    const auto g = generate(4, gens);
    // signatures: 0 -> (0,0), 1 -> (0,1), 2 -> (0,0), 3 -> (1,1)
    CHECK(g.atoms() == atoms({{0, 2}, {1}, {3}}));
    CHECK(g.atom_of(2) == 0);

    const auto h = SigmaAlgebra::from_atoms(4, atoms({{3, 2}, {1, 0}}));
    CHECK(h.atoms() == atoms({{0, 1}, {2, 3}}));
}

TEST_CASE("discrete") {
    CHECK(discrete(3).atoms() == atoms({{0}, {1}, {2}}));
    CHECK(discrete(1).atoms() == atoms({{0}}));
    CHECK(discrete(2).atoms() == atoms({{0}, {1}}));
    CHECK_THROWS_AS(discrete(0), Error);
}

TEST_CASE("from_atoms rejects non-partitions") {
    CHECK_THROWS_AS(SigmaAlgebra::from_atoms(3, atoms({{0, 1}})), Error);
    CHECK_THROWS_AS(SigmaAlgebra::from_atoms(3, atoms({{0, 1}, {1, 2}})), Error);
    CHECK_THROWS_AS(SigmaAlgebra::from_atoms(3, atoms({{0, 1, 2}, {}})), Error);
    CHECK_THROWS_AS(SigmaAlgebra::from_atoms(3, atoms({{0, 1, 5}, {2}})), Error);
}

TEST_CASE("refines") {
    const std::vector<Event> gens{Event{0, 1}};
    const auto pairs = generate(4, gens);
    CHECK(refines(discrete(4), pairs));
    CHECK_FALSE(refines(pairs, discrete(4)));
    CHECK(refines(pairs, SigmaAlgebra::trivial(4)));
    CHECK(refines(discrete(4), SigmaAlgebra::trivial(4)));
    CHECK_THROWS_AS(refines(discrete(3), discrete(4)), Error);
}

TEST_CASE("is_measurable") {
    const auto uniform = ProbabilitySpace::uniform(4);
    const auto g = SigmaAlgebra::from_atoms(4, atoms({{0, 1}, {2, 3}}));
    CHECK(is_measurable(uniform, g, RandomVariable{1.5, 1.5, 3.5, 3.5}));
    CHECK_FALSE(is_measurable(uniform, g, RandomVariable{1, 2, 3, 4}));

    const auto with_null = ProbabilitySpace::create(std::vector<double>{0.5, 0, 0.25, 0.25});
    CHECK(is_measurable(with_null, g, RandomVariable{1, 7, 3, 3}));

    CHECK(is_measurable(uniform, g, RandomVariable{1.5, 1.5 + 1e-10, 3.5, 3.5}));
    CHECK_FALSE(is_measurable(uniform, g, RandomVariable{1.5, 1.5 + 1e-8, 3.5, 3.5}));
    CHECK_THROWS_AS(is_measurable(uniform, g, RandomVariable{1, 2}), Error);
}

TEST_CASE("indicator") {
    CHECK(indicator(4, Event{}) == RandomVariable::zero(4));
    CHECK(indicator(4, Event::all(4)) == RandomVariable::constant(4, 1.0));
    CHECK(indicator(4, Event{0, 2}) == RandomVariable{1, 0, 1, 0});
    CHECK_THROWS_AS(indicator(4, Event{4}), Error);
}

TEST_CASE("property: generate is idempotent on its own atoms") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
        const auto g = SigmaAlgebra::from_labels(testing::random_labels(n, rng));
        CHECK(generate(n, g.atoms()) == g);
    }
}

TEST_CASE("property: refines is a partial order") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
        const auto fine_labels = testing::random_labels(n, rng);
        const auto mid_labels = testing::coarsen(fine_labels, rng);
        const auto top_labels = testing::coarsen(mid_labels, rng);
        const auto fine = SigmaAlgebra::from_labels(fine_labels);
        const auto mid = SigmaAlgebra::from_labels(mid_labels);
        const auto top = SigmaAlgebra::from_labels(top_labels);
        const auto other = SigmaAlgebra::from_labels(testing::random_labels(n, rng));

        CHECK(refines(fine, fine));
        CHECK(refines(fine, mid));
        CHECK(refines(mid, top));
        CHECK(refines(fine, top));
        if (refines(fine, other) && refines(other, fine)) CHECK(fine == other);
        if (refines(mid, fine)) CHECK(mid == fine);
    }
}

TEST_CASE("property: atom indicators are measurable and measurable X is a combination of them") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 64)(rng);
        const auto space = ProbabilitySpace::create(testing::random_weights(n, rng));
        const auto g = SigmaAlgebra::from_labels(testing::random_labels(n, rng));
        for (const auto& a : g.atoms()) CHECK(is_measurable(space, g, indicator(n, a)));

        const auto x = random_measurable(g, rng);
        CHECK(is_measurable(space, g, x));
        std::vector<double> rebuilt(n, 0.0);
        for (const auto& a : g.atoms()) {
            const double coefficient = x[a.members().front()];
            const auto ind = indicator(n, a);
            for (std::size_t i = 0; i < n; ++i) rebuilt[i] += coefficient * ind[i];
        }
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(rebuilt[i] - x[i]) <= 1e-12);
    }
}
