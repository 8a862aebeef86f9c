#pragma once

#include "condexp/prob_space.hpp"
#include "condexp/sigma_algebra.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace condexp {

struct SigmaSpec {
    enum class Kind { Atoms, Generators };
    Kind kind = Kind::Atoms;
    std::vector<std::vector<std::size_t>> sets;
};

/// A problem document: a weighted outcome set plus named random variables
/// and named sigma-algebras. The serialized form is JSON:
///
///   {
///     "outcomes": ["a", "b", "c", "d"],            (optional)
///     "probabilities": [1, 1, 1, 1],                (unnormalized weights)
///     "variables": { "X": [1, 2, 3, 4] },
///     "sigma_algebras": {
///       "G": { "atoms": [[0, 1], [2, 3]] },
///       "trivial": { "generators": [] }
///     }
///   }
///
/// A run report written with --out embeds its problem under "problem" and
/// is accepted wherever a problem file is.
class ProblemFile {
public:
    std::vector<std::string> outcomes;
    std::vector<double> probabilities;
    std::vector<std::pair<std::string, std::vector<double>>> variables;
    std::vector<std::pair<std::string, SigmaSpec>> sigma_algebras;

    /// Throws Error{Parse} for malformed documents and the usual validation
    /// errors for inconsistent contents.
    static ProblemFile parse(std::string_view text);
    static ProblemFile load(const std::string& path);

    std::string to_json() const;
    void save(const std::string& path) const;

    /// Throws Error on any inconsistency; parse() calls this.
    void validate() const;

    std::size_t outcome_count() const noexcept { return probabilities.size(); }
    ProbabilitySpace space() const;
    /// Throws Error{UnknownName}.
    RandomVariable variable(const std::string& name) const;
    SigmaAlgebra sigma(const std::string& name) const;
    bool has_variable(const std::string& name) const;
    bool has_sigma(const std::string& name) const;

    void add_variable(std::string name, std::vector<double> values);
    void add_sigma(std::string name, SigmaSpec spec);
};

}  // namespace condexp
