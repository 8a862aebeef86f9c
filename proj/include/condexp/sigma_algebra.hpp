#pragma once

#include "condexp/prob_space.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace condexp {

/// A sub-sigma-algebra of the power set, stored as its atom partition.
/// Atoms are sorted internally and ordered by their smallest member.
class SigmaAlgebra {
public:
    /// Atoms are the classes of outcomes sharing the same membership
    /// pattern across all generators; no generators gives {empty, Omega}.
    static SigmaAlgebra generate(std::size_t space_size, std::span<const Event> generators);
    static SigmaAlgebra discrete(std::size_t space_size);
    static SigmaAlgebra trivial(std::size_t space_size);
    /// Validates that `atoms` is a partition of {0..space_size-1}.
    static SigmaAlgebra from_atoms(std::size_t space_size, std::vector<Event> atoms);
    /// Builds the partition from a label per outcome; equal labels share an atom.
    static SigmaAlgebra from_labels(std::span<const std::size_t> labels);

    std::size_t space_size() const noexcept { return atom_of_.size(); }
    std::size_t atom_count() const noexcept { return atoms_.size(); }
    const std::vector<Event>& atoms() const noexcept { return atoms_; }
    const Event& atom(std::size_t j) const { return atoms_.at(j); }
    std::size_t atom_of(std::size_t outcome) const { return atom_of_.at(outcome); }

    friend bool operator==(const SigmaAlgebra& a, const SigmaAlgebra& b) {
        return a.atoms_ == b.atoms_;
    }

private:
    SigmaAlgebra() = default;
    void index_atoms();

    std::vector<Event> atoms_;
    std::vector<std::size_t> atom_of_;
};

SigmaAlgebra generate(std::size_t space_size, std::span<const Event> generators);
SigmaAlgebra discrete(std::size_t space_size);

/// True iff every atom of `fine` lies inside an atom of `coarse`, i.e. the
/// sigma-algebra of `coarse` is contained in that of `fine`.
bool refines(const SigmaAlgebra& fine, const SigmaAlgebra& coarse);

/// Constant on every atom, ignoring null outcomes, within `tolerance`.
bool is_measurable(const ProbabilitySpace& space, const SigmaAlgebra& g,
                   const RandomVariable& x, double tolerance = kAlmostSureTolerance);

/// Throws Error{NotMeasurable} naming the first offending atom.
void require_measurable(const ProbabilitySpace& space, const SigmaAlgebra& g,
                        const RandomVariable& x, const char* what,
                        double tolerance = kAlmostSureTolerance);

RandomVariable indicator(std::size_t space_size, const Event& b);

/// P(B_j) for every atom, in atom order.
std::vector<double> atom_probabilities(const ProbabilitySpace& space, const SigmaAlgebra& g);

/// Builds the G-measurable variable taking `atom_values[j]` on atom j.
RandomVariable from_atom_values(const SigmaAlgebra& g, std::span<const double> atom_values);

/// Union of the atoms flagged in `selected`.
Event union_of_atoms(const SigmaAlgebra& g, const std::vector<bool>& selected);

void require_compatible(const ProbabilitySpace& space, const SigmaAlgebra& g);

}  // namespace condexp
