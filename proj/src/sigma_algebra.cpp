#include "condexp/sigma_algebra.hpp"

#include "condexp/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace condexp {

namespace {

std::vector<Event> group_by_key(const std::vector<std::vector<bool>>& keys) {
    // Outcomes are visited in increasing order, so atoms come out ordered by
    // their smallest member.
    std::map<std::vector<bool>, std::size_t> slot;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto [it, inserted] = slot.try_emplace(keys[i], members.size());
        if (inserted) members.emplace_back();
        members[it->second].push_back(i);
    }
    std::vector<Event> atoms;
    atoms.reserve(members.size());
    for (auto& m : members) atoms.emplace_back(std::move(m));
    return atoms;
}

}  // namespace

void SigmaAlgebra::index_atoms() {
    std::size_t n = 0;
    for (const auto& a : atoms_) n += a.size();
    atom_of_.assign(n, 0);
    for (std::size_t j = 0; j < atoms_.size(); ++j)
        for (std::size_t i : atoms_[j].members()) atom_of_[i] = j;
}

SigmaAlgebra SigmaAlgebra::generate(std::size_t space_size,
                                    std::span<const Event> generators) {
    if (space_size == 0)
        throw Error(ErrorCode::EmptyInput, "sigma-algebra needs at least one outcome");
    for (const auto& b : generators) b.validate(space_size);

    std::vector<std::vector<bool>> signature(space_size,
                                             std::vector<bool>(generators.size()));
    for (std::size_t k = 0; k < generators.size(); ++k)
        for (std::size_t i : generators[k].members()) signature[i][k] = true;

    SigmaAlgebra g;
    g.atoms_ = group_by_key(signature);
    g.index_atoms();
    return g;
}

SigmaAlgebra SigmaAlgebra::discrete(std::size_t space_size) {
    if (space_size == 0)
        throw Error(ErrorCode::EmptyInput, "sigma-algebra needs at least one outcome");
    SigmaAlgebra g;
    g.atoms_.reserve(space_size);
    for (std::size_t i = 0; i < space_size; ++i) g.atoms_.push_back(Event{i});
    g.index_atoms();
    return g;
}

SigmaAlgebra SigmaAlgebra::trivial(std::size_t space_size) {
    return generate(space_size, {});
}

SigmaAlgebra SigmaAlgebra::from_atoms(std::size_t space_size, std::vector<Event> atoms) {
    if (space_size == 0)
        throw Error(ErrorCode::EmptyInput, "sigma-algebra needs at least one outcome");
    std::vector<int> seen(space_size, 0);
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (atoms[j].empty()) {
            std::ostringstream msg;
            msg << "atom " << j << " is empty";
            throw Error(ErrorCode::InvalidArgument, msg.str());
        }
        atoms[j].validate(space_size);
        for (std::size_t i : atoms[j].members()) {
            if (seen[i]++) {
                std::ostringstream msg;
                msg << "outcome " << i << " belongs to more than one atom";
                throw Error(ErrorCode::InvalidArgument, msg.str());
            }
        }
    }
    for (std::size_t i = 0; i < space_size; ++i) {
        if (!seen[i]) {
            std::ostringstream msg;
            msg << "outcome " << i << " is not covered by any atom";
            throw Error(ErrorCode::InvalidArgument, msg.str());
        }
    }
    std::sort(atoms.begin(), atoms.end(), [](const Event& a, const Event& b) {
        return a.members().front() < b.members().front();
    });
    SigmaAlgebra g;
    g.atoms_ = std::move(atoms);
    g.index_atoms();
    return g;
}

SigmaAlgebra SigmaAlgebra::from_labels(std::span<const std::size_t> labels) {
    if (labels.empty())
        throw Error(ErrorCode::EmptyInput, "sigma-algebra needs at least one outcome");
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
    std::vector<Event> atoms;
    atoms.reserve(groups.size());
    for (auto& [label, members] : groups) atoms.emplace_back(std::move(members));
    return from_atoms(labels.size(), std::move(atoms));
}

SigmaAlgebra generate(std::size_t space_size, std::span<const Event> generators) {
    return SigmaAlgebra::generate(space_size, generators);
}

SigmaAlgebra discrete(std::size_t space_size) {
    return SigmaAlgebra::discrete(space_size);
}

bool refines(const SigmaAlgebra& fine, const SigmaAlgebra& coarse) {
    if (fine.space_size() != coarse.space_size())
        throw Error(ErrorCode::SizeMismatch, "sigma-algebras partition different spaces");
    for (const auto& atom : fine.atoms()) {
        const std::size_t target = coarse.atom_of(atom.members().front());
        for (std::size_t i : atom.members())
            if (coarse.atom_of(i) != target) return false;
    }
    return true;
}

void require_compatible(const ProbabilitySpace& space, const SigmaAlgebra& g) {
    if (g.space_size() != space.size()) {
        std::ostringstream msg;
        msg << "sigma-algebra partitions " << g.space_size()
            << " outcomes but the space has " << space.size();
        throw Error(ErrorCode::SizeMismatch, msg.str());
    }
}

namespace {

// Index of the first atom on which X is not a.s. constant, or atom_count().
std::size_t first_nonconstant_atom(const ProbabilitySpace& space, const SigmaAlgebra& g,
                                   const RandomVariable& x, double tolerance) {
    require_compatible(space, g);
    require_member(space, x);
    for (std::size_t j = 0; j < g.atom_count(); ++j) {
        bool have_ref = false;
        double ref = 0.0;
        for (std::size_t i : g.atom(j).members()) {
            if (space.is_null(i)) continue;
            if (!have_ref) {
                ref = x[i];
                have_ref = true;
            } else if (std::abs(x[i] - ref) > tolerance) {
                return j;
            }
        }
    }
    return g.atom_count();
}

}  // namespace

bool is_measurable(const ProbabilitySpace& space, const SigmaAlgebra& g,
                   const RandomVariable& x, double tolerance) {
    return first_nonconstant_atom(space, g, x, tolerance) == g.atom_count();
}

void require_measurable(const ProbabilitySpace& space, const SigmaAlgebra& g,
                        const RandomVariable& x, const char* what, double tolerance) {
    const std::size_t j = first_nonconstant_atom(space, g, x, tolerance);
    if (j != g.atom_count()) {
        std::ostringstream msg;
        msg << what << " is not constant on atom " << j;
        throw Error(ErrorCode::NotMeasurable, msg.str());
    }
}

RandomVariable indicator(std::size_t space_size, const Event& b) {
    b.validate(space_size);
    std::vector<double> values(space_size, 0.0);
    for (std::size_t i : b.members()) values[i] = 1.0;
    return RandomVariable(std::move(values));
}

std::vector<double> atom_probabilities(const ProbabilitySpace& space,
                                       const SigmaAlgebra& g) {
    require_compatible(space, g);
    std::vector<double> out;
    out.reserve(g.atom_count());
    for (const auto& a : g.atoms()) out.push_back(probability(space, a));
    return out;
}

RandomVariable from_atom_values(const SigmaAlgebra& g, std::span<const double> atom_values) {
    if (atom_values.size() != g.atom_count())
        throw Error(ErrorCode::SizeMismatch, "one value per atom required");
    std::vector<double> values(g.space_size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = atom_values[g.atom_of(i)];
    return RandomVariable(std::move(values));
}

Event union_of_atoms(const SigmaAlgebra& g, const std::vector<bool>& selected) {
    if (selected.size() != g.atom_count())
        throw Error(ErrorCode::SizeMismatch, "selection must flag every atom");
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < selected.size(); ++j)
        if (selected[j])
            for (std::size_t i : g.atom(j).members()) members.push_back(i);
    return Event(std::move(members));
}

}  // namespace condexp
